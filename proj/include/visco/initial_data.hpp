#pragma once

#include <vector>

#include "visco/cone.hpp"
#include "visco/diagnostics.hpp"
#include "visco/field.hpp"

namespace visco {

/// Profile f with f1 = f2 = c exp(-1 / (1 - |xi|^2)) on |xi| < 1, f3 = 0, scaled to ||f||_L2 = m0.
/// Throws ArgumentError unless n / (2L) > 1.
SpectralField build_profile_f(double m0, const SpectralGrid& grid);

/// v(xi) = i xi x f(xi - lambda e3) / |xi|. The shift lambda * L must be an integer number of
/// lattice cells and the shifted support must lie in the band; otherwise ArgumentError.
SpectralField build_v_lambda(const SpectralField& f, double lambda);

/// Real part: (v(k) + conj v(-k)) / 2.
SpectralField build_u0(const SpectralField& v_lambda);

struct LambdaScalingRow {
  double lambda = 0.0;
  double hdot_half = 0.0;          // ||v_lambda||_{H^1/2 dot}
  double theta_lambda = 0.0;       // asin(1 / lambda)
  double weighted = 0.0;           // theta_lambda * ||v_lambda||
  double upper_constant = 0.0;     // ||v_lambda|| / (lambda^{1/2} ||f||)
  double max_support_angle = 0.0;  // largest angle between supp v and e3
  double angle_bound = 0.0;        // theta_lambda + (1/L) / lambda
};

struct LambdaScalingTable {
  std::vector<LambdaScalingRow> rows;
  double exponent = 0.0;  // least-squares slope of log ||v|| against log lambda
  bool weighted_decreasing = false;
  bool support_within_bound = false;
};

/// Norms are evaluated on the support of f directly (xi = eta + lambda e3 for eta in supp f),
/// so lambda is not limited by the grid band. Throws ArgumentError for fewer than 3 values.
LambdaScalingTable verify_lambda_scaling(const SpectralField& f, const std::vector<double>& lambdas);

struct E0Tolerances {
  double det = 1e-6;
  double div_et = 1e-8;
  double curl = 1e-6;
  double leak = 1e-8;
};

struct E0Result {
  SpectralField E0;
  StructureResiduals residuals;
  std::size_t steps = 0;
  double dt = 0.0;
};

/// Largest dt accepted by build_E0 for this velocity: 2.5 / (K/L sum_d max|u_d| + 3 max|grad u|).
double transport_dt_limit(const SpectralField& u0);

/// Integrates U_t + u0.grad U = (grad u0) U + grad u0, U(0) = 0, with u0 frozen, by RK4 to t_end.
/// Throws ArgumentError for an unstable dt or a non-real / non-solenoidal u0, and
/// ConstructionFailure when a residual exceeds its tolerance.
E0Result build_E0(const SpectralField& u0, double t_end, double dt, const Cone& cone,
                  const E0Tolerances& tol = {});

}  // namespace visco
