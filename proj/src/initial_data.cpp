#include "visco/initial_data.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "visco/dynamics.hpp"
#include "visco/errors.hpp"
#include "visco/fft.hpp"
#include "visco/kernels.hpp"
#include "visco/spectral_ops.hpp"

namespace visco {

namespace {

const cplx kI(0.0, 1.0);

double bump(double r2) { return r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0; }

}  // namespace

SpectralField build_profile_f(double m0, const SpectralGrid& grid) {
  if (!(static_cast<double>(grid.n()) / (2.0 * grid.box_scale()) > 1.0)) {
    throw ArgumentError("build_profile_f: grid does not resolve the unit ball (need n / (2L) > 1)");
  }
  if (!(m0 >= 0.0)) throw ArgumentError("build_profile_f: m0 must be nonnegative");
  SpectralField f(grid, Rank::vector);
  double sum = 0.0;
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    if (!grid.in_band(idx)) continue;
    const double b = bump(grid.wavenumber_sq(idx));
    f.at(0, idx) = b;
    f.at(1, idx) = b;
    sum += 2.0 * b * b;
  }
  if (m0 == 0.0) {
    f.set_zero();
    return f;
  }
  f *= m0 / std::sqrt(sum);
  return f;
}

SpectralField build_v_lambda(const SpectralField& f, double lambda) {
  require_rank(f, Rank::vector, "build_v_lambda");
  if (!(lambda > 1.0)) throw ArgumentError("build_v_lambda: lambda must exceed 1");
  const SpectralGrid& g = f.grid();
  const double cells = lambda * g.box_scale();
  const int shift = static_cast<int>(std::lround(cells));
  if (std::abs(cells - shift) > 1e-9) {
    throw ArgumentError("build_v_lambda: lambda * L = " + std::to_string(cells) + " is not an integer");
  }
  const int K = g.band_limit();
  SpectralField v(g, Rank::vector);
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    const cplx a[3] = {f.at(0, idx), f.at(1, idx), f.at(2, idx)};
    if (a[0] == 0.0 && a[1] == 0.0 && a[2] == 0.0) continue;
    if (g.wavenumber_sq(idx) >= 1.0) throw ArgumentError("build_v_lambda: f is not supported in the unit ball");
    const Modes3 m = g.modes(idx);
    const Modes3 s{m[0], m[1], m[2] + shift};
    if (std::abs(s[2]) > K) {
      throw ArgumentError("build_v_lambda: shifted support leaves the band (mode " + std::to_string(s[2]) +
                          " > " + std::to_string(K) + ")");
    }
    const std::size_t dst = g.index_of_modes(s);
    const Vec3 xi = g.wavenumber(dst);
    const double r = std::sqrt(norm_sq(xi));
    const Vec3 re = cross(xi, Vec3{a[0].real(), a[1].real(), a[2].real()});
    const Vec3 im = cross(xi, Vec3{a[0].imag(), a[1].imag(), a[2].imag()});
    for (int c = 0; c < 3; ++c) v.at(c, dst) = kI * cplx(re[c], im[c]) / r;
  }
  return v;
}

SpectralField build_u0(const SpectralField& v_lambda) {
  require_rank(v_lambda, Rank::vector, "build_u0");
  SpectralField u = v_lambda;
  u.symmetrize();
  return u;
}

LambdaScalingTable verify_lambda_scaling(const SpectralField& f, const std::vector<double>& lambdas) {
  require_rank(f, Rank::vector, "verify_lambda_scaling");
  if (lambdas.size() < 3) throw ArgumentError("verify_lambda_scaling: need at least 3 lambda values");
  const SpectralGrid& g = f.grid();
  const double f_norm = l2_norm(f);
  LambdaScalingTable table;
  for (double lambda : lambdas) {
    if (!(lambda > 1.0)) throw ArgumentError("verify_lambda_scaling: lambda must exceed 1");
    LambdaScalingRow row;
    row.lambda = lambda;
    row.theta_lambda = std::asin(1.0 / lambda);
    row.angle_bound = row.theta_lambda + (1.0 / g.box_scale()) / lambda;
    double sum = 0.0;
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
      const cplx a[3] = {f.at(0, idx), f.at(1, idx), f.at(2, idx)};
      if (a[0] == 0.0 && a[1] == 0.0 && a[2] == 0.0) continue;
      Vec3 xi = g.wavenumber(idx);
      xi[2] += lambda;
      const double r = std::sqrt(norm_sq(xi));
      const Vec3 re = cross(xi, Vec3{a[0].real(), a[1].real(), a[2].real()});
      const Vec3 im = cross(xi, Vec3{a[0].imag(), a[1].imag(), a[2].imag()});
      sum += (norm_sq(re) + norm_sq(im)) / r;
      row.max_support_angle = std::max(row.max_support_angle, angle_between(xi, Vec3{0.0, 0.0, 1.0}));
    }
    row.hdot_half = std::sqrt(sum);
    row.weighted = row.theta_lambda * row.hdot_half;
    row.upper_constant = f_norm > 0.0 ? row.hdot_half / (std::sqrt(lambda) * f_norm) : 0.0;
    table.rows.push_back(row);
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(table.rows.size());
  for (const auto& r : table.rows) {
    const double x = std::log(r.lambda), y = std::log(r.hdot_half);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  table.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  table.weighted_decreasing = true;
  table.support_within_bound = true;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    if (i > 0 && !(table.rows[i].weighted < table.rows[i - 1].weighted)) table.weighted_decreasing = false;
    if (table.rows[i].max_support_angle > table.rows[i].angle_bound) table.support_within_bound = false;
  }
  return table;
}

double transport_dt_limit(const SpectralField& u0) {
  require_rank(u0, Rank::vector, "transport_dt_limit");
  const SpectralGrid& g = u0.grid();
  if (u0.is_zero()) return std::numeric_limits<double>::infinity();
  PaddedTransform xf(g);
  RealVector buf(g.padded_size());
  double speed = 0.0;
  for (int c = 0; c < 3; ++c) {
    xf.to_physical(u0.component(c), buf);
    speed += kernels::max_abs(buf);
  }
  const SpectralField gu = gradient(u0);
  double grad = 0.0;
  for (int c = 0; c < 9; ++c) {
    xf.to_physical(gu.component(c), buf);
    grad = std::max(grad, kernels::max_abs(buf));
  }
  return 2.5 / (g.band_wavenumber() * speed + 3.0 * grad);
}

E0Result build_E0(const SpectralField& u0, double t_end, double dt, const Cone& cone, const E0Tolerances& tol) {
  require_rank(u0, Rank::vector, "build_E0");
  if (!(t_end > 0.0)) throw ArgumentError("build_E0: t_end must be positive");
  if (!(dt > 0.0)) throw ArgumentError("build_E0: dt must be positive");
  const SpectralGrid& g = u0.grid();
  const double scale = std::max(l2_norm(u0), 1e-300);
  if (u0.hermitian_defect() > 1e-12 * scale) throw ArgumentError("build_E0: u0 is not real-valued");
  if (divergence_defect(u0) > 1e-10 * scale * std::max(1.0, g.band_wavenumber())) {
    throw ArgumentError("build_E0: u0 is not divergence free");
  }
  const double limit = transport_dt_limit(u0);
  if (dt > limit) {
    throw ArgumentError("build_E0: dt = " + std::to_string(dt) + " exceeds the advective limit " + std::to_string(limit));
  }

  const std::size_t steps = static_cast<std::size_t>(std::max(1.0, std::ceil(t_end / dt - 1e-9)));
  const double h = t_end / static_cast<double>(steps);
  E0Result out{SpectralField(g, Rank::tensor), {}, steps, h};
  SpectralField& U = out.E0;
  if (!u0.is_zero()) {
    RhsEvaluator ev(g);
    SpectralField k1(g, Rank::tensor), k2(g, Rank::tensor), k3(g, Rank::tensor), k4(g, Rank::tensor);
    for (std::size_t i = 0; i < steps; ++i) {
      ev.evaluate_deformation(u0, U, k1);
      SpectralField s = U;
      s.axpy(h / 2.0, k1);
      ev.evaluate_deformation(u0, s, k2);
      s = U;
      s.axpy(h / 2.0, k2);
      ev.evaluate_deformation(u0, s, k3);
      s = U;
      s.axpy(h, k3);
      ev.evaluate_deformation(u0, s, k4);
      U.axpy(h / 6.0, k1);
      U.axpy(h / 3.0, k2);
      U.axpy(h / 3.0, k3);
      U.axpy(h / 6.0, k4);
      U.symmetrize();
    }
    if (!U.all_finite()) throw ConstructionFailure("finite", std::numeric_limits<double>::infinity(), 0.0);
  }
  out.residuals = structure_residuals(U, cone);
  const StructureResiduals& r = out.residuals;
  if (r.det > tol.det) throw ConstructionFailure("det_residual", r.det, tol.det);
  if (r.div_et > tol.div_et) throw ConstructionFailure("div_ET_residual", r.div_et, tol.div_et);
  if (r.curl > tol.curl) throw ConstructionFailure("curl_structure_residual", r.curl, tol.curl);
  if (r.leak > tol.leak) throw ConstructionFailure("cone_leakage", r.leak, tol.leak);
  return out;
}

}  // namespace visco
