#pragma once

#include <array>
#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "visco/cone.hpp"
#include "visco/dynamics.hpp"

namespace visco {

/// Residuals of the four propagated structure identities of a deformation tensor.
struct StructureResiduals {
  double det = 0.0;     // max over padded-grid points of |det(I + E) - 1|
  double div_et = 0.0;  // ||div E^T|| / max(||E||, 1e-300)
  double curl = 0.0;    // ||curl-structure defect|| / max(||grad E||, 1e-300)
  double leak = 0.0;    // cone leakage of E
};

double det_residual(const SpectralField& E);
double div_et_residual(const SpectralField& E);
/// R_ijk = d_k E_ij - d_j E_ik - E_lj d_l E_ik + E_lk d_l E_ij, in L2 over all i, j, k.
double curl_structure_residual(const SpectralField& E);
StructureResiduals structure_residuals(const SpectralField& E, const Cone& cone);

/// ||grad f||_{H^s} for any rank, without forming the gradient.
double gradient_sobolev_norm(const SpectralField& f, int s);

struct DiagnosticRecord {
  double t = 0.0;
  double l2_u = 0.0, l2_E = 0.0, h2_u = 0.0, h2_E = 0.0;
  double grad_u_h2 = 0.0, grad_E_h1 = 0.0, div_E_h1 = 0.0;
  std::array<double, 6> I{};
  std::array<double, 8> J{};
  double det_res = 0.0, divET_res = 0.0, curl_res = 0.0;
  double leak_u = 0.0, leak_E = 0.0;
  double E0 = 0.0, E1 = 0.0, Etotal = 0.0;
  /// theta^2 (<u, u_t> + <E, E_t>) + mu theta^2 ||grad u||^2 with the model time derivatives.
  double energy_id_res = 0.0;

  // Not part of the CSV.
  double div_u_res = 0.0;     // max |k.u(k)| / ||u||
  double h2_id_rel = 0.0;     // |sum I - (H2 left side)| / scale
  double e_id_rel = 0.0;      // |sum J - theta^2 ||div E||_H1^2| / scale
  double i3_i6_rel = 0.0;
  double j6_rel = 0.0;
};

/// Running sup and trapezoid integrals of the weighted energies.
struct EnergyLedger {
  double E0 = 0.0;
  double E1 = 0.0;
  double Etotal = 0.0;
  double sup_h2 = 0.0;      // sup theta^2 (h2_u^2 + h2_E^2)
  double int_grad_u = 0.0;  // integral of theta^2 ||grad u||_H2^2
  double int_grad_E = 0.0;  // integral of theta^2 ||grad E||_H1^2
  double last_t = 0.0;
  double last_grad_u = 0.0;
  double last_grad_E = 0.0;
  std::size_t samples = 0;
  std::string quadrature = "trapezoid";
};

/// Fold one record into the ledger. Throws ArgumentError if rec.t precedes the last sample.
EnergyLedger update_ledger(const EnergyLedger& ledger, const DiagnosticRecord& rec, double theta0);

std::array<double, 6> compute_I_terms(const FlowState& s, double theta0);
std::array<double, 6> compute_I_terms(const FlowState& s, const RhsTerms& terms, double theta0);
/// J terms with the supplied u_t; E_t and the other pieces come from the model.
std::array<double, 8> compute_J_terms(const FlowState& s, const SpectralField& du_dt, double theta0);
std::array<double, 8> compute_J_terms(const FlowState& s, const RhsTerms& terms, double theta0);

/// Defining identities of the two energy decompositions, with their Cauchy-Schwarz scales.
struct IdentityResiduals {
  double h2 = 0.0, h2_scale = 0.0;
  double e = 0.0, e_scale = 0.0;
  double i3_i6 = 0.0, i3_i6_scale = 0.0;
  double j6 = 0.0, j6_scale = 0.0;
};
IdentityResiduals identity_residuals(const FlowState& s, const RhsTerms& terms, double theta0);

double energy_identity_residual(const FlowState& s, const RhsTerms& terms, double theta0);

/// Diagnostics of one state. The evaluator, if given, is reused for the rhs terms.
DiagnosticRecord record(const FlowState& s, const Cone& cone, double theta0, RhsEvaluator* ev = nullptr);

struct TransportCheck {
  double value = 0.0;     // theta^2 <u.grad(grad^2 E), grad^2 E>
  double scale = 0.0;     // theta^2 ||u||_inf ||E||_{H3 dot} ||E||_{H2 dot}
  double relative = 0.0;
};
TransportCheck transport_annihilation_check(const FlowState& s, double theta0);

struct AngleGainOptions {
  /// Modes with sum_c |E_c(k)| <= threshold * max_k sum_c |E_c(k)| are left out of the support.
  double support_threshold = 0.0;
  double precondition_tolerance = 1e-10;
};

struct AngleGainResult {
  double max_ratio = 0.0;      // max LHS / (s_eff * RHS)
  double nominal_ratio = 0.0;  // max LHS / (theta0 * RHS)
  double sin_eff = 0.0;        // largest |b| / |eta| over interacting pairs
  double theta_eff = 0.0;      // asin(sin_eff)
  double theta0 = 0.0;
  Vec3 worst_mode{0.0, 0.0, 0.0};
  double a_part_max = 0.0;         // max |sum a_j E_jk(w) E_ik(eta)|
  double direct_mismatch = 0.0;    // split assembly vs FFT product, relative
  double max_angle_eta_xi = 0.0;   // largest angle between eta and xi among pairs
  std::size_t pairs = 0;
};
/// Throws PreconditionError when ||div E^T|| / ||E|| exceeds the tolerance.
AngleGainResult angle_gain_bound_check(const SpectralField& E, double theta0, const AngleGainOptions& opt = {});

struct Lemma31Report {
  double lhs = 0.0;            // ||grad E||_H1
  double rhs_linear = 0.0;     // ||div E||_H1
  double rhs_quadratic = 0.0;  // theta0 ||E||_H2 ||grad E||_H1
  double ratio = 0.0;
  double curl_h1 = 0.0;        // ||curl E||_H1 (row curl)
  bool split_bound_holds = true;     // ||grad E|| <= ||div E|| + ||curl E||
  double pythagoras_defect = 0.0;    // | ||grad E||^2 - ||div E||^2 - ||curl E||^2 | / ||grad E||^2
  double curl_residual = 0.0;
  bool applicable = true;
};
Lemma31Report lemma31_report(const SpectralField& E, double theta0, double curl_tolerance = 1e-6);

const std::vector<std::string>& csv_columns();
void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const DiagnosticRecord& rec);

}  // namespace visco
