#include "visco/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>

#include "visco/errors.hpp"
#include "visco/fft.hpp"
#include "visco/kernels.hpp"
#include "visco/spectral_ops.hpp"

namespace visco {

namespace {

using Index = std::ptrdiff_t;
const cplx kI(0.0, 1.0);
constexpr double kTiny = 1e-300;

double safe_div(double a, double b) { return a / std::max(b, kTiny); }

struct StructureWork {
  double det = 0.0;
  double curl = 0.0;
};

// Shares the physical-space transforms of E and grad E between det and curl residuals.
StructureWork structure_work(const SpectralField& E, bool want_det, bool want_curl) {
  require_rank(E, Rank::tensor, "structure residual");
  const SpectralGrid& g = E.grid();
  const std::size_t N = g.size();
  const std::size_t M = g.padded_size();
  StructureWork w;
  if (E.is_zero()) return w;

  PaddedTransform xf(g);
  CoeffVector gradE(27 * N);
  for (std::size_t idx = 0; idx < N; ++idx) {
    if (!g.in_band(idx)) continue;
    const Vec3 k = g.wavenumber(idx);
    for (int c = 0; c < 9; ++c) {
      for (int l = 0; l < 3; ++l) gradE[(3 * c + l) * N + idx] = kI * k[l] * E.at(c, idx);
    }
  }
  const int n_in = want_curl ? 36 : 9;
  RealVector phys(static_cast<std::size_t>(n_in) * M);
  {
    std::vector<std::span<const cplx>> in;
    std::vector<std::span<double>> out;
    for (int c = 0; c < 9; ++c) in.push_back(E.component(c));
    if (want_curl) {
      for (int c = 0; c < 27; ++c) in.push_back(std::span<const cplx>(gradE).subspan(c * N, N));
    }
    for (int f = 0; f < n_in; ++f) out.push_back(std::span<double>(phys).subspan(f * M, M));
    xf.to_physical(in, out);
  }
  const double* P = phys.data();

  if (want_det) {
    double worst = 0.0;
    const Index total = static_cast<Index>(M);
#pragma omp parallel for reduction(max : worst) schedule(static)
    for (Index p = 0; p < total; ++p) {
      double F[9];
      for (int c = 0; c < 9; ++c) F[c] = P[c * M + p] + ((c % 4 == 0) ? 1.0 : 0.0);
      const double d = F[0] * (F[4] * F[8] - F[5] * F[7]) - F[1] * (F[3] * F[8] - F[5] * F[6]) +
                       F[2] * (F[3] * F[7] - F[4] * F[6]);
      worst = std::max(worst, std::abs(d - 1.0));
    }
    w.det = worst;
  }

  if (want_curl) {
    // G[j][i][k] = sum_l E_lj d_l E_ik
    RealVector prod(27 * M);
    const Index total = static_cast<Index>(M);
#pragma omp parallel for schedule(static)
    for (Index p = 0; p < total; ++p) {
      for (int j = 0; j < 3; ++j) {
        for (int i = 0; i < 3; ++i) {
          for (int k = 0; k < 3; ++k) {
            double s = 0.0;
            for (int l = 0; l < 3; ++l) s += P[(3 * l + j) * M + p] * P[(9 + 3 * (3 * i + k) + l) * M + p];
            prod[(9 * j + 3 * i + k) * M + p] = s;
          }
        }
      }
    }
    CoeffVector G(27 * N);
    std::vector<std::span<const double>> vals;
    std::vector<std::span<cplx>> spec;
    for (int f = 0; f < 27; ++f) {
      vals.push_back(std::span<const double>(prod).subspan(f * M, M));
      spec.push_back(std::span<cplx>(G).subspan(f * N, N));
    }
    xf.from_physical(vals, spec);
    double rr = 0.0, gg = 0.0;
    for (std::size_t idx = 0; idx < N; ++idx) {
      if (!g.in_band(idx)) continue;
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          for (int k = 0; k < 3; ++k) {
            const cplx r = gradE[(3 * (3 * i + j) + k) * N + idx] - gradE[(3 * (3 * i + k) + j) * N + idx] -
                           G[(9 * j + 3 * i + k) * N + idx] + G[(9 * k + 3 * i + j) * N + idx];
            rr += std::norm(r);
            gg += std::norm(gradE[(3 * (3 * i + j) + k) * N + idx]);
          }
        }
      }
    }
    w.curl = safe_div(std::sqrt(rr), std::sqrt(gg));
  }
  return w;
}

double grad_weighted(const SpectralField& f, const SpectralField& g, int s) {
  const SpectralGrid& grid = f.grid();
  RealVector w(grid.size());
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const double kk = grid.wavenumber_sq(idx);
    double acc = 0.0, term = 1.0;
    for (int j = 0; j <= s; ++j) {
      acc += term;
      term *= kk;
    }
    w[idx] = kk * acc;
  }
  double total = 0.0;
  for (int c = 0; c < f.components(); ++c) total += kernels::weighted_inner(w, f.component(c), g.component(c));
  return total;
}

}  // namespace

double det_residual(const SpectralField& E) { return structure_work(E, true, false).det; }

double div_et_residual(const SpectralField& E) {
  require_rank(E, Rank::tensor, "div_et_residual");
  return safe_div(l2_norm(divergence(transpose(E))), l2_norm(E));
}

double curl_structure_residual(const SpectralField& E) { return structure_work(E, false, true).curl; }

StructureResiduals structure_residuals(const SpectralField& E, const Cone& cone) {
  const StructureWork w = structure_work(E, true, true);
  StructureResiduals r;
  r.det = w.det;
  r.curl = w.curl;
  r.div_et = div_et_residual(E);
  r.leak = cone_leakage(E, cone);
  return r;
}

double gradient_sobolev_norm(const SpectralField& f, int s) {
  if (s < 0) throw ArgumentError("gradient_sobolev_norm: order must be nonnegative");
  return std::sqrt(std::max(0.0, grad_weighted(f, f, s)));
}

EnergyLedger update_ledger(const EnergyLedger& ledger, const DiagnosticRecord& rec, double theta0) {
  if (ledger.samples > 0 && rec.t < ledger.last_t) {
    throw ArgumentError("update_ledger: record time " + std::to_string(rec.t) + " precedes " +
                        std::to_string(ledger.last_t));
  }
  const double th2 = theta0 * theta0;
  const double gu = th2 * rec.grad_u_h2 * rec.grad_u_h2;
  const double gE = th2 * rec.grad_E_h1 * rec.grad_E_h1;
  EnergyLedger out = ledger;
  if (ledger.samples > 0) {
    const double h = rec.t - ledger.last_t;
    out.int_grad_u += 0.5 * h * (ledger.last_grad_u + gu);
    out.int_grad_E += 0.5 * h * (ledger.last_grad_E + gE);
  }
  out.sup_h2 = std::max(ledger.samples > 0 ? ledger.sup_h2 : 0.0,
                        th2 * (rec.h2_u * rec.h2_u + rec.h2_E * rec.h2_E));
  out.last_t = rec.t;
  out.last_grad_u = gu;
  out.last_grad_E = gE;
  out.samples = ledger.samples + 1;
  out.E0 = out.sup_h2 + out.int_grad_u;
  out.E1 = out.int_grad_E;
  out.Etotal = out.E0 + out.E1;
  return out;
}

std::array<double, 6> compute_I_terms(const FlowState& s, const RhsTerms& t, double theta0) {
  const double th2 = theta0 * theta0;
  return {-th2 * inner_hdot(t.advect_u, s.u, 2.0), th2 * inner_hdot(t.div_eet, s.u, 2.0),
          th2 * inner_hdot(t.div_e, s.u, 2.0),     -th2 * inner_hdot(t.advect_E, s.E, 2.0),
          th2 * inner_hdot(t.stretch, s.E, 2.0),   th2 * inner_hdot(t.grad_u, s.E, 2.0)};
}

std::array<double, 6> compute_I_terms(const FlowState& s, double theta0) {
  RhsEvaluator ev(s.grid());
  return compute_I_terms(s, ev.terms(s), theta0);
}

std::array<double, 8> compute_J_terms(const FlowState& s, const RhsTerms& t, double theta0) {
  const double th2 = theta0 * theta0;
  const SpectralField grad_p = gradient(t.pressure);
  return {th2 * (inner_sobolev(t.du, t.div_e, 1) + inner_sobolev(s.u, divergence(t.dE), 1)),
          -th2 * inner_sobolev(t.grad_u, t.advect_E, 1),
          th2 * inner_sobolev(t.grad_u, t.stretch, 1),
          th2 * inner_sobolev(t.grad_u, t.grad_u, 1),
          th2 * inner_sobolev(t.div_e, t.advect_u, 1),
          th2 * inner_sobolev(t.div_e, grad_p, 1),
          -s.mu * th2 * inner_sobolev(t.div_e, laplacian(s.u), 1),
          -th2 * inner_sobolev(t.div_e, t.div_eet, 1)};
}

std::array<double, 8> compute_J_terms(const FlowState& s, const SpectralField& du_dt, double theta0) {
  require_rank(du_dt, Rank::vector, "compute_J_terms");
  RhsEvaluator ev(s.grid());
  RhsTerms t = ev.terms(s);
  t.du = du_dt;
  return compute_J_terms(s, t, theta0);
}

IdentityResiduals identity_residuals(const FlowState& s, const RhsTerms& t, double theta0) {
  const double th2 = theta0 * theta0;
  const auto I = compute_I_terms(s, t, theta0);
  const auto J = compute_J_terms(s, t, theta0);
  IdentityResiduals r;

  const double lu = th2 * inner_hdot(s.u, t.du, 2.0);
  const double lE = th2 * inner_hdot(s.E, t.dE, 2.0);
  const double diss = s.mu * th2 * inner_hdot(s.u, s.u, 3.0);
  double sum_i = 0.0, abs_i = 0.0;
  for (double v : I) {
    sum_i += v;
    abs_i += std::abs(v);
  }
  r.h2 = lu + lE + diss - sum_i;
  r.h2_scale = abs_i + std::abs(lu) + std::abs(lE) + diss;

  const double div_sq = th2 * inner_sobolev(t.div_e, t.div_e, 1);
  double sum_j = 0.0, abs_j = 0.0;
  for (double v : J) {
    sum_j += v;
    abs_j += std::abs(v);
  }
  r.e = sum_j - div_sq;
  r.e_scale = abs_j + div_sq;

  r.i3_i6 = I[2] + I[5];
  r.i3_i6_scale = th2 * (hdot_norm(t.div_e, 2.0) * hdot_norm(s.u, 2.0) + hdot_norm(t.grad_u, 2.0) * hdot_norm(s.E, 2.0));
  r.j6 = J[5];
  r.j6_scale = th2 * sobolev_norm(t.div_e, 1) * sobolev_norm(gradient(t.pressure), 1);
  return r;
}

double energy_identity_residual(const FlowState& s, const RhsTerms& t, double theta0) {
  const double th2 = theta0 * theta0;
  return th2 * (inner_sobolev(s.u, t.du, 0) + inner_sobolev(s.E, t.dE, 0)) +
         s.mu * th2 * gradient_sobolev_norm(s.u, 0) * gradient_sobolev_norm(s.u, 0);
}

DiagnosticRecord record(const FlowState& s, const Cone& cone, double theta0, RhsEvaluator* ev) {
  std::unique_ptr<RhsEvaluator> own;
  if (ev == nullptr) {
    own = std::make_unique<RhsEvaluator>(s.grid());
    ev = own.get();
  }
  const RhsTerms t = ev->terms(s);
  DiagnosticRecord r;
  r.t = s.t;
  r.l2_u = l2_norm(s.u);
  r.l2_E = l2_norm(s.E);
  r.h2_u = sobolev_norm(s.u, 2);
  r.h2_E = sobolev_norm(s.E, 2);
  r.grad_u_h2 = gradient_sobolev_norm(s.u, 2);
  r.grad_E_h1 = gradient_sobolev_norm(s.E, 1);
  r.div_E_h1 = sobolev_norm(t.div_e, 1);
  r.I = compute_I_terms(s, t, theta0);
  r.J = compute_J_terms(s, t, theta0);
  const StructureResiduals sr = structure_residuals(s.E, cone);
  r.det_res = sr.det;
  r.divET_res = sr.div_et;
  r.curl_res = sr.curl;
  r.leak_u = cone_leakage(s.u, cone);
  r.leak_E = sr.leak;
  r.energy_id_res = energy_identity_residual(s, t, theta0);
  r.div_u_res = safe_div(divergence_defect(s.u), r.l2_u);
  const IdentityResiduals id = identity_residuals(s, t, theta0);
  r.h2_id_rel = safe_div(std::abs(id.h2), id.h2_scale);
  r.e_id_rel = safe_div(std::abs(id.e), id.e_scale);
  r.i3_i6_rel = safe_div(std::abs(id.i3_i6), id.i3_i6_scale);
  r.j6_rel = safe_div(std::abs(id.j6), id.j6_scale);
  return r;
}

TransportCheck transport_annihilation_check(const FlowState& s, double theta0) {
  const SpectralGrid& g = s.grid();
  const std::size_t N = g.size();
  const std::size_t M = g.padded_size();
  const double th2 = theta0 * theta0;
  TransportCheck out;
  if (s.u.is_zero() || s.E.is_zero()) return out;

  PaddedTransform xf(g);
  RealVector u(3 * M);
  {
    std::vector<std::span<const cplx>> in;
    std::vector<std::span<double>> dst;
    for (int c = 0; c < 3; ++c) {
      in.push_back(s.u.component(c));
      dst.push_back(std::span<double>(u).subspan(c * M, M));
    }
    xf.to_physical(in, dst);
  }
  const double u_inf = kernels::max_abs(u);

  CoeffVector spec(4 * N);
  RealVector phys(4 * M);
  double total = 0.0;
  for (int a = 0; a < 3; ++a) {
    for (int b = a; b < 3; ++b) {
      const double weight = a == b ? 1.0 : 2.0;
      for (int c = 0; c < 9; ++c) {
        std::fill(spec.begin(), spec.end(), cplx(0.0));
        for (std::size_t idx = 0; idx < N; ++idx) {
          if (!g.in_band(idx)) continue;
          const Vec3 k = g.wavenumber(idx);
          const cplx G = -k[a] * k[b] * s.E.at(c, idx);
          spec[idx] = G;
          for (int l = 0; l < 3; ++l) spec[(1 + l) * N + idx] = kI * k[l] * G;
        }
        std::vector<std::span<const cplx>> in;
        std::vector<std::span<double>> dst;
        for (int f = 0; f < 4; ++f) {
          in.push_back(std::span<const cplx>(spec).subspan(f * N, N));
          dst.push_back(std::span<double>(phys).subspan(f * M, M));
        }
        xf.to_physical(in, dst);
        double acc = 0.0;
        for (std::size_t p = 0; p < M; ++p) {
          const double adv = u[p] * phys[M + p] + u[M + p] * phys[2 * M + p] + u[2 * M + p] * phys[3 * M + p];
          acc += adv * phys[p];
        }
        total += weight * acc / static_cast<double>(M);
      }
    }
  }
  out.value = th2 * total;
  out.scale = th2 * u_inf * hdot_norm(s.E, 3.0) * hdot_norm(s.E, 2.0);
  out.relative = safe_div(std::abs(out.value), out.scale);
  return out;
}

AngleGainResult angle_gain_bound_check(const SpectralField& E, double theta0, const AngleGainOptions& opt) {
  require_rank(E, Rank::tensor, "angle_gain_bound_check");
  const double div_res = div_et_residual(E);
  if (div_res > opt.precondition_tolerance) {
    throw PreconditionError("angle_gain_bound_check: div E^T residual " + std::to_string(div_res) +
                                " exceeds tolerance",
                            div_res);
  }
  const SpectralGrid& g = E.grid();
  const std::size_t N = g.size();
  const int K = g.band_limit();
  AngleGainResult res;
  res.theta0 = theta0;
  if (E.is_zero()) return res;

  std::vector<double> mag(N, 0.0);
  double peak = 0.0;
  for (std::size_t idx = 0; idx < N; ++idx) {
    if (!g.in_band(idx)) continue;
    for (int c = 0; c < 9; ++c) mag[idx] += std::abs(E.at(c, idx));
    peak = std::max(peak, mag[idx]);
  }
  std::vector<std::size_t> support;
  for (std::size_t idx = 0; idx < N; ++idx) {
    if (g.in_band(idx) && mag[idx] > 0.0 && mag[idx] > opt.support_threshold * peak && g.wavenumber_sq(idx) > 0.0) {
      support.push_back(idx);
    }
  }

  std::vector<cplx> lhs(9 * N), apart(9 * N);
  std::vector<double> rhs(9 * N, 0.0);
  for (std::size_t p : support) {
    const Vec3 eta = g.wavenumber(p);
    const Modes3 me = g.modes(p);
    const double eta_norm = std::sqrt(norm_sq(eta));
    for (std::size_t q : support) {
      const Modes3 mw = g.modes(q);
      const Modes3 mx{me[0] + mw[0], me[1] + mw[1], me[2] + mw[2]};
      if (std::abs(mx[0]) > K || std::abs(mx[1]) > K || std::abs(mx[2]) > K) continue;
      const std::size_t x = g.index_of_modes(mx);
      const Vec3 w = g.wavenumber(q);
      const EtaSplit sp = split_eta(eta, w);
      const double sin_pair = std::sqrt(norm_sq(sp.b)) / eta_norm;
      res.sin_eff = std::max(res.sin_eff, sin_pair);
      const Vec3 xi = g.wavenumber(x);
      if (norm_sq(xi) > 0.0) res.max_angle_eta_xi = std::max(res.max_angle_eta_xi, angle_between(eta, xi));
      ++res.pairs;
      for (int k = 0; k < 3; ++k) {
        cplx bk = 0.0, ak = 0.0;
        double nk = 0.0;
        for (int j = 0; j < 3; ++j) {
          const cplx e = E.at(3 * j + k, q);
          bk += sp.b[j] * e;
          ak += sp.a[j] * e;
          nk += std::abs(e);
        }
        for (int i = 0; i < 3; ++i) {
          const cplx ei = E.at(3 * i + k, p);
          lhs[(3 * i + k) * N + x] += bk * ei;
          apart[(3 * i + k) * N + x] += ak * ei;
          rhs[(3 * i + k) * N + x] += nk * eta_norm * std::abs(ei);
        }
      }
    }
  }
  res.theta_eff = std::asin(std::min(1.0, res.sin_eff));

  // Direct product sum_j (d_j E_ik) E_jk through the padded FFT path.
  const SpectralField direct = [&] {
    SpectralField out(g, Rank::tensor);
    for (int i = 0; i < 3; ++i) {
      for (int k = 0; k < 3; ++k) {
        for (int j = 0; j < 3; ++j) {
          SpectralField a(g, Rank::scalar), b(g, Rank::scalar);
          for (std::size_t idx = 0; idx < N; ++idx) {
            if (!g.in_band(idx)) continue;
            a.at(0, idx) = kI * g.wavenumber(idx)[j] * E.at(3 * i + k, idx);
            b.at(0, idx) = E.at(3 * j + k, idx);
          }
          const SpectralField ab = dealiased_product(a, b);
          auto dst = out.component(3 * i + k);
          auto src = ab.component(0);
          for (std::size_t idx = 0; idx < N; ++idx) dst[idx] += src[idx];
        }
      }
    }
    return out;
  }();

  double worst = 0.0, worst_nominal = 0.0, mismatch = 0.0, direct_peak = 0.0;
  for (std::size_t x = 0; x < N; ++x) {
    for (int c = 0; c < 9; ++c) {
      const std::size_t slot = c * N + x;
      const double l = std::abs(lhs[slot]);
      res.a_part_max = std::max(res.a_part_max, std::abs(apart[slot]));
      mismatch = std::max(mismatch, std::abs(direct.at(c, x) - kI * lhs[slot]));
      direct_peak = std::max(direct_peak, std::abs(direct.at(c, x)));
      const double r = rhs[slot];
      if (r <= 0.0) continue;
      const double ratio = res.sin_eff > 0.0 ? l / (res.sin_eff * r) : (l > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
      if (ratio > worst) {
        worst = ratio;
        res.worst_mode = g.wavenumber(x);
      }
      if (theta0 > 0.0) worst_nominal = std::max(worst_nominal, l / (theta0 * r));
    }
  }
  res.max_ratio = worst;
  res.nominal_ratio = worst_nominal;
  res.direct_mismatch = safe_div(mismatch, direct_peak);
  return res;
}

Lemma31Report lemma31_report(const SpectralField& E, double theta0, double curl_tolerance) {
  require_rank(E, Rank::tensor, "lemma31_report");
  Lemma31Report r;
  r.lhs = gradient_sobolev_norm(E, 1);
  r.rhs_linear = sobolev_norm(divergence(E), 1);
  r.rhs_quadratic = theta0 * sobolev_norm(E, 2) * r.lhs;
  r.ratio = r.lhs > 0.0 ? r.lhs / (r.rhs_linear + r.rhs_quadratic) : 0.0;
  r.curl_h1 = sobolev_norm(curl_rows(E), 1);
  r.split_bound_holds = r.lhs <= (r.rhs_linear + r.curl_h1) * (1.0 + 1e-12);
  r.pythagoras_defect =
      safe_div(std::abs(r.lhs * r.lhs - r.rhs_linear * r.rhs_linear - r.curl_h1 * r.curl_h1), r.lhs * r.lhs);
  r.curl_residual = curl_structure_residual(E);
  r.applicable = r.curl_residual <= curl_tolerance;
  return r;
}

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols = {
      "t",     "l2_u",    "l2_E",      "h2_u",     "h2_E",   "grad_u_h2", "grad_E_h1", "div_E_h1",
      "I1",    "I2",      "I3",        "I4",       "I5",     "I6",        "J1",        "J2",
      "J3",    "J4",      "J5",        "J6",       "J7",     "J8",        "det_res",   "divET_res",
      "curl_res", "leak_u", "leak_E",  "E0",       "E1",     "Etotal",    "energy_id_res"};
  return cols;
}

void write_csv_header(std::ostream& out) {
  const auto& cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
}

void write_csv_row(std::ostream& out, const DiagnosticRecord& r) {
  std::vector<double> v = {r.t, r.l2_u, r.l2_E, r.h2_u, r.h2_E, r.grad_u_h2, r.grad_E_h1, r.div_E_h1};
  v.insert(v.end(), r.I.begin(), r.I.end());
  v.insert(v.end(), r.J.begin(), r.J.end());
  for (double x : {r.det_res, r.divET_res, r.curl_res, r.leak_u, r.leak_E, r.E0, r.E1, r.Etotal, r.energy_id_res}) {
    v.push_back(x);
  }
  char buf[40];
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", v[i]);
    out << (i ? "," : "") << buf;
  }
  out << '\n';
}

}  // namespace visco
