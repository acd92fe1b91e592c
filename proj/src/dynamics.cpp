#include "visco/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "visco/errors.hpp"
#include "visco/kernels.hpp"
#include "visco/spectral_ops.hpp"

namespace visco {

namespace {

using Index = std::ptrdiff_t;
const cplx kI(0.0, 1.0);

// Offsets (in units of padded fields) of the physical inputs.
constexpr int kU = 0;
constexpr int kGradU = 3;
constexpr int kE = 12;
constexpr int kGradE = 21;
constexpr int kInputs = 48;

// Symmetric index pairs of E E^T.
constexpr int kSymI[6] = {0, 0, 0, 1, 1, 2};
constexpr int kSymJ[6] = {0, 1, 2, 1, 2, 2};

int sym_slot(int i, int j) {
  if (i > j) std::swap(i, j);
  for (int s = 0; s < 6; ++s) {
    if (kSymI[s] == i && kSymJ[s] == j) return s;
  }
  return -1;
}

}  // namespace

FlowState::FlowState(const SpectralGrid& grid, double mu_)
    : u(grid, Rank::vector), E(grid, Rank::tensor), mu(mu_) {}

FlowState::FlowState(SpectralField u_, SpectralField E_, double t_, double mu_)
    : u(std::move(u_)), E(std::move(E_)), t(t_), mu(mu_) {
  require_rank(u, Rank::vector, "FlowState velocity");
  require_rank(E, Rank::tensor, "FlowState deformation");
  require_same_grid(u.grid(), E.grid(), "FlowState");
}

RhsTerms::RhsTerms(const SpectralGrid& g)
    : advect_u(g, Rank::vector),
      div_eet(g, Rank::vector),
      div_e(g, Rank::vector),
      div_et(g, Rank::vector),
      raw(g, Rank::vector),
      pressure(g, Rank::scalar),
      du(g, Rank::vector),
      grad_u(g, Rank::tensor),
      advect_E(g, Rank::tensor),
      stretch(g, Rank::tensor),
      dE(g, Rank::tensor) {}

RhsEvaluator::RhsEvaluator(const SpectralGrid& grid)
    : grid_(grid),
      xf_(grid),
      grad_u_(9 * grid.size()),
      grad_E_(27 * grid.size()),
      phys_in_(kInputs * grid.padded_size()),
      phys_out_(27 * grid.padded_size()),
      spec_out_(27 * grid.size()) {
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    if (grid.in_band(idx)) band_.push_back(idx);
  }
}

void RhsEvaluator::products(const SpectralField& u, const SpectralField& E, Mode mode) {
  require_rank(u, Rank::vector, "rhs velocity");
  require_rank(E, Rank::tensor, "rhs deformation");
  require_same_grid(u.grid(), grid_, "rhs velocity");
  require_same_grid(E.grid(), grid_, "rhs deformation");
  const std::size_t N = grid_.size();
  const std::size_t M = grid_.padded_size();

  const Index nb = static_cast<Index>(band_.size());
#pragma omp parallel for schedule(static)
  for (Index b = 0; b < nb; ++b) {
    const std::size_t idx = band_[b];
    const Vec3 k = grid_.wavenumber(idx);
    for (int i = 0; i < 3; ++i) {
      const cplx ui = u.at(i, idx);
      for (int j = 0; j < 3; ++j) grad_u_[(3 * i + j) * N + idx] = kI * k[j] * ui;
    }
    for (int c = 0; c < 9; ++c) {
      const cplx e = E.at(c, idx);
      for (int l = 0; l < 3; ++l) grad_E_[(3 * c + l) * N + idx] = kI * k[l] * e;
    }
  }

  std::vector<std::span<const cplx>> in;
  std::vector<std::span<double>> out;
  in.reserve(kInputs);
  auto phys = [&](int f) { return std::span<double>(phys_in_).subspan(f * M, M); };
  for (int c = 0; c < 3; ++c) in.push_back(u.component(c));
  for (int c = 0; c < 9; ++c) in.push_back(std::span<const cplx>(grad_u_).subspan(c * N, N));
  for (int c = 0; c < 9; ++c) in.push_back(E.component(c));
  for (int c = 0; c < 27; ++c) in.push_back(std::span<const cplx>(grad_E_).subspan(c * N, N));
  for (int f = 0; f < kInputs; ++f) out.push_back(phys(f));
  xf_.to_physical(in, out);

  const double* P = phys_in_.data();
  double* Q = phys_out_.data();
  const Index total = static_cast<Index>(M);
  const bool momentum = mode != Mode::deformation_only;
  const bool split = mode == Mode::full_split;
  // Output layout: full -> adv(3) eet(6) NE(9); split -> adv(3) eet(6) advE(9) stretch(9);
  // deformation_only -> NE(9).
  const int ne_base = momentum ? 9 : 0;
#pragma omp parallel for schedule(static)
  for (Index p = 0; p < total; ++p) {
    double uu[3], gu[9], e[9], ge[27];
    for (int c = 0; c < 3; ++c) uu[c] = P[(kU + c) * M + p];
    for (int c = 0; c < 9; ++c) gu[c] = P[(kGradU + c) * M + p];
    for (int c = 0; c < 9; ++c) e[c] = P[(kE + c) * M + p];
    for (int c = 0; c < 27; ++c) ge[c] = P[(kGradE + c) * M + p];
    if (momentum) {
      for (int i = 0; i < 3; ++i) {
        Q[i * M + p] = uu[0] * gu[3 * i] + uu[1] * gu[3 * i + 1] + uu[2] * gu[3 * i + 2];
      }
      for (int s = 0; s < 6; ++s) {
        const int i = kSymI[s], j = kSymJ[s];
        Q[(3 + s) * M + p] = e[3 * i] * e[3 * j] + e[3 * i + 1] * e[3 * j + 1] + e[3 * i + 2] * e[3 * j + 2];
      }
    }
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const int c = 3 * i + j;
        const double adv = uu[0] * ge[3 * c] + uu[1] * ge[3 * c + 1] + uu[2] * ge[3 * c + 2];
        const double str = gu[3 * i] * e[j] + gu[3 * i + 1] * e[3 + j] + gu[3 * i + 2] * e[6 + j];
        if (split) {
          Q[(9 + c) * M + p] = adv;
          Q[(18 + c) * M + p] = str;
        } else {
          Q[(ne_base + c) * M + p] = str - adv;
        }
      }
    }
  }

  const int n_out = split ? 27 : (momentum ? 18 : 9);
  std::vector<std::span<const double>> vals;
  std::vector<std::span<cplx>> spec;
  for (int f = 0; f < n_out; ++f) {
    vals.push_back(std::span<const double>(phys_out_).subspan(f * M, M));
    spec.push_back(std::span<cplx>(spec_out_).subspan(f * N, N));
  }
  xf_.from_physical(vals, spec);
}

void RhsEvaluator::evaluate(const SpectralField& u, const SpectralField& E, SpectralField& nu,
                            SpectralField& dE, bool freeze) {
  products(u, E, Mode::full);
  const std::size_t N = grid_.size();
  nu.set_zero();
  dE.set_zero();
  const cplx* S = spec_out_.data();
  const Index nb = static_cast<Index>(band_.size());
#pragma omp parallel for schedule(static)
  for (Index b = 0; b < nb; ++b) {
    const std::size_t idx = band_[b];
    const Vec3 k = grid_.wavenumber(idx);
    cplx raw[3];
    for (int i = 0; i < 3; ++i) {
      cplx flux = 0.0;
      for (int j = 0; j < 3; ++j) {
        flux += k[j] * (S[(3 + sym_slot(i, j)) * N + idx] + E.at(3 * i + j, idx) + E.at(3 * j + i, idx));
      }
      raw[i] = -S[i * N + idx] + kI * flux;
    }
    const double kk = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    if (kk > 0.0) {
      const cplx kr = (k[0] * raw[0] + k[1] * raw[1] + k[2] * raw[2]) / kk;
      for (int i = 0; i < 3; ++i) raw[i] -= k[i] * kr;
    }
    for (int i = 0; i < 3; ++i) nu.at(i, idx) = raw[i];
    if (!freeze) {
      for (int i = 0; i < 3; ++i) {
        const cplx ui = u.at(i, idx);
        for (int j = 0; j < 3; ++j) {
          dE.at(3 * i + j, idx) = S[(9 + 3 * i + j) * N + idx] + kI * k[j] * ui;
        }
      }
    }
  }
}

void RhsEvaluator::evaluate_deformation(const SpectralField& u, const SpectralField& E, SpectralField& dE) {
  products(u, E, Mode::deformation_only);
  const std::size_t N = grid_.size();
  dE.set_zero();
  const Index nb = static_cast<Index>(band_.size());
#pragma omp parallel for schedule(static)
  for (Index b = 0; b < nb; ++b) {
    const std::size_t idx = band_[b];
    const Vec3 k = grid_.wavenumber(idx);
    for (int i = 0; i < 3; ++i) {
      const cplx ui = u.at(i, idx);
      for (int j = 0; j < 3; ++j) dE.at(3 * i + j, idx) = spec_out_[(3 * i + j) * N + idx] + kI * k[j] * ui;
    }
  }
}

RhsTerms RhsEvaluator::terms(const FlowState& s) {
  products(s.u, s.E, Mode::full_split);
  const std::size_t N = grid_.size();
  RhsTerms t(grid_);
  for (std::size_t b = 0; b < band_.size(); ++b) {
    const std::size_t idx = band_[b];
    const Vec3 k = grid_.wavenumber(idx);
    const double kk = norm_sq(k);
    cplx raw[3];
    for (int i = 0; i < 3; ++i) {
      cplx deet = 0.0, de = 0.0, det = 0.0;
      for (int j = 0; j < 3; ++j) {
        deet += k[j] * spec_out_[(3 + sym_slot(i, j)) * N + idx];
        de += k[j] * s.E.at(3 * i + j, idx);
        det += k[j] * s.E.at(3 * j + i, idx);
      }
      t.advect_u.at(i, idx) = spec_out_[i * N + idx];
      t.div_eet.at(i, idx) = kI * deet;
      t.div_e.at(i, idx) = kI * de;
      t.div_et.at(i, idx) = kI * det;
      raw[i] = -t.advect_u.at(i, idx) + t.div_eet.at(i, idx) + t.div_e.at(i, idx) + t.div_et.at(i, idx);
      t.raw.at(i, idx) = raw[i];
    }
    cplx kr = 0.0;
    if (kk > 0.0) kr = (k[0] * raw[0] + k[1] * raw[1] + k[2] * raw[2]) / kk;
    t.pressure.at(0, idx) = -kI * kr;
    for (int i = 0; i < 3; ++i) {
      t.du.at(i, idx) = raw[i] - k[i] * kr - s.mu * kk * s.u.at(i, idx);
      for (int j = 0; j < 3; ++j) {
        const int c = 3 * i + j;
        t.grad_u.at(c, idx) = kI * k[j] * s.u.at(i, idx);
        t.advect_E.at(c, idx) = spec_out_[(9 + c) * N + idx];
        t.stretch.at(c, idx) = spec_out_[(18 + c) * N + idx];
        t.dE.at(c, idx) = t.stretch.at(c, idx) - t.advect_E.at(c, idx) + t.grad_u.at(c, idx);
      }
    }
  }
  return t;
}

SpectralField momentum_rhs(const FlowState& state) {
  RhsEvaluator ev(state.grid());
  SpectralField nu(state.grid(), Rank::vector), dE(state.grid(), Rank::tensor);
  ev.evaluate(state.u, state.E, nu, dE);
  nu.axpy(state.mu, laplacian(state.u));
  return nu;
}

SpectralField deformation_rhs(const FlowState& state) {
  RhsEvaluator ev(state.grid());
  SpectralField dE(state.grid(), Rank::tensor);
  ev.evaluate_deformation(state.u, state.E, dE);
  return dE;
}

SpectralField pressure_of(const FlowState& state) {
  RhsEvaluator ev(state.grid());
  return ev.terms(state).pressure;
}

double lawson_amplification(double kk, double mu, double dt) {
  const double full = std::exp(-mu * kk * dt);
  const double half = std::exp(-mu * kk * dt / 2.0);
  using V = std::array<double, 2>;
  auto N = [kk](const V& x) { return V{x[1], -kk * x[0]}; };
  auto phi = [](double f, const V& x) { return V{f * x[0], x[1]}; };
  auto axpy = [](const V& a, double s, const V& b) { return V{a[0] + s * b[0], a[1] + s * b[1]}; };
  double G[2][2];
  for (int col = 0; col < 2; ++col) {
    const V x0 = col == 0 ? V{1.0, 0.0} : V{0.0, 1.0};
    const V k1 = N(x0);
    const V k2 = N(phi(half, axpy(x0, dt / 2.0, k1)));
    const V k3 = N(axpy(phi(half, x0), dt / 2.0, k2));
    const V k4 = N(axpy(phi(full, x0), dt, phi(half, k3)));
    V x1 = phi(full, x0);
    const V inc = axpy(axpy(phi(full, k1), 2.0, phi(half, V{k2[0] + k3[0], k2[1] + k3[1]})), 1.0, k4);
    x1 = axpy(x1, dt / 6.0, inc);
    G[0][col] = x1[0];
    G[1][col] = x1[1];
  }
  const double tr = G[0][0] + G[1][1];
  const double det = G[0][0] * G[1][1] - G[0][1] * G[1][0];
  const double disc = tr * tr / 4.0 - det;
  if (disc >= 0.0) {
    const double r = std::sqrt(disc);
    return std::max(std::abs(tr / 2.0 + r), std::abs(tr / 2.0 - r));
  }
  return std::sqrt(std::max(det, 0.0));
}

void check_stability(const SpectralGrid& grid, double mu, const StepperConfig& cfg) {
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw ArgumentError("stepper: dt must be positive");
  if (!(mu > 0.0)) throw ArgumentError("stepper: viscosity must be positive");
  double worst = 0.0, worst_kk = 0.0;
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    if (!grid.in_band(idx)) continue;
    const double kk = grid.wavenumber_sq(idx);
    const double rho = lawson_amplification(kk, mu, cfg.dt);
    if (rho > worst) {
      worst = rho;
      worst_kk = kk;
    }
  }
  if (worst > 1.0 + 1e-10) {
    throw ArgumentError("stepper: dt = " + std::to_string(cfg.dt) + " unstable, amplification " +
                        std::to_string(worst) + " at |k| = " + std::to_string(std::sqrt(worst_kk)));
  }
}

Stepper::Stepper(const SpectralGrid& grid, double mu, StepperConfig cfg)
    : cfg_(cfg),
      mu_(mu),
      rhs_(grid),
      full_(grid.size()),
      half_(grid.size()),
      kk_(grid.size()),
      nu_(grid, Rank::vector),
      us_(grid, Rank::vector),
      au_(grid, Rank::vector),
      de_(grid, Rank::tensor),
      es_(grid, Rank::tensor),
      ae_(grid, Rank::tensor) {
  check_stability(grid, mu, cfg);
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    kk_[idx] = grid.wavenumber_sq(idx);
    full_[idx] = std::exp(-mu * kk_[idx] * cfg.dt);
    half_[idx] = std::exp(-mu * kk_[idx] * cfg.dt / 2.0);
  }
}

double Stepper::grad_sq(const SpectralField& u) const {
  double s = 0.0;
  for (int c = 0; c < 3; ++c) s += kernels::weighted_inner(kk_, u.component(c), u.component(c));
  return s;
}

namespace {

// out = fx * x + a * fy * y, componentwise; fx / fy may be null (factor 1).
void combine(SpectralField& out, const RealVector* fx, const SpectralField& x, double a,
             const RealVector* fy, const SpectralField& y) {
  const std::size_t N = out.grid().size();
  for (int c = 0; c < out.components(); ++c) {
    cplx* o = out.component(c).data();
    const cplx* xs = x.component(c).data();
    const cplx* ys = y.component(c).data();
    for (std::size_t i = 0; i < N; ++i) {
      const double wx = fx ? (*fx)[i] : 1.0;
      const double wy = fy ? (*fy)[i] : 1.0;
      o[i] = wx * xs[i] + (a * wy) * ys[i];
    }
  }
}

// out += a * fy * y
void accumulate(SpectralField& out, double a, const RealVector* fy, const SpectralField& y) {
  const std::size_t N = out.grid().size();
  for (int c = 0; c < out.components(); ++c) {
    cplx* o = out.component(c).data();
    const cplx* ys = y.component(c).data();
    for (std::size_t i = 0; i < N; ++i) o[i] += (a * (fy ? (*fy)[i] : 1.0)) * ys[i];
  }
}

}  // namespace

void Stepper::advance(FlowState& s) {
  const SpectralGrid& g = s.grid();
  require_same_grid(g, nu_.grid(), "stepper state");
  if (s.mu != mu_) throw ArgumentError("stepper: state viscosity differs from stepper viscosity");
  const double h = cfg_.dt;
  const bool freeze = cfg_.freeze_deformation;
  const RealVector* F = &full_;
  const RealVector* H = &half_;

  double diss = grad_sq(s.u);
  rhs_.evaluate(s.u, s.E, nu_, de_, freeze);
  combine(au_, F, s.u, h / 6.0, F, nu_);
  combine(ae_, nullptr, s.E, h / 6.0, nullptr, de_);
  combine(us_, H, s.u, h / 2.0, H, nu_);
  combine(es_, nullptr, s.E, h / 2.0, nullptr, de_);

  diss += 2.0 * grad_sq(us_);
  rhs_.evaluate(us_, es_, nu_, de_, freeze);
  accumulate(au_, h / 3.0, H, nu_);
  accumulate(ae_, h / 3.0, nullptr, de_);
  combine(us_, H, s.u, h / 2.0, nullptr, nu_);
  combine(es_, nullptr, s.E, h / 2.0, nullptr, de_);

  diss += 2.0 * grad_sq(us_);
  rhs_.evaluate(us_, es_, nu_, de_, freeze);
  accumulate(au_, h / 3.0, H, nu_);
  accumulate(ae_, h / 3.0, nullptr, de_);
  combine(us_, F, s.u, h, H, nu_);
  combine(es_, nullptr, s.E, h, nullptr, de_);

  diss += grad_sq(us_);
  rhs_.evaluate(us_, es_, nu_, de_, freeze);
  accumulate(au_, h / 6.0, nullptr, nu_);
  accumulate(ae_, h / 6.0, nullptr, de_);
  last_dissipation_ = mu_ * h / 6.0 * diss;

  kernels::leray_project(g, au_.component(0), au_.component(1), au_.component(2));
  au_.symmetrize();
  ae_.symmetrize();
  au_.truncate_to_band();
  ae_.truncate_to_band();

  const double t_new = s.t + h;
  if (!au_.all_finite() || !ae_.all_finite()) throw BlowUp(t_new);
  std::swap(s.u, au_);
  std::swap(s.E, ae_);
  s.t = t_new;
}

FlowState step(const FlowState& state, const StepperConfig& cfg) {
  Stepper stepper(state.grid(), state.mu, cfg);
  FlowState out = state;
  stepper.advance(out);
  return out;
}

}  // namespace visco
