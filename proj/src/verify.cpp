#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>

#include "visco/errors.hpp"
#include "visco/experiment.hpp"
#include "visco/fft.hpp"
#include "visco/initial_data.hpp"
#include "visco/kernels.hpp"
#include "visco/random_fields.hpp"
#include "visco/reference.hpp"
#include "visco/spectral_ops.hpp"

namespace visco {

namespace {

class Report {
 public:
  explicit Report(std::ostream& log) : log_(log) {}

  // Passes when value <= tol.
  void at_most(const std::string& name, double value, double tol) {
    const bool ok = value <= tol;
    line(ok, name, value, "<=", tol, value > 0.0 ? tol / value : INFINITY);
  }
  // Passes when value >= bound.
  void at_least(const std::string& name, double value, double bound) {
    const bool ok = value >= bound;
    line(ok, name, value, ">=", bound, bound > 0.0 ? value / bound : INFINITY);
  }
  void within(const std::string& name, double value, double lo, double hi) {
    const bool ok = value >= lo && value <= hi;
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s  %-44s %.6e in [%g, %g]\n", ok ? "PASS" : "FAIL", name.c_str(), value, lo, hi);
    record(ok, buf);
  }
  void truth(const std::string& name, bool ok) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s  %s\n", ok ? "PASS" : "FAIL", name.c_str());
    record(ok, buf);
  }
  void info(const std::string& name, double value) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "INFO  %-44s %.6e\n", name.c_str(), value);
    log_ << buf;
  }

  int failures() const { return failures_; }
  int checks() const { return checks_; }

 private:
  void line(bool ok, const std::string& name, double value, const char* op, double tol, double margin) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s  %-44s %.6e %s %.1e  margin %.3g\n", ok ? "PASS" : "FAIL", name.c_str(), value,
                  op, tol, margin);
    record(ok, buf);
  }
  void record(bool ok, const char* text) {
    ++checks_;
    if (!ok) ++failures_;
    log_ << text;
  }

  std::ostream& log_;
  int failures_ = 0;
  int checks_ = 0;
};

double rel_diff(const SpectralField& a, const SpectralField& b) {
  double scale = 0.0;
  for (const auto& c : b.data()) scale = std::max(scale, std::abs(c));
  return a.max_abs_difference(b) / std::max(scale, 1e-300);
}

void suite_spectral(Report& rep, Rng& rng) {
  {
    const SpectralGrid g(8, 1.0);
    double worst = 0.0;
    const Rank ranks[][2] = {{Rank::scalar, Rank::scalar}, {Rank::scalar, Rank::vector}, {Rank::vector, Rank::vector},
                             {Rank::tensor, Rank::tensor}, {Rank::tensor, Rank::scalar}};
    for (int trial = 0; trial < 20; ++trial) {
      const auto& r = ranks[trial % 5];
      const SpectralField a = random_field(g, r[0], rng), b = random_field(g, r[1], rng);
      worst = std::max(worst, rel_diff(dealiased_product(a, b), reference::direct_convolution(a, b)));
    }
    rep.at_most("product vs direct convolution (n=8, 20 pairs)", worst, 1e-12);
  }
  {
    const SpectralGrid g(12, 1.3);
    const SpectralField f = random_field(g, Rank::vector, rng);
    const CoeffVector phys = inverse_transform(f);
    const SpectralField back = forward_transform(g, Rank::vector, phys);
    rep.at_most("inverse/forward transform round trip", rel_diff(back, f), 1e-13);
    const double a = physical_l2_norm(f), b = l2_norm(f);
    rep.at_most("Parseval (physical vs spectral L2)", std::abs(a - b) / b, 1e-13);
  }
  {
    const SpectralGrid g(12, 0.8);
    const SpectralField v = random_field(g, Rank::vector, rng);
    const SpectralField p = leray_project(v);
    rep.at_most("Leray projection divergence", divergence_defect(p) / l2_norm(v), 1e-14);
    rep.at_most("Leray projection idempotent", rel_diff(leray_project(p), p), 1e-14);
  }
  {
    const SpectralGrid g(16, 1.0);
    const SpectralField f = random_field(g, Rank::vector, rng), h = random_field(g, Rank::vector, rng);
    RealVector w(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) w[i] = g.wavenumber_sq(i);
    const double par = kernels::weighted_inner(w, f.component(0), h.component(0));
    const double ser = kernels::serial::weighted_inner(w, f.component(0), h.component(0));
    rep.at_most("parallel vs serial weighted inner", std::abs(par - ser) / std::max(std::abs(ser), 1e-300), 1e-14);
    SpectralField a = f, b = f;
    kernels::leray_project(g, a.component(0), a.component(1), a.component(2));
    kernels::serial::leray_project(g, b.component(0), b.component(1), b.component(2));
    rep.at_most("parallel vs serial Leray projection", a.max_abs_difference(b), 0.0);
  }
  {
    const SpectralGrid g(8, 1.0);
    double worst_u = 0.0, worst_e = 0.0;
    for (int trial = 0; trial < 3; ++trial) {
      FlowState s(random_solenoidal(g, rng), random_field(g, Rank::tensor, rng), 0.0, 0.7);
      worst_u = std::max(worst_u, rel_diff(momentum_rhs(s), reference::momentum_rhs(s.u, s.E, s.mu)));
      worst_e = std::max(worst_e, rel_diff(deformation_rhs(s), reference::deformation_rhs(s.u, s.E)));
    }
    rep.at_most("momentum rhs vs direct-sum reference", worst_u, 1e-12);
    rep.at_most("deformation rhs vs direct-sum reference", worst_e, 1e-12);
  }
}

void suite_cancellations(Report& rep, Rng& rng) {
  const SpectralGrid g(16, 1.0);
  const double theta = 0.3;
  double i36 = 0.0, j6 = 0.0, tr = 0.0, h2 = 0.0, e = 0.0;
  RhsEvaluator ev(g);
  for (int trial = 0; trial < 20; ++trial) {
    FlowState s(random_solenoidal(g, rng), random_column_solenoidal(g, rng), 0.0, 1.0);
    const RhsTerms terms = ev.terms(s);
    const IdentityResiduals r = identity_residuals(s, terms, theta);
    i36 = std::max(i36, r.i3_i6 / std::max(r.i3_i6_scale, 1e-300));
    j6 = std::max(j6, r.j6 / std::max(r.j6_scale, 1e-300));
    h2 = std::max(h2, r.h2 / std::max(r.h2_scale, 1e-300));
    e = std::max(e, r.e / std::max(r.e_scale, 1e-300));
    tr = std::max(tr, transport_annihilation_check(s, theta).relative);
  }
  rep.at_most("I3 + I6 relative (20 states)", i36, 1e-12);
  rep.at_most("J6 relative (20 states)", j6, 1e-12);
  rep.at_most("transport annihilation relative", tr, 1e-12);
  rep.at_most("sum of I terms vs H2 energy identity", h2, 1e-12);
  rep.at_most("sum of J terms vs div-E identity", e, 1e-12);

  const SpectralField phi = random_field(g, Rank::scalar, rng, 4);
  FlowState bad(gradient(phi), random_column_solenoidal(g, rng), 0.0, 1.0);
  rep.at_least("transport with gradient velocity (control)", transport_annihilation_check(bad, theta).relative, 1e-9);
}

void suite_cone(Report& rep, Rng& rng) {
  {
    std::normal_distribution<double> normal(0.0, 1.0);
    double worst_norm = 0.0, worst_dot = 0.0;
    for (int trial = 0; trial < 10000; ++trial) {
      const Vec3 eta{normal(rng), normal(rng), normal(rng)};
      const Vec3 w{normal(rng), normal(rng), normal(rng)};
      const EtaSplit sp = split_eta(eta, w);
      const double en = std::sqrt(norm_sq(eta));
      const double expect = en * std::sin(angle_between(eta, w));
      worst_norm = std::max(worst_norm, std::abs(std::sqrt(norm_sq(sp.b)) - expect) / en);
      worst_dot = std::max(worst_dot, std::abs(dot(sp.a, sp.b)) / (en * en));
    }
    rep.at_most("split_eta |b| = |eta| sin(angle) (1e4 pairs)", worst_norm, 1e-13);
    rep.at_most("split_eta a.b = 0 (1e4 pairs)", worst_dot, 1e-13);
  }
  {
    const SpectralGrid g(12, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
      worst = std::max(worst, cone_leakage(random_field(g, Rank::tensor, rng), Cone(random_unit_vector(rng), std::numbers::pi / 2)));
    }
    rep.at_most("leakage of mean-free fields, half angle pi/2", worst, 0.0);
  }
  {
    const SpectralGrid g(12, 1.0);
    double worst = 0.0, mismatch = 0.0, apart = 0.0;
    for (double theta : {0.3, std::numbers::pi / 4}) {
      for (int trial = 0; trial < 2; ++trial) {
        const Cone cone(random_unit_vector(rng), theta);
        const SpectralField E = restrict_to_cone(random_column_solenoidal(g, rng), cone);
        const AngleGainResult r = angle_gain_bound_check(E, theta);
        worst = std::max(worst, r.max_ratio);
        mismatch = std::max(mismatch, r.direct_mismatch);
        apart = std::max(apart, r.a_part_max);
      }
    }
    rep.at_most("angle gain max_ratio (theta_eff)", worst, 1.0 + 1e-10);
    rep.at_most("split assembly vs direct product", mismatch, 1e-12);
    rep.info("largest a-part contribution", apart);
  }
  {
    const SpectralGrid g(8, 1.0);
    SpectralField E(g, Rank::tensor);
    const std::size_t k = g.index_of_modes({1, 1, 0});
    E.at(2, k) = cplx(0.3, 0.1);
    E.at(5, k) = cplx(-0.3, -0.1);
    E.at(8, k) = cplx(-0.2, 0.4);
    E.symmetrize();
    const AngleGainResult r = angle_gain_bound_check(E, 0.5);
    rep.at_most("single mode pair: ratio", r.max_ratio, 0.0);
  }
}

void suite_data(Report& rep, Rng&) {
  const SpectralGrid g(32, 1.5, PadFactor{3, 2});
  const SpectralField f = build_profile_f(1.0, g);
  const LambdaScalingTable t = verify_lambda_scaling(f, {8, 16, 32, 64});
  rep.within("H^1/2 scaling exponent", t.exponent, 0.45, 0.55);
  rep.truth("theta_lambda ||v_lambda|| strictly decreasing", t.weighted_decreasing);
  rep.truth("support within asin(1/lambda) + lattice quantum", t.support_within_bound);

  ExperimentConfig cfg;
  cfg.data.m0 = 1e-5;
  cfg.data.target_product.reset();
  const GeneratedData d = generate_data(cfg);
  rep.at_most("E0 det residual", d.residuals.det, 1e-6);
  rep.at_most("E0 div E^T residual", d.residuals.div_et, 1e-8);
  rep.at_most("E0 curl residual", d.residuals.curl, 1e-6);
  rep.at_most("E0 cone leakage", d.residuals.leak, 1e-8);
  rep.at_most("u0 cone leakage", d.leak_u0, 1e-8);
  rep.at_most("u0 divergence", d.div_u0, 1e-13);
  const GeneratedData d2 = rescale(d, 2.0);
  rep.at_most("alpha = 2 doubles ||u0||_H2", std::abs(d2.h2_u0 / d.h2_u0 - 2.0), 1e-14);
  rep.at_most("alpha = 2 doubles ||E0||_H2", std::abs(d2.h2_E0 / d.h2_E0 - 2.0), 1e-14);
}

double state_distance(const FlowState& a, const FlowState& b) {
  return l2_norm(a.u - b.u) + l2_norm(a.E - b.E);
}

FlowState run_to(const FlowState& s0, double dt, double T) {
  Stepper st(s0.grid(), s0.mu, StepperConfig{dt});
  FlowState s = s0;
  const int n = static_cast<int>(std::lround(T / dt));
  for (int i = 0; i < n; ++i) st.advance(s);
  return s;
}

void suite_dynamics(Report& rep, Rng& rng) {
  {
    const SpectralGrid g(8, 1.0);
    const double mu = 0.3, amp = 1e-8, T = 0.5;
    const Modes3 m{1, 2, 0};
    const std::size_t idx = g.index_of_modes(m);
    const Vec3 k = g.wavenumber(idx);
    std::normal_distribution<double> normal(0.0, 1.0);
    reference::ModeState x0;
    for (auto& c : x0) c = amp * cplx(normal(rng), normal(rng));
    const cplx ku = (k[0] * x0[0] + k[1] * x0[1] + k[2] * x0[2]) / norm_sq(k);
    for (int i = 0; i < 3; ++i) x0[i] -= k[i] * ku;
    FlowState s(g, mu);
    const std::size_t neg = g.mirror(idx);
    for (int c = 0; c < 3; ++c) {
      s.u.at(c, idx) = x0[c];
      s.u.at(c, neg) = std::conj(x0[c]);
    }
    for (int c = 0; c < 9; ++c) {
      s.E.at(c, idx) = x0[3 + c];
      s.E.at(c, neg) = std::conj(x0[3 + c]);
    }
    const FlowState out = run_to(s, 1e-3, T);
    const reference::ModeState x = reference::propagate_linear_mode(k, mu, x0, T, 20000);
    double err = 0.0, scale = 0.0;
    for (int c = 0; c < 3; ++c) {
      err = std::max(err, std::abs(out.u.at(c, idx) - x[c]));
      scale = std::max(scale, std::abs(x[c]));
    }
    for (int c = 0; c < 9; ++c) {
      err = std::max(err, std::abs(out.E.at(c, idx) - x[3 + c]));
      scale = std::max(scale, std::abs(x[3 + c]));
    }
    rep.at_most("single mode vs linear oracle (amp 1e-8)", err / scale, 1e-8);
  }
  {
    const SpectralGrid g(16, 1.0);
    FlowState s(0.05 * random_solenoidal(g, rng, 2), 0.05 * random_column_solenoidal(g, rng, 2), 0.0, 0.1);
    const double T = 0.2;
    const FlowState a = run_to(s, 0.02, T), b = run_to(s, 0.01, T), c = run_to(s, 0.005, T);
    const double order = std::log2(state_distance(a, b) / state_distance(b, c));
    rep.within("Richardson self-convergence order", order, 3.8, 4.2);
  }
  {
    const SpectralGrid g(16, 1.0);
    bool threw = false;
    try {
      Stepper st(g, 1.0, StepperConfig{1.0});
    } catch (const ArgumentError&) {
      threw = true;
    }
    rep.truth("unstable dt rejected", threw);
  }
  {
    const SpectralGrid g(16, 1.0);
    FlowState s(0.1 * random_solenoidal(g, rng, 3), 0.1 * random_column_solenoidal(g, rng, 3), 0.0, 0.5);
    SimulationOptions opt;
    opt.t_end = 0.2;
    opt.sample_every = 10;
    opt.theta0 = 0.3;
    const SimulationResult r = simulate(s, StepperConfig{1e-3}, opt);
    rep.truth("short run completes", r.outcome == Outcome::completed);
    rep.at_most("energy balance along trajectory (relative)", r.energy_balance_trajectory / r.initial_energy, 1e-8);
    rep.at_most("div E^T stays zero", r.maxima.div_et, 1e-12);
    bool monotone = true;
    for (std::size_t i = 1; i < r.records.size(); ++i) {
      monotone = monotone && r.records[i].Etotal >= r.records[i - 1].Etotal;
    }
    rep.truth("ledger E_total nondecreasing", monotone);
  }
}

const std::map<std::string, std::function<void(Report&, Rng&)>>& suite_table() {
  static const std::map<std::string, std::function<void(Report&, Rng&)>> table{
      {"spectral", suite_spectral},
      {"cancellations", suite_cancellations},
      {"cone", suite_cone},
      {"data", suite_data},
      {"dynamics", suite_dynamics}};
  return table;
}

}  // namespace

const std::vector<std::string>& verify_suites() {
  static const std::vector<std::string> names{"spectral", "cancellations", "cone", "data", "dynamics"};
  return names;
}

int cmd_verify(const std::string& suite, unsigned seed, std::ostream& log) {
  std::vector<std::string> run;
  if (suite == "all") {
    run = verify_suites();
  } else if (suite_table().count(suite)) {
    run.push_back(suite);
  } else {
    throw ArgumentError("verify: unknown suite \"" + suite + "\"");
  }
  Report rep(log);
  for (const auto& name : run) {
    log << "== " << name << " (seed " << seed << ")\n";
    Rng rng(seed);
    const auto t0 = std::chrono::steady_clock::now();
    suite_table().at(name)(rep, rng);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    char buf[64];
    std::snprintf(buf, sizeof buf, "   %.1f s\n", secs);
    log << buf;
  }
  log << rep.checks() - rep.failures() << "/" << rep.checks() << " checks passed\n";
  return rep.failures() == 0 ? 0 : 1;
}

}  // namespace visco
