#include "visco/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "visco/checkpoint.hpp"
#include "visco/errors.hpp"
#include "visco/spectral_ops.hpp"

namespace visco {

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::completed: return "completed";
    case Outcome::guard: return "guard";
    case Outcome::blowup: return "blowup";
  }
  return "unknown";
}

std::vector<std::string> band_warnings(const FlowState& s) {
  const SpectralGrid& g = s.grid();
  const int K = g.band_limit();
  int radius = 0;
  double total = 0.0, edge = 0.0;
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    double e = 0.0;
    for (int c = 0; c < 3; ++c) e += std::norm(s.u.at(c, idx));
    for (int c = 0; c < 9; ++c) e += std::norm(s.E.at(c, idx));
    if (e == 0.0) continue;
    const Modes3 m = g.modes(idx);
    const int r = std::max({std::abs(m[0]), std::abs(m[1]), std::abs(m[2])});
    radius = std::max(radius, r);
    total += e;
    if (r > K - 3) edge += e;
  }
  std::vector<std::string> out;
  if (2 * radius > K) {
    out.push_back("support radius " + std::to_string(radius) + " modes: one quadratic interaction reaches " +
                  std::to_string(2 * radius) + " > band limit " + std::to_string(K) +
                  "; products are truncated by the band");
  }
  if (total > 0.0 && edge > 1e-10 * total) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "energy fraction %.3g within 3 modes of the band edge exceeds 1e-10", edge / total);
    out.emplace_back(buf);
  }
  return out;
}

namespace {

double l2_energy(const FlowState& s, double th2) {
  const double a = l2_norm(s.u), b = l2_norm(s.E);
  return 0.5 * th2 * (a * a + b * b);
}

void write_state_checkpoints(const std::filesystem::path& dir, const FlowState& s, std::size_t step) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  char name[64];
  std::snprintf(name, sizeof name, "u_%08zu.ckp", step);
  write_checkpoint(dir / name, s.u);
  std::snprintf(name, sizeof name, "E_%08zu.ckp", step);
  write_checkpoint(dir / name, s.E);
}

void track(RunMaxima& m, const DiagnosticRecord& r) {
  m.det = std::max(m.det, r.det_res);
  m.div_et = std::max(m.div_et, r.divET_res);
  m.curl = std::max(m.curl, r.curl_res);
  m.leak_u = std::max(m.leak_u, r.leak_u);
  m.leak_E = std::max(m.leak_E, r.leak_E);
  m.div_u = std::max(m.div_u, r.div_u_res);
  m.i3_i6 = std::max(m.i3_i6, r.i3_i6_rel);
  m.j6 = std::max(m.j6, r.j6_rel);
  m.h2_identity = std::max(m.h2_identity, r.h2_id_rel);
  m.e_identity = std::max(m.e_identity, r.e_id_rel);
}

}  // namespace

SimulationResult simulate(const FlowState& initial, const StepperConfig& cfg, const SimulationOptions& opt) {
  if (!(opt.t_end >= initial.t)) throw ArgumentError("simulate: t_end precedes the initial time");
  if (opt.sample_every < 1) throw ArgumentError("simulate: sample_every must be positive");
  if (opt.checkpoint_every < 0) throw ArgumentError("simulate: checkpoint_every must be nonnegative");
  if (!(cfg.dt > 0.0)) throw ArgumentError("simulate: dt must be positive");

  SimulationResult res(initial);
  res.warnings = band_warnings(initial);
  const double span = opt.t_end - initial.t;
  const std::size_t n_steps =
      span > 0.0 ? static_cast<std::size_t>(std::max(1.0, std::ceil(span / cfg.dt - 1e-9))) : 0;
  StepperConfig scfg = cfg;
  scfg.dt = n_steps > 0 ? span / static_cast<double>(n_steps) : cfg.dt;
  res.dt = scfg.dt;
  Stepper stepper(initial.grid(), initial.mu, scfg);
  RhsEvaluator ev(initial.grid());
  const double th2 = opt.theta0 * opt.theta0;

  FlowState& s = res.final_state;
  const double norm0 = sobolev_norm(s.u, 2) + sobolev_norm(s.E, 2);
  res.guard_threshold = norm0 > 0.0 ? opt.guard_factor * norm0 : std::numeric_limits<double>::infinity();
  res.initial_energy = l2_energy(s, th2);

  auto take_sample = [&]() {
    DiagnosticRecord r = record(s, opt.cone, opt.theta0, &ev);
    res.ledger = update_ledger(res.ledger, r, opt.theta0);
    r.E0 = res.ledger.E0;
    r.E1 = res.ledger.E1;
    r.Etotal = res.ledger.Etotal;
    if (!res.records.empty()) {
      const DiagnosticRecord& prev = res.records.back();
      res.energy_identity_integral += 0.5 * (r.t - prev.t) * (std::abs(prev.energy_id_res) + std::abs(r.energy_id_res));
    }
    track(res.maxima, r);
    if (opt.on_record) opt.on_record(r);
    res.records.push_back(r);
  };

  take_sample();
  double energy = res.initial_energy;
  for (std::size_t i = 1; i <= n_steps; ++i) {
    try {
      stepper.advance(s);
    } catch (const BlowUp& e) {
      res.outcome = Outcome::blowup;
      res.t_stop = e.time();
      res.steps = i - 1;
      return res;
    }
    s.t = initial.t + static_cast<double>(i) * scfg.dt;
    res.steps = i;
    const double next = l2_energy(s, th2);
    res.energy_balance_trajectory += std::abs(next - energy + th2 * stepper.last_dissipation());
    energy = next;

    const double norm = sobolev_norm(s.u, 2) + sobolev_norm(s.E, 2);
    if (!std::isfinite(norm)) {
      res.outcome = Outcome::blowup;
      res.t_stop = s.t;
      return res;
    }
    if (opt.checkpoint_every > 0 && i % static_cast<std::size_t>(opt.checkpoint_every) == 0) {
      write_state_checkpoints(opt.checkpoint_dir, s, i);
    }
    if (norm > res.guard_threshold) {
      take_sample();
      res.outcome = Outcome::guard;
      res.t_stop = s.t;
      return res;
    }
    if (i % static_cast<std::size_t>(opt.sample_every) == 0 || i == n_steps) take_sample();
  }
  res.t_stop = s.t;
  return res;
}

}  // namespace visco
