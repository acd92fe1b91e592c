#include "visco/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "visco/checkpoint.hpp"
#include "visco/errors.hpp"
#include "visco/initial_data.hpp"
#include "visco/spectral_ops.hpp"

namespace visco {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// h2_E0 / h2_u0 for small data at lambda = 8; only seeds the calibration.
constexpr double kRatioGuess = 4.0;

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", x);
  return buf;
}

// NaN and inf are not JSON; write them as strings.
json num(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  out << j.dump(2) << "\n";
  if (!out) throw IoError("cannot write " + path.string());
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

struct Built {
  SpectralField u0;
  E0Result e0;
};

Built build_at(double m0, const ExperimentConfig& cfg, const SpectralGrid& g, const Cone& cone) {
  SpectralField u0 = build_u0(build_v_lambda(build_profile_f(m0, g), cfg.data.lambda));
  E0Result e0 = build_E0(u0, cfg.data.E0_t_end, cfg.data.E0_dt, cone);
  return {std::move(u0), std::move(e0)};
}

void fill_metrics(GeneratedData& d, const Cone& cone) {
  d.h2_u0 = sobolev_norm(d.u0, 2);
  d.h2_E0 = sobolev_norm(d.E0, 2);
  d.product = d.theta0 * (d.h2_u0 + d.h2_E0);
  d.leak_u0 = cone_leakage(d.u0, cone);
  const double lu = l2_norm(d.u0);
  d.div_u0 = divergence_defect(d.u0) / std::max(lu, 1e-300);
  d.residuals = structure_residuals(d.E0, cone);
}

json data_json(const GeneratedData& d) {
  return json{{"lambda", d.lambda},
              {"theta_lambda", d.theta_lambda},
              {"theta0", d.theta0},
              {"m0", d.m0},
              {"amplitude_scale", d.alpha},
              {"h2_u0", num(d.h2_u0)},
              {"h2_E0", num(d.h2_E0)},
              {"product", num(d.product)},
              {"E0_steps", d.E0_steps},
              {"E0_dt", d.E0_dt},
              {"residuals",
               {{"det", num(d.residuals.det)},
                {"div_et", num(d.residuals.div_et)},
                {"curl", num(d.residuals.curl)},
                {"leak_E0", num(d.residuals.leak)},
                {"leak_u0", num(d.leak_u0)},
                {"div_u0", num(d.div_u0)}}}};
}

void print_data(const GeneratedData& d, std::ostream& log) {
  log << "theta_lambda        " << fmt(d.theta_lambda) << "\n"
      << "theta0              " << fmt(d.theta0) << "\n"
      << "m0                  " << fmt(d.m0) << "\n"
      << "amplitude_scale     " << fmt(d.alpha) << "\n"
      << "||u0||_H2           " << fmt(d.h2_u0) << "\n"
      << "||E0||_H2           " << fmt(d.h2_E0) << "\n"
      << "theta0*(sum H2)     " << fmt(d.product) << "\n"
      << "det residual        " << fmt(d.residuals.det) << "\n"
      << "div E^T residual    " << fmt(d.residuals.div_et) << "\n"
      << "curl residual       " << fmt(d.residuals.curl) << "\n"
      << "cone leakage E0     " << fmt(d.residuals.leak) << "\n"
      << "cone leakage u0     " << fmt(d.leak_u0) << "\n"
      << "div u0 residual     " << fmt(d.div_u0) << "\n";
}

json maxima_json(const RunMaxima& m) {
  return json{{"det", num(m.det)},           {"div_et", num(m.div_et)},
              {"curl", num(m.curl)},         {"leak_u", num(m.leak_u)},
              {"leak_E", num(m.leak_E)},     {"div_u", num(m.div_u)},
              {"i3_i6", num(m.i3_i6)},       {"j6", num(m.j6)},
              {"h2_identity", num(m.h2_identity)}, {"e_identity", num(m.e_identity)}};
}

json summary_json(const SimulationResult& r) {
  const double rel = r.initial_energy > 0.0 ? r.energy_identity_integral / r.initial_energy : 0.0;
  json j{{"outcome", to_string(r.outcome)},
         {"t_stop", num(r.t_stop)},
         {"steps", r.steps},
         {"dt", r.dt},
         {"guard_threshold", num(r.guard_threshold)},
         {"ledger",
          {{"E0", num(r.ledger.E0)},
           {"E1", num(r.ledger.E1)},
           {"Etotal", num(r.ledger.Etotal)},
           {"samples", r.ledger.samples},
           {"quadrature", r.ledger.quadrature}}},
         {"initial_Etotal", r.records.empty() ? json(0.0) : num(r.records.front().Etotal)},
         {"max_residuals", maxima_json(r.maxima)},
         {"initial_energy", num(r.initial_energy)},
         {"energy_identity_integral", num(r.energy_identity_integral)},
         {"energy_identity_relative", num(rel)},
         {"energy_balance_trajectory", num(r.energy_balance_trajectory)},
         {"warnings", r.warnings}};
  return j;
}

SimulationResult run_one(const ExperimentConfig& cfg, const FlowState& s0, const fs::path& dir, std::ostream& log) {
  ensure_dir(dir);
  std::ofstream csv(dir / "series.csv");
  if (!csv) throw IoError("cannot write " + (dir / "series.csv").string());
  write_csv_header(csv);
  SimulationOptions opt = simulation_options(cfg, dir);
  opt.on_record = [&](const DiagnosticRecord& r) {
    write_csv_row(csv, r);
    csv.flush();
  };
  SimulationResult res = simulate(s0, StepperConfig{cfg.run.dt}, opt);
  if (!csv) throw IoError("error writing " + (dir / "series.csv").string());
  for (const auto& w : res.warnings) log << "warning: " << w << "\n";
  return res;
}

}  // namespace

Cone experiment_cone(const ExperimentConfig& cfg) { return Cone(cfg.cone.axis, cfg.theta0()); }

GeneratedData generate_data(const ExperimentConfig& cfg) {
  validate(cfg);
  const SpectralGrid g = cfg.make_grid();
  const Cone cone = experiment_cone(cfg);
  const double theta0 = cfg.theta0();

  double m0 = cfg.data.m0.value_or(0.0);
  std::optional<Built> built;
  if (cfg.data.target_product) {
    // Seed from the exactly linear u0 and a ratio guess, then one rescaling step.
    const double target = *cfg.data.target_product;
    const double hu1 = sobolev_norm(build_u0(build_v_lambda(build_profile_f(1.0, g), cfg.data.lambda)), 2);
    if (!(hu1 > 0.0)) throw ArgumentError("data: profile has zero H2 norm on this grid");
    m0 = target / (theta0 * hu1 * (1.0 + kRatioGuess));
    for (int pass = 0; pass < 2; ++pass) {
      built.emplace(build_at(m0, cfg, g, cone));
      const double p = theta0 * (sobolev_norm(built->u0, 2) + sobolev_norm(built->e0.E0, 2));
      if (pass == 0) m0 *= target / p;
    }
  } else {
    built.emplace(build_at(m0, cfg, g, cone));
  }

  GeneratedData d(std::move(built->u0), std::move(built->e0.E0));
  d.lambda = cfg.data.lambda;
  d.theta_lambda = std::asin(1.0 / cfg.data.lambda);
  d.theta0 = theta0;
  d.m0 = m0;
  d.E0_steps = built->e0.steps;
  d.E0_dt = built->e0.dt;
  d.alpha = 1.0;
  fill_metrics(d, cone);
  if (cfg.data.amplitude_scale != 1.0) return rescale(d, cfg.data.amplitude_scale);
  return d;
}

GeneratedData rescale(const GeneratedData& data, double alpha) {
  if (data.alpha == 0.0) throw ArgumentError("rescale: datum has amplitude 0");
  GeneratedData d = data;
  const double factor = alpha / data.alpha;
  d.u0 *= factor;
  d.E0 *= factor;
  d.alpha = alpha;
  d.h2_u0 = sobolev_norm(d.u0, 2);
  d.h2_E0 = sobolev_norm(d.E0, 2);
  d.product = d.theta0 * (d.h2_u0 + d.h2_E0);
  d.div_u0 = divergence_defect(d.u0) / std::max(l2_norm(d.u0), 1e-300);
  // Leakage is scale invariant; det and curl residuals are not.
  d.residuals.det = det_residual(d.E0);
  d.residuals.div_et = div_et_residual(d.E0);
  d.residuals.curl = curl_structure_residual(d.E0);
  return d;
}

FlowState initial_state(const GeneratedData& data, double mu) { return FlowState(data.u0, data.E0, 0.0, mu); }

SimulationOptions simulation_options(const ExperimentConfig& cfg, const fs::path& out_dir) {
  SimulationOptions opt;
  opt.t_end = cfg.run.t_end;
  opt.sample_every = cfg.run.sample_every;
  opt.guard_factor = cfg.run.blowup_guard;
  opt.cone = experiment_cone(cfg);
  opt.theta0 = cfg.theta0();
  opt.checkpoint_every = cfg.output.checkpoint_every;
  opt.checkpoint_dir = out_dir / "checkpoints";
  return opt;
}

std::vector<double> default_alpha_ladder(double alpha_ref) {
  std::vector<double> out;
  for (double f : {1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2}) out.push_back(f * alpha_ref);
  return out;
}

void validate_alphas(const std::vector<double>& alphas) {
  if (alphas.size() < 2) throw ArgumentError("sweep: need at least two alpha values");
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (!std::isfinite(alphas[i]) || alphas[i] < 0.0) throw ArgumentError("sweep: alpha values must be finite and >= 0");
    if (i > 0 && alphas[i] < alphas[i - 1]) throw ArgumentError("sweep: alpha values must be nondecreasing");
  }
}

std::vector<double> parse_alpha_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw ArgumentError("sweep: cannot parse alpha \"" + item + "\"");
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used != item.size()) throw ArgumentError("sweep: cannot parse alpha \"" + item + "\"");
    out.push_back(v);
  }
  return out;
}

SweepResult run_sweep(const ExperimentConfig& cfg, const GeneratedData& base, const std::vector<double>& alphas,
                      const fs::path& out_dir, std::ostream& log) {
  validate_alphas(alphas);
  ensure_dir(out_dir);
  SweepResult out;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    SweepRow row;
    row.alpha = alphas[i];
    char name[32];
    std::snprintf(name, sizeof name, "run_%02zu", i);
    try {
      const GeneratedData d = rescale(base, alphas[i]);
      row.product = d.product;
      SimulationResult r = run_one(cfg, initial_state(d, cfg.run.mu), out_dir / name, log);
      row.outcome = to_string(r.outcome);
      row.t_stop = r.t_stop;
      row.steps = r.steps;
      row.initial_Etotal = r.records.empty() ? 0.0 : r.records.front().Etotal;
      row.sup_Etotal = r.ledger.Etotal;
      json s = summary_json(r);
      s["alpha"] = alphas[i];
      s["product"] = num(d.product);
      write_json(out_dir / name / "summary.json", s);
    } catch (const std::exception& e) {
      row.outcome = "error";
      row.message = e.what();
    }
    log << "alpha " << fmt(row.alpha) << "  product " << fmt(row.product) << "  " << row.outcome << "  t "
        << fmt(row.t_stop) << "  sup Etotal " << fmt(row.sup_Etotal)
        << (row.message.empty() ? "" : "  (" + row.message + ")") << "\n";
    out.rows.push_back(row);
  }

  for (const auto& r : out.rows) {
    if (r.outcome == "completed" && std::isfinite(r.sup_Etotal)) out.largest_completed = r.alpha;
    if (r.outcome != "completed" && !out.smallest_failing) out.smallest_failing = r.alpha;
  }
  for (std::size_t i = 1; i < out.rows.size(); ++i) {
    if (out.rows[i].outcome == "completed" && out.rows[i - 1].outcome == "completed" &&
        out.rows[i].sup_Etotal < out.rows[i - 1].sup_Etotal) {
      out.sup_monotone = false;
    }
  }

  std::ofstream csv(out_dir / "sweep.csv");
  csv << "alpha,product,outcome,t_stop,steps,initial_Etotal,sup_Etotal\n";
  char line[256];
  for (const auto& r : out.rows) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%s,%.17g,%zu,%.17g,%.17g\n", r.alpha, r.product, r.outcome.c_str(),
                  r.t_stop, r.steps, r.initial_Etotal, r.sup_Etotal);
    csv << line;
  }
  if (!csv) throw IoError("cannot write sweep.csv");

  json rows = json::array();
  for (const auto& r : out.rows) {
    rows.push_back({{"alpha", r.alpha},
                    {"product", num(r.product)},
                    {"outcome", r.outcome},
                    {"t_stop", num(r.t_stop)},
                    {"steps", r.steps},
                    {"initial_Etotal", num(r.initial_Etotal)},
                    {"sup_Etotal", num(r.sup_Etotal)},
                    {"message", r.message}});
  }
  json j{{"rows", rows},
         {"largest_completed_alpha", out.largest_completed ? json(*out.largest_completed) : json(nullptr)},
         {"smallest_failing_alpha", out.smallest_failing ? json(*out.smallest_failing) : json(nullptr)},
         {"sup_Etotal_monotone", out.sup_monotone},
         {"m0", base.m0},
         {"theta0", base.theta0}};
  write_json(out_dir / "sweep.json", j);
  return out;
}

int cmd_gen_data(const ExperimentConfig& cfg, const fs::path& out_dir, std::ostream& log) {
  ensure_dir(out_dir);
  GeneratedData d = generate_data(cfg);
  write_checkpoint(out_dir / "u0.ckp", d.u0);
  write_checkpoint(out_dir / "E0.ckp", d.E0);
  json prov{{"config", json::parse(to_json_string(cfg))},
            {"data", data_json(d)},
            {"files", {{"u0", "u0.ckp"}, {"E0", "E0.ckp"}}},
            {"checkpoint_version", kCheckpointVersion}};
  write_json(out_dir / "provenance.json", prov);
  print_data(d, log);
  return 0;
}

int cmd_simulate(const ExperimentConfig& cfg, const fs::path& out_dir, std::ostream& log) {
  ensure_dir(out_dir);
  const SpectralGrid g = cfg.make_grid();
  std::string source;
  std::optional<FlowState> s0;
  json data;
  if (fs::exists(out_dir / "u0.ckp") && fs::exists(out_dir / "E0.ckp")) {
    SpectralField u = read_checkpoint(out_dir / "u0.ckp");
    SpectralField E = read_checkpoint(out_dir / "E0.ckp");
    if (!(u.grid() == g) || !(E.grid() == g)) {
      throw ArgumentError("simulate: checkpoints in " + out_dir.string() + " do not match the configured grid");
    }
    s0.emplace(std::move(u), std::move(E), 0.0, cfg.run.mu);
    source = "checkpoint";
  } else {
    GeneratedData d = generate_data(cfg);
    write_checkpoint(out_dir / "u0.ckp", d.u0);
    write_checkpoint(out_dir / "E0.ckp", d.E0);
    data = data_json(d);
    print_data(d, log);
    s0.emplace(initial_state(d, cfg.run.mu));
    source = "generated";
  }
  SimulationResult r = run_one(cfg, *s0, out_dir, log);
  json s = summary_json(r);
  s["data_source"] = source;
  if (!data.is_null()) s["data"] = data;
  s["config"] = json::parse(to_json_string(cfg));
  write_json(out_dir / "summary.json", s);
  log << "outcome             " << to_string(r.outcome) << " at t = " << fmt(r.t_stop) << " after " << r.steps
      << " steps\n"
      << "Etotal              " << fmt(r.ledger.Etotal) << "\n"
      << "max det residual    " << fmt(r.maxima.det) << "\n"
      << "max div E^T         " << fmt(r.maxima.div_et) << "\n"
      << "max curl residual   " << fmt(r.maxima.curl) << "\n"
      << "max leakage u / E   " << fmt(r.maxima.leak_u) << " / " << fmt(r.maxima.leak_E) << "\n";
  return 0;
}

int cmd_sweep(const ExperimentConfig& cfg, const std::vector<double>& alphas, const fs::path& out_dir,
              std::ostream& log) {
  ExperimentConfig base_cfg = cfg;
  base_cfg.data.amplitude_scale = 1.0;
  const GeneratedData base = generate_data(base_cfg);
  const std::vector<double> ladder = alphas.empty() ? default_alpha_ladder(cfg.data.amplitude_scale) : alphas;
  SweepResult r = run_sweep(cfg, base, ladder, out_dir, log);
  log << "largest completed alpha  " << (r.largest_completed ? fmt(*r.largest_completed) : "none") << "\n"
      << "smallest failing alpha   " << (r.smallest_failing ? fmt(*r.smallest_failing) : "none") << "\n"
      << "sup Etotal monotone      " << (r.sup_monotone ? "yes" : "no") << "\n";
  for (const auto& row : r.rows) {
    if (row.outcome == "error") return 1;
  }
  return 0;
}

}  // namespace visco
