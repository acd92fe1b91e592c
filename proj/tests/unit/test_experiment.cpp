#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "visco/checkpoint.hpp"
#include "visco/errors.hpp"
#include "visco/experiment.hpp"
#include "visco/spectral_ops.hpp"

using namespace visco;
namespace fs = std::filesystem;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.grid = {16, 2.0, {3, 2}};
  c.data.lambda = 2.0;
  c.data.E0_t_end = 0.2;
  c.data.E0_dt = 0.02;
  c.run.dt = 1e-2;
  c.run.t_end = 0.1;
  c.run.sample_every = 2;
  return c;
}

fs::path fresh_dir(const char* name) {
  const fs::path p = fs::temp_directory_path() / (std::string("visco_exp_") + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("generated data hits the target product") {
  const ExperimentConfig c = small_config();
  const GeneratedData d = generate_data(c);
  CHECK(d.product == doctest::Approx(1e-3).epsilon(1e-4));
  CHECK(d.theta_lambda == doctest::Approx(std::asin(0.5)));
  CHECK(d.residuals.div_et < 1e-8);
  const GeneratedData d2 = rescale(d, 2.0);
  CHECK(d2.h2_u0 == doctest::Approx(2.0 * d.h2_u0).epsilon(1e-15));
  CHECK(d2.h2_E0 == doctest::Approx(2.0 * d.h2_E0).epsilon(1e-15));
  CHECK(d2.product == doctest::Approx(2.0 * d.product).epsilon(1e-15));
}

TEST_CASE("reported theta_lambda for lambda 8") {
  ExperimentConfig c;
  CHECK(c.theta0() == doctest::Approx(0.12533).epsilon(1e-4));
}

TEST_CASE("zero data") {
  ExperimentConfig c = small_config();
  c.data.m0 = 0.0;
  c.data.target_product.reset();
  const fs::path dir = fresh_dir("zero");
  std::ostringstream log;
  CHECK(cmd_gen_data(c, dir, log) == 0);
  CHECK(read_checkpoint(dir / "u0.ckp").is_zero());
  CHECK(read_checkpoint(dir / "E0.ckp").is_zero());
  CHECK(cmd_simulate(c, dir, log) == 0);
  const auto s = nlohmann::json::parse(slurp(dir / "summary.json"));
  CHECK(s["outcome"] == "completed");
  CHECK(s["ledger"]["Etotal"] == 0.0);
  CHECK(s["data_source"] == "checkpoint");
  fs::remove_all(dir);
}

TEST_CASE("simulate writes deterministic outputs") {
  const ExperimentConfig c = small_config();
  const fs::path a = fresh_dir("det_a"), b = fresh_dir("det_b");
  std::ostringstream log;
  CHECK(cmd_simulate(c, a, log) == 0);
  CHECK(cmd_simulate(c, b, log) == 0);
  const std::string csv = slurp(a / "series.csv");
  CHECK(csv == slurp(b / "series.csv"));
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 6);
  const auto s = nlohmann::json::parse(slurp(a / "summary.json"));
  CHECK(s["outcome"] == "completed");
  CHECK(s["data_source"] == "generated");
  CHECK(s["max_residuals"]["div_et"].get<double>() < 1e-8);
  CHECK(fs::exists(a / "u0.ckp"));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("checkpoints are written at the configured cadence") {
  ExperimentConfig c = small_config();
  c.output.checkpoint_every = 5;
  const fs::path dir = fresh_dir("ckp");
  std::ostringstream log;
  CHECK(cmd_simulate(c, dir, log) == 0);
  CHECK(fs::exists(dir / "checkpoints" / "u_00000005.ckp"));
  CHECK(fs::exists(dir / "checkpoints" / "E_00000010.ckp"));
  fs::remove_all(dir);
}

TEST_CASE("huge amplitude ends in guard or blowup, never silently") {
  ExperimentConfig c = small_config();
  c.run.blowup_guard = 10.0;
  c.run.t_end = 0.5;
  const GeneratedData base = generate_data(c);
  std::ostringstream log;
  const fs::path dir = fresh_dir("sweep");
  const SweepResult r = run_sweep(c, base, {1.0, 1.0, 1e6}, dir, log);
  REQUIRE(r.rows.size() == 3);
  CHECK(r.rows[0].outcome == "completed");
  CHECK(r.rows[1].outcome == r.rows[0].outcome);
  CHECK(r.rows[1].sup_Etotal == r.rows[0].sup_Etotal);
  CHECK((r.rows[2].outcome == "guard" || r.rows[2].outcome == "blowup"));
  CHECK(r.largest_completed == 1.0);
  CHECK(r.smallest_failing == 1e6);
  CHECK(fs::exists(dir / "sweep.csv"));
  CHECK(fs::exists(dir / "run_02" / "summary.json"));
  fs::remove_all(dir);
}

TEST_CASE("sweep argument validation") {
  CHECK_THROWS_AS(validate_alphas({1.0}), ArgumentError);
  CHECK_THROWS_AS(validate_alphas({1.0, 0.5}), ArgumentError);
  CHECK_NOTHROW(validate_alphas({0.0, 0.0, 2.0}));
  CHECK(parse_alpha_list("1e-3, 0.5,2") == std::vector<double>{1e-3, 0.5, 2.0});
  CHECK_THROWS_AS(parse_alpha_list("1,x"), ArgumentError);
  const auto ladder = default_alpha_ladder(2.0);
  REQUIRE(ladder.size() == 6);
  CHECK(ladder.front() == doctest::Approx(2e-3));
  CHECK(ladder.back() == doctest::Approx(200.0));
}

TEST_CASE("verify rejects unknown suites") {
  std::ostringstream log;
  CHECK_THROWS_AS(cmd_verify("nope", 1, log), ArgumentError);
  CHECK(cmd_verify("cancellations", 1, log) == 0);
}
