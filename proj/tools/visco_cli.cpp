#include <cstdlib>
#include <iostream>
#include <string>

#include <omp.h>

#include <CLI11.hpp>

#include "visco/errors.hpp"
#include "visco/experiment.hpp"

namespace {

// VISCO_THREADS wins over OMP_NUM_THREADS; neither set leaves the OpenMP default.
void configure_threads() {
  for (const char* var : {"VISCO_THREADS", "OMP_NUM_THREADS"}) {
    const char* v = std::getenv(var);
    if (!v || !*v) continue;
    const int n = std::atoi(v);
    if (n > 0) {
      omp_set_num_threads(n);
      return;
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-spectral viscoelastic flow experiments"};
  app.require_subcommand(1);

  std::string config_path, out_dir, suite = "all", alphas;
  unsigned seed = 20240531;

  auto* gen = app.add_subcommand("gen-data", "build u0 and E0 and write checkpoints");
  auto* sim = app.add_subcommand("simulate", "run one simulation");
  auto* ver = app.add_subcommand("verify", "run a property suite");
  auto* swp = app.add_subcommand("sweep", "simulate along an amplitude ladder");
  for (auto* sub : {gen, sim, swp}) {
    sub->add_option("--config", config_path, "experiment config (JSON); defaults apply when omitted");
    sub->add_option("--out", out_dir, "output directory (overrides output.directory)");
    sub->add_option("--seed", seed, "random seed (unused by deterministic commands)");
  }
  ver->add_option("--suite", suite, "spectral, cancellations, cone, data, dynamics or all");
  ver->add_option("--seed", seed, "random seed");
  swp->add_option("--alphas", alphas, "comma-separated amplitude scales, nondecreasing");

  CLI11_PARSE(app, argc, argv);
  configure_threads();

  try {
    if (ver->parsed()) return visco::cmd_verify(suite, seed, std::cout);

    visco::ExperimentConfig cfg;
    if (!config_path.empty()) cfg = visco::load_config(config_path);
    const std::string dir = out_dir.empty() ? cfg.output.directory : out_dir;
    if (gen->parsed()) return visco::cmd_gen_data(cfg, dir, std::cout);
    if (sim->parsed()) return visco::cmd_simulate(cfg, dir, std::cout);
    if (swp->parsed()) {
      const auto list = alphas.empty() ? std::vector<double>{} : visco::parse_alpha_list(alphas);
      return visco::cmd_sweep(cfg, list, dir, std::cout);
    }
  } catch (const visco::ConstructionFailure& e) {
    std::cerr << "error: " << e.what() << " (residual " << e.residual_name() << ")\n";
    return 3;
  } catch (const visco::PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const visco::ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
