#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "visco/config.hpp"
#include "visco/simulate.hpp"

namespace visco {

/// Initial data of one experiment and the numbers cmd_gen_data reports about it.
struct GeneratedData {
  SpectralField u0;
  SpectralField E0;
  double lambda = 0.0;
  double theta_lambda = 0.0;  // asin(1 / lambda)
  double theta0 = 0.0;        // cone half angle used for construction and weighting
  double m0 = 0.0;            // profile mass at amplitude 1
  double alpha = 1.0;         // amplitude scale applied after construction
  double h2_u0 = 0.0;
  double h2_E0 = 0.0;
  double product = 0.0;       // theta0 (h2_u0 + h2_E0)
  double leak_u0 = 0.0;
  double div_u0 = 0.0;
  StructureResiduals residuals;  // of the scaled E0
  std::size_t E0_steps = 0;
  double E0_dt = 0.0;

  GeneratedData(SpectralField u, SpectralField E) : u0(std::move(u)), E0(std::move(E)) {}
};

Cone experiment_cone(const ExperimentConfig& cfg);

/// Builds (u0, E0) at amplitude 1, calibrating m0 first when data.target_product is set,
/// then scales both by data.amplitude_scale. Throws ConstructionFailure from build_E0.
GeneratedData generate_data(const ExperimentConfig& cfg);
/// Same datum multiplied by alpha (relative to amplitude 1); norms and residuals recomputed.
GeneratedData rescale(const GeneratedData& data, double alpha);

FlowState initial_state(const GeneratedData& data, double mu);
SimulationOptions simulation_options(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

struct SweepRow {
  double alpha = 0.0;
  double product = 0.0;
  std::string outcome;  // completed, guard, blowup, or error
  double t_stop = 0.0;
  std::size_t steps = 0;
  double initial_Etotal = 0.0;
  double sup_Etotal = 0.0;
  std::string message;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::optional<double> largest_completed;  // with finite sup E_total
  std::optional<double> smallest_failing;
  bool sup_monotone = true;                 // reported only
};

/// Default ladder alpha_ref * {1e-3, 1e-2, 1e-1, 1, 1e1, 1e2}.
std::vector<double> default_alpha_ladder(double alpha_ref);
/// Throws ArgumentError unless there are at least two values, all finite, nonnegative and nondecreasing.
void validate_alphas(const std::vector<double>& alphas);
/// "1e-3,0.1,1" -> values; throws ArgumentError.
std::vector<double> parse_alpha_list(const std::string& text);

/// One simulation per alpha from the amplitude-1 datum `base`, each writing into
/// out_dir/run_<index>. Per-run failures become rows with outcome "error".
SweepResult run_sweep(const ExperimentConfig& cfg, const GeneratedData& base, const std::vector<double>& alphas,
                      const std::filesystem::path& out_dir, std::ostream& log);

// Subcommands. Each returns the process exit code and writes its files under out_dir.
int cmd_gen_data(const ExperimentConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);
int cmd_simulate(const ExperimentConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);
int cmd_sweep(const ExperimentConfig& cfg, const std::vector<double>& alphas, const std::filesystem::path& out_dir,
              std::ostream& log);
/// Suites: spectral, cancellations, cone, data, dynamics, or all.
int cmd_verify(const std::string& suite, unsigned seed, std::ostream& log);

const std::vector<std::string>& verify_suites();

}  // namespace visco
