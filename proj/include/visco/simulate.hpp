#pragma once

#include <cmath>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "visco/cone.hpp"
#include "visco/diagnostics.hpp"
#include "visco/dynamics.hpp"

namespace visco {

enum class Outcome { completed, guard, blowup };
std::string to_string(Outcome o);

struct SimulationOptions {
  double t_end = 1.0;
  int sample_every = 1;
  /// Guard threshold is guard_factor * (||u||_H2 + ||E||_H2) at the start; disabled for zero data.
  double guard_factor = 1e4;
  Cone cone{{0.0, 0.0, 1.0}, M_PI / 2.0};
  double theta0 = 1.0;
  /// Steps between checkpoints; 0 disables them.
  int checkpoint_every = 0;
  std::filesystem::path checkpoint_dir;
  std::function<void(const DiagnosticRecord&)> on_record;
};

struct RunMaxima {
  double det = 0.0, div_et = 0.0, curl = 0.0, leak_u = 0.0, leak_E = 0.0, div_u = 0.0;
  double i3_i6 = 0.0, j6 = 0.0, h2_identity = 0.0, e_identity = 0.0;
};

struct SimulationResult {
  Outcome outcome = Outcome::completed;
  double t_stop = 0.0;
  std::size_t steps = 0;
  double dt = 0.0;
  double guard_threshold = 0.0;
  FlowState final_state;
  std::vector<DiagnosticRecord> records;
  EnergyLedger ledger;
  RunMaxima maxima;
  std::vector<std::string> warnings;
  double initial_energy = 0.0;                  // 1/2 theta^2 (||u||^2 + ||E||^2) at the start
  double energy_identity_integral = 0.0;        // trapezoid integral of |energy_id_res| over samples
  double energy_balance_trajectory = 0.0;       // sum over steps of |dL + theta^2 mu int ||grad u||^2|

  explicit SimulationResult(const FlowState& s) : final_state(s) {}
};

/// Support width check (one quadratic interaction must fit the band) and band-edge energy check.
std::vector<std::string> band_warnings(const FlowState& s);

/// Steps from initial.t to t_end (the step is shrunk so an integer number of steps lands on t_end).
/// Blow-up and guard are outcomes, not exceptions; checkpoint I/O failures throw IoError.
SimulationResult simulate(const FlowState& initial, const StepperConfig& cfg, const SimulationOptions& opt);

}  // namespace visco
