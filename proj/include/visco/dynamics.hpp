#pragma once

#include <vector>

#include "visco/fft.hpp"
#include "visco/field.hpp"

namespace visco {

/// (u, E, t): velocity, deformation perturbation E = F - I, time, viscosity.
struct FlowState {
  SpectralField u;
  SpectralField E;
  double t = 0.0;
  double mu = 1.0;

  explicit FlowState(const SpectralGrid& grid, double mu = 1.0);
  FlowState(SpectralField u, SpectralField E, double t = 0.0, double mu = 1.0);

  const SpectralGrid& grid() const { return u.grid(); }
};

struct StepperConfig {
  double dt = 1e-3;
  /// Test mode: E_t is forced to zero so the velocity solves Navier-Stokes with frozen E.
  bool freeze_deformation = false;
};

/// Every piece of the right-hand side, kept apart for the diagnostics.
struct RhsTerms {
  SpectralField advect_u;  // u.grad u
  SpectralField div_eet;   // div(E E^T)
  SpectralField div_e;     // div E
  SpectralField div_et;    // div E^T
  SpectralField raw;       // -u.grad u + div(E E^T) + div E + div E^T
  SpectralField pressure;  // raw - grad P is divergence free
  SpectralField du;        // projected raw + mu lap u
  SpectralField grad_u;
  SpectralField advect_E;  // u.grad E
  SpectralField stretch;   // (grad u) E
  SpectralField dE;        // -u.grad E + (grad u) E + grad u

  explicit RhsTerms(const SpectralGrid& grid);
};

/// Right-hand side assembly with reusable padded-grid buffers. Not thread-safe.
class RhsEvaluator {
 public:
  explicit RhsEvaluator(const SpectralGrid& grid);

  const SpectralGrid& grid() const { return grid_; }

  /// nu = projection of (-u.grad u + div(E E^T) + div E + div E^T), without the viscous term;
  /// dE = deformation rhs (zero when freeze is set).
  void evaluate(const SpectralField& u, const SpectralField& E, SpectralField& nu, SpectralField& dE,
                bool freeze = false);
  /// Only the deformation rhs, for the frozen-velocity transport of the initial-data factory.
  void evaluate_deformation(const SpectralField& u, const SpectralField& E, SpectralField& dE);

  RhsTerms terms(const FlowState& s);

 private:
  enum class Mode { full, full_split, deformation_only };
  void products(const SpectralField& u, const SpectralField& E, Mode mode);

  SpectralGrid grid_;
  PaddedTransform xf_;
  std::vector<std::size_t> band_;
  CoeffVector grad_u_;   // 9 components
  CoeffVector grad_E_;   // 27 components, (ij, l) at 3 * (3i + j) + l
  RealVector phys_in_;   // u(3), grad u(9), E(9), grad E(27)
  RealVector phys_out_;  // products
  CoeffVector spec_out_;
};

SpectralField momentum_rhs(const FlowState& state);
SpectralField deformation_rhs(const FlowState& state);
/// Pressure with raw - grad P = projection of raw: P(k) = -i k.raw(k) / |k|^2, zero mode 0.
SpectralField pressure_of(const FlowState& state);

/// Spectral radius of one Lawson-RK4 step applied to the per-mode linear coupling
/// x' = [[-mu kk, 1], [-kk, 0]] x, with the integrating factor on the first component.
double lawson_amplification(double kk, double mu, double dt);
/// Throws ArgumentError unless dt > 0 and the amplification stays <= 1 + 1e-10 on every band mode.
void check_stability(const SpectralGrid& grid, double mu, const StepperConfig& cfg);

/// Integrating-factor (Lawson) RK4: exact exp(-mu |k|^2 h) on the viscous part of u,
/// classical RK4 on everything else.
class Stepper {
 public:
  Stepper(const SpectralGrid& grid, double mu, StepperConfig cfg);

  const StepperConfig& config() const { return cfg_; }

  /// Advance in place; throws BlowUp when the new state is not finite.
  void advance(FlowState& s);
  /// mu * integral of ||grad u||^2 over the last step, by the RK4 stage weights.
  double last_dissipation() const { return last_dissipation_; }

 private:
  double grad_sq(const SpectralField& u) const;

  StepperConfig cfg_;
  double mu_;
  RhsEvaluator rhs_;
  RealVector full_;
  RealVector half_;
  RealVector kk_;
  SpectralField nu_, us_, au_;  // stage slope, stage input, accumulated update
  SpectralField de_, es_, ae_;
  double last_dissipation_ = 0.0;
};

/// One step of size cfg.dt.
FlowState step(const FlowState& state, const StepperConfig& cfg);

}  // namespace visco
