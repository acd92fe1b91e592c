#include <doctest.h>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

#include "helpers.hpp"
#include "visco/dynamics.hpp"
#include "visco/errors.hpp"
#include "visco/random_fields.hpp"
#include "visco/reference.hpp"
#include "visco/spectral_ops.hpp"

using namespace visco;
using testing::rel_diff;

TEST_CASE("model right-hand sides match the direct-sum reference") {
  Rng rng(21);
  const SpectralGrid g(8, 1.1, PadFactor{3, 2});
  FlowState s(random_solenoidal(g, rng), random_field(g, Rank::tensor, rng), 0.0, 0.4);
  CHECK(rel_diff(momentum_rhs(s), reference::momentum_rhs(s.u, s.E, s.mu)) < 1e-12);
  CHECK(rel_diff(deformation_rhs(s), reference::deformation_rhs(s.u, s.E)) < 1e-12);
}

TEST_CASE("rhs term split is consistent") {
  Rng rng(22);
  const SpectralGrid g(8, 1.0);
  FlowState s(random_solenoidal(g, rng), random_field(g, Rank::tensor, rng), 0.0, 0.4);
  RhsEvaluator ev(g);
  const RhsTerms t = ev.terms(s);
  CHECK(rel_diff(t.du, momentum_rhs(s)) < 1e-13);
  CHECK(rel_diff(t.dE, deformation_rhs(s)) < 1e-13);
  // raw - grad P is the projected momentum forcing
  SpectralField proj = t.raw - gradient(t.pressure);
  proj.axpy(s.mu, laplacian(s.u));
  CHECK(rel_diff(proj, t.du) < 1e-13);
  CHECK(rel_diff(pressure_of(s), t.pressure) == 0.0);
  CHECK(divergence_defect(t.du) < 1e-12 * testing::max_coeff(t.du));
}

TEST_CASE("zero state is a fixed point") {
  const SpectralGrid g(8, 1.0);
  FlowState s(g, 1.0);
  Stepper st(g, 1.0, StepperConfig{1e-2});
  for (int i = 0; i < 3; ++i) st.advance(s);
  CHECK(s.u.is_zero());
  CHECK(s.E.is_zero());
  CHECK(s.t == doctest::Approx(0.03));
}

TEST_CASE("frozen deformation leaves E unchanged") {
  Rng rng(23);
  const SpectralGrid g(8, 1.0);
  FlowState s(0.1 * random_solenoidal(g, rng), 0.1 * random_field(g, Rank::tensor, rng), 0.0, 1.0);
  const SpectralField E0 = s.E;
  Stepper st(g, 1.0, StepperConfig{1e-3, true});
  st.advance(s);
  CHECK(s.E.max_abs_difference(E0) == 0.0);
  CHECK(testing::max_coeff(s.u) > 0.0);
}

TEST_CASE("stability check") {
  const SpectralGrid g(16, 1.0);
  CHECK(lawson_amplification(100.0, 1.0, 1e-3) <= 1.0);
  CHECK(lawson_amplification(0.0, 1.0, 1e-3) == doctest::Approx(1.0));
  CHECK_NOTHROW(check_stability(g, 1.0, StepperConfig{1e-2}));
  CHECK_THROWS_AS(check_stability(g, 1.0, StepperConfig{1.0}), ArgumentError);
  CHECK_THROWS_AS(check_stability(g, 1.0, StepperConfig{-1.0}), ArgumentError);
  CHECK_THROWS_AS(check_stability(g, 0.0, StepperConfig{1e-3}), ArgumentError);
}

TEST_CASE("single mode follows the matrix exponential of the linearization") {
  const SpectralGrid g(8, 1.3);
  const double mu = 0.7, amp = 1e-8, T = 0.3;
  const std::size_t idx = g.index_of_modes({2, -1, 1});
  const Vec3 k = g.wavenumber(idx);
  Eigen::Matrix<cplx, 12, 12> A;
  for (int col = 0; col < 12; ++col) {
    reference::ModeState e{};
    e[col] = 1.0;
    const auto d = reference::linear_mode_derivative(k, mu, e);
    for (int r = 0; r < 12; ++r) A(r, col) = d[r];
  }
  Rng rng(24);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::Matrix<cplx, 12, 1> x0;
  for (int i = 0; i < 12; ++i) x0(i) = amp * cplx(normal(rng), normal(rng));
  const cplx ku = (k[0] * x0(0) + k[1] * x0(1) + k[2] * x0(2)) / norm_sq(k);
  for (int i = 0; i < 3; ++i) x0(i) -= k[i] * ku;

  FlowState s(g, mu);
  for (int c = 0; c < 12; ++c) {
    SpectralField& f = c < 3 ? s.u : s.E;
    const int comp = c < 3 ? c : c - 3;
    f.at(comp, idx) = x0(c);
    f.at(comp, g.mirror(idx)) = std::conj(x0(c));
  }
  Stepper st(g, mu, StepperConfig{1e-3});
  for (int i = 0; i < 300; ++i) st.advance(s);
  const Eigen::Matrix<cplx, 12, 12> At = A * T;
  const Eigen::Matrix<cplx, 12, 1> x = At.exp() * x0;
  double err = 0.0;
  for (int c = 0; c < 3; ++c) err = std::max(err, std::abs(s.u.at(c, idx) - x(c)));
  for (int c = 0; c < 9; ++c) err = std::max(err, std::abs(s.E.at(c, idx) - x(3 + c)));
  CHECK(err / x.cwiseAbs().maxCoeff() < 1e-8);

  // the RK4 reference propagator agrees with the exponential too
  reference::ModeState y0;
  for (int i = 0; i < 12; ++i) y0[i] = x0(i);
  const auto y = reference::propagate_linear_mode(k, mu, y0, T, 2000);
  double e2 = 0.0;
  for (int i = 0; i < 12; ++i) e2 = std::max(e2, std::abs(y[i] - x(i)));
  CHECK(e2 / x.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("one step equals a Stepper advance") {
  Rng rng(25);
  const SpectralGrid g(8, 1.0);
  FlowState s(0.1 * random_solenoidal(g, rng), 0.1 * random_column_solenoidal(g, rng), 0.0, 0.5);
  const FlowState a = step(s, StepperConfig{1e-3});
  Stepper st(g, 0.5, StepperConfig{1e-3});
  st.advance(s);
  CHECK(a.u.max_abs_difference(s.u) == 0.0);
  CHECK(a.E.max_abs_difference(s.E) == 0.0);
  CHECK(st.last_dissipation() > 0.0);
}

TEST_CASE("state validation") {
  const SpectralGrid g(8, 1.0);
  CHECK_THROWS_AS(FlowState(SpectralField(g, Rank::tensor), SpectralField(g, Rank::tensor), 0.0, 1.0), ArgumentError);
  FlowState s(g, 2.0);
  Stepper st(g, 1.0, StepperConfig{1e-3});
  CHECK_THROWS_AS(st.advance(s), ArgumentError);
}
