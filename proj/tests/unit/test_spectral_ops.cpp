#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "visco/errors.hpp"
#include "visco/fft.hpp"
#include "visco/random_fields.hpp"
#include "visco/reference.hpp"
#include "visco/spectral_ops.hpp"

using namespace visco;
using testing::rel_diff;

TEST_CASE("dealiased product equals direct convolution") {
  Rng rng(11);
  for (PadFactor pad : {PadFactor{3, 2}, PadFactor{2, 1}}) {
    const SpectralGrid g(8, 1.3, pad);
    for (int i = 0; i < 5; ++i) {
      const SpectralField a = random_field(g, Rank::vector, rng), b = random_field(g, Rank::vector, rng);
      CHECK(rel_diff(dealiased_product(a, b), reference::direct_convolution(a, b)) < 1e-12);
    }
    const SpectralField s = random_field(g, Rank::scalar, rng), t = random_field(g, Rank::tensor, rng);
    CHECK(rel_diff(dealiased_product(s, t), reference::direct_convolution(s, t)) < 1e-12);
    CHECK(rel_diff(dealiased_product(t, s), reference::direct_convolution(s, t)) < 1e-12);
  }
}

TEST_CASE("product rank rules") {
  const SpectralGrid g(8, 1.0);
  CHECK_THROWS_AS(dealiased_product(SpectralField(g, Rank::vector), SpectralField(g, Rank::tensor)), ArgumentError);
}

TEST_CASE("product of plane waves lands on the summed mode") {
  const SpectralGrid g(8, 1.0);
  SpectralField a(g, Rank::scalar), b(g, Rank::scalar);
  a.at(0, g.index_of_modes({1, 0, 0})) = 1.0;
  a.at(0, g.index_of_modes({-1, 0, 0})) = 1.0;  // 2 cos x
  b.at(0, g.index_of_modes({0, 2, 0})) = 1.0;
  b.at(0, g.index_of_modes({0, -2, 0})) = 1.0;  // 2 cos 2y
  const SpectralField p = dealiased_product(a, b);
  CHECK(std::abs(p.at(0, g.index_of_modes({1, 2, 0})) - 1.0) < 1e-15);
  CHECK(std::abs(p.at(0, g.index_of_modes({-1, 2, 0})) - 1.0) < 1e-15);
  CHECK(std::abs(l2_norm(p) - 2.0) < 1e-14);
}

TEST_CASE("differential operators") {
  Rng rng(3);
  const SpectralGrid g(12, 0.7);
  const SpectralField phi = random_field(g, Rank::scalar, rng);
  const SpectralField gp = gradient(phi);
  CHECK(rel_diff(divergence(gp), laplacian(phi)) < 1e-14);
  // Row curl of a gradient-of-vector tensor vanishes.
  const SpectralField v = random_field(g, Rank::vector, rng);
  CHECK(testing::max_coeff(curl_rows(gradient(v))) < 1e-12);
  const SpectralField T = random_field(g, Rank::tensor, rng);
  CHECK(rel_diff(transpose(transpose(T)), T) == 0.0);
  CHECK(transpose(T).at(1, 9) == T.at(3, 9));
}

TEST_CASE("Leray projection") {
  Rng rng(4);
  const SpectralGrid g(10, 1.0);
  const SpectralField v = random_field(g, Rank::vector, rng);
  const SpectralField p = leray_project(v);
  CHECK(divergence_defect(p) < 1e-13);
  CHECK(rel_diff(leray_project(p), p) < 1e-15);
  // gradients are removed entirely
  CHECK(testing::max_coeff(leray_project(gradient(random_field(g, Rank::scalar, rng)))) < 1e-13);
}

TEST_CASE("norms and transforms") {
  Rng rng(5);
  const SpectralGrid g(10, 1.2);
  const SpectralField f = random_field(g, Rank::tensor, rng);
  CHECK(std::abs(physical_l2_norm(f) - l2_norm(f)) / l2_norm(f) < 1e-14);
  CHECK(rel_diff(forward_transform(g, Rank::tensor, inverse_transform(f)), f) < 1e-13);
  CHECK(sobolev_norm(f, 0) == doctest::Approx(l2_norm(f)).epsilon(1e-14));
  const double h1 = sobolev_norm(f, 1), d1 = hdot_norm(f, 1.0);
  CHECK(h1 * h1 == doctest::Approx(l2_norm(f) * l2_norm(f) + d1 * d1).epsilon(1e-13));
  CHECK(inner_sobolev(f, f, 2) == doctest::Approx(std::pow(sobolev_norm(f, 2), 2)).epsilon(1e-13));
  CHECK(inner_hdot(f, f, 0.5) == doctest::Approx(std::pow(hdot_half_norm(f), 2)).epsilon(1e-13));
  // a single mode at |k| = 2 has H^s dot norm 2^s |c|
  SpectralField s(g, Rank::scalar);
  s.at(0, g.index_of_modes({0, 0, 2})) = 1.0;
  s.at(0, g.index_of_modes({0, 0, -2})) = 1.0;
  CHECK(hdot_norm(s, 2.0) == doctest::Approx(std::sqrt(2.0) * std::pow(2.0 / 1.2, 2)));
}
