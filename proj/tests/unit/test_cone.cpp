#include <doctest.h>

#include <cmath>
#include <numbers>

#include "visco/cone.hpp"
#include "visco/errors.hpp"
#include "visco/random_fields.hpp"

using namespace visco;

TEST_CASE("cone geometry") {
  const Cone c({0.0, 0.0, 2.0}, 0.3);
  CHECK(c.axis()[2] == doctest::Approx(1.0));
  CHECK(cone_angle({0.0, 0.0, -1.0}, c) == doctest::Approx(0.0));
  CHECK(cone_angle({1.0, 0.0, 1.0}, c) == doctest::Approx(std::numbers::pi / 4));
  CHECK(cone_contains({0.1, 0.0, -1.0}, c));
  CHECK_FALSE(cone_contains({1.0, 0.0, 1.0}, c));
  CHECK(cone_contains({0.0, 0.0, 0.0}, c));
  CHECK_THROWS_AS(cone_angle({0.0, 0.0, 0.0}, c), ArgumentError);
  CHECK_THROWS_AS(Cone({0.0, 0.0, 0.0}, 0.3), ArgumentError);
  CHECK_THROWS_AS(Cone({0.0, 0.0, 1.0}, 2.0), ArgumentError);
}

TEST_CASE("leakage") {
  const SpectralGrid g(8, 1.0);
  Rng rng(6);
  const SpectralField f = random_field(g, Rank::vector, rng);
  CHECK(cone_leakage(f, Cone({0.0, 0.0, 1.0}, std::numbers::pi / 2)) == 0.0);
  CHECK(cone_leakage(SpectralField(g, Rank::vector), Cone({0.0, 0.0, 1.0}, 0.2)) == 0.0);
  const Cone narrow({1.0, 1.0, 0.0}, 0.4);
  const SpectralField r = restrict_to_cone(f, narrow);
  CHECK(cone_leakage(r, narrow) == 0.0);
  CHECK(cone_leakage(f, narrow) > 0.0);
  SpectralField m(g, Rank::scalar);
  m.at(0, 0) = 1.0;
  CHECK(cone_leakage(m, narrow) == 1.0);
}

TEST_CASE("split_eta") {
  const EtaSplit s = split_eta({1.0, 2.0, 3.0}, {0.0, 0.0, 5.0});
  CHECK(s.a[2] == doctest::Approx(3.0));
  CHECK(s.b[0] == doctest::Approx(1.0));
  CHECK(s.b[1] == doctest::Approx(2.0));
  CHECK(s.b[2] == doctest::Approx(0.0));
  const EtaSplit par = split_eta({2.0, 2.0, 0.0}, {-1.0, -1.0, 0.0});
  CHECK(std::sqrt(norm_sq(par.b)) < 1e-15);
  CHECK(angle_between({1.0, 0.0, 0.0}, {-1.0, 0.0, 0.0}) == doctest::Approx(std::numbers::pi));
}
