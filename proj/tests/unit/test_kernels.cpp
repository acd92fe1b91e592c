#include <doctest.h>

#include <random>

#include "visco/kernels.hpp"
#include "visco/random_fields.hpp"

using namespace visco;

TEST_CASE("parallel kernels agree with the serial reference") {
  const SpectralGrid g(12, 1.0, PadFactor{3, 2});
  Rng rng(9);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const std::size_t M = g.padded_size();
  RealVector a(M), b(M), o1(M), o2(M);
  for (std::size_t i = 0; i < M; ++i) {
    a[i] = uni(rng);
    b[i] = uni(rng);
  }
  kernels::multiply(a, b, o1);
  kernels::serial::multiply(a, b, o2);
  CHECK(o1 == o2);
  kernels::multiply_add(a, b, o1, -1.0);
  kernels::serial::multiply_add(a, b, o2, -1.0);
  CHECK(o1 == o2);
  CHECK(kernels::max_abs(a) == kernels::serial::max_abs(a));

  const SpectralField f = random_field(g, Rank::vector, rng), h = random_field(g, Rank::vector, rng);
  RealVector w(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) w[i] = g.wavenumber_sq(i);
  const double p = kernels::weighted_inner(w, f.component(1), h.component(2));
  const double s = kernels::serial::weighted_inner(w, f.component(1), h.component(2));
  CHECK(std::abs(p - s) <= 1e-14 * std::abs(s));

  SpectralField x = f, y = f;
  kernels::leray_project(g, x.component(0), x.component(1), x.component(2));
  kernels::serial::leray_project(g, y.component(0), y.component(1), y.component(2));
  CHECK(x.max_abs_difference(y) == 0.0);

  CoeffVector z1(M), z2(M), a1(g.size()), b1(g.size()), a2(g.size()), b2(g.size());
  kernels::scatter_padded(g, f.component(0), f.component(1), z1);
  kernels::serial::scatter_padded(g, f.component(0), f.component(1), z2);
  CHECK(std::equal(z1.begin(), z1.end(), z2.begin()));
  kernels::gather_padded_pair(g, z1, a1, b1, 1.0);
  kernels::serial::gather_padded_pair(g, z2, a2, b2, 1.0);
  CHECK(std::equal(a1.begin(), a1.end(), a2.begin()));
  CHECK(std::equal(b1.begin(), b1.end(), b2.begin()));
  // scatter then gather recovers both Hermitian inputs
  double err = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    err = std::max({err, std::abs(a1[i] - f.at(0, i)), std::abs(b1[i] - f.at(1, i))});
  }
  CHECK(err < 1e-15);
}
