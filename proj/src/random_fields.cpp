#include "visco/random_fields.hpp"

#include <algorithm>
#include <cmath>

#include "visco/spectral_ops.hpp"

namespace visco {

SpectralField random_field(const SpectralGrid& grid, Rank rank, Rng& rng, int radius) {
  const int R = radius < 0 ? grid.band_limit() : std::min(radius, grid.band_limit());
  std::normal_distribution<double> normal(0.0, 1.0);
  SpectralField f(grid, rank);
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    if (!grid.in_band(idx)) continue;
    const Modes3 m = grid.modes(idx);
    if (std::max({std::abs(m[0]), std::abs(m[1]), std::abs(m[2])}) > R) continue;
    if (m[0] == 0 && m[1] == 0 && m[2] == 0) continue;
    for (int c = 0; c < f.components(); ++c) {
      const double re = normal(rng);
      const double im = normal(rng);
      f.at(c, idx) = cplx(re, im);
    }
  }
  f.symmetrize();
  return f;
}

SpectralField random_solenoidal(const SpectralGrid& grid, Rng& rng, int radius) {
  return leray_project(random_field(grid, Rank::vector, rng, radius));
}

SpectralField random_column_solenoidal(const SpectralGrid& grid, Rng& rng, int radius) {
  SpectralField E = random_field(grid, Rank::tensor, rng, radius);
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const Vec3 k = grid.wavenumber(idx);
    const double kk = norm_sq(k);
    if (kk == 0.0) continue;
    for (int col = 0; col < 3; ++col) {
      cplx kc = 0.0;
      for (int j = 0; j < 3; ++j) kc += k[j] * E.at(3 * j + col, idx);
      kc /= kk;
      for (int j = 0; j < 3; ++j) E.at(3 * j + col, idx) -= k[j] * kc;
    }
  }
  return E;
}

SpectralField restrict_to_cone(const SpectralField& f, const Cone& cone) {
  SpectralField out = f;
  const SpectralGrid& g = f.grid();
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    const Vec3 k = g.wavenumber(idx);
    if (norm_sq(k) > 0.0 && cone_contains(k, cone)) continue;
    for (int c = 0; c < out.components(); ++c) out.at(c, idx) = 0.0;
  }
  return out;
}

Vec3 random_unit_vector(Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  for (;;) {
    const Vec3 v{normal(rng), normal(rng), normal(rng)};
    const double len = std::sqrt(norm_sq(v));
    if (len > 1e-6) return {v[0] / len, v[1] / len, v[2] / len};
  }
}

}  // namespace visco
