#include "visco/grid.hpp"

#include <cmath>
#include <string>

#include "visco/errors.hpp"

namespace visco {

SpectralGrid::SpectralGrid(int n, double box_scale, PadFactor pad)
    : n_(n), box_scale_(box_scale), pad_(pad) {
  if (n < 4 || n % 2 != 0) {
    throw ArgumentError("grid: n must be an even integer >= 4, got " + std::to_string(n));
  }
  if (!(box_scale > 0.0) || !std::isfinite(box_scale)) {
    throw ArgumentError("grid: box scale must be positive");
  }
  if (pad.num <= 0 || pad.den <= 0 || 2 * pad.num < 3 * pad.den) {
    throw ArgumentError("grid: pad factor must be a positive rational >= 3/2");
  }
  const long scaled = static_cast<long>(pad.num) * n;
  int m = static_cast<int>((scaled + pad.den - 1) / pad.den);
  if (m % 2 != 0) ++m;
  const int alias_free = 3 * band_limit() + 1;
  if (m < alias_free) m = alias_free + (alias_free % 2);
  padded_n_ = m;

  mode_.resize(n);
  k1d_.resize(n);
  for (int i = 0; i < n; ++i) {
    mode_[i] = i <= n / 2 ? i : i - n;
    k1d_[i] = mode_[i] / box_scale_;
  }
}

Modes3 SpectralGrid::modes(std::size_t idx) const {
  const std::size_t nn = static_cast<std::size_t>(n_);
  return {mode_[idx / (nn * nn)], mode_[(idx / nn) % nn], mode_[idx % nn]};
}

Vec3 SpectralGrid::wavenumber(std::size_t idx) const {
  const std::size_t nn = static_cast<std::size_t>(n_);
  return {k1d_[idx / (nn * nn)], k1d_[(idx / nn) % nn], k1d_[idx % nn]};
}

double SpectralGrid::wavenumber_sq(std::size_t idx) const { return norm_sq(wavenumber(idx)); }

std::size_t SpectralGrid::index_of_modes(const Modes3& m) const {
  std::size_t out = 0;
  for (int d = 0; d < 3; ++d) {
    if (m[d] < -n_ / 2 || m[d] > n_ / 2) {
      throw ArgumentError("grid: mode " + std::to_string(m[d]) + " outside lattice");
    }
    const int i = m[d] >= 0 ? m[d] : m[d] + n_;
    out = out * n_ + static_cast<std::size_t>(i % n_);
  }
  return out;
}

std::size_t SpectralGrid::mirror(std::size_t idx) const {
  const std::size_t nn = static_cast<std::size_t>(n_);
  const std::size_t i0 = idx / (nn * nn), i1 = (idx / nn) % nn, i2 = idx % nn;
  auto flip = [nn](std::size_t i) { return (nn - i) % nn; };
  return (flip(i0) * nn + flip(i1)) * nn + flip(i2);
}

bool SpectralGrid::in_band(std::size_t idx) const {
  const Modes3 m = modes(idx);
  const int k = band_limit();
  return std::abs(m[0]) <= k && std::abs(m[1]) <= k && std::abs(m[2]) <= k;
}

Vec3 wavenumber_of(const Index3& index, const SpectralGrid& grid) {
  for (std::size_t i : index) {
    if (i >= static_cast<std::size_t>(grid.n())) {
      throw ArgumentError("wavenumber_of: lattice index " + std::to_string(i) + " out of range");
    }
  }
  return {grid.k1d(index[0]), grid.k1d(index[1]), grid.k1d(index[2])};
}

void require_same_grid(const SpectralGrid& a, const SpectralGrid& b, const char* what) {
  if (!(a == b)) throw ArgumentError(std::string(what) + ": grid mismatch");
}

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

}  // namespace visco
