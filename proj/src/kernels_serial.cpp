#include <algorithm>
#include <cmath>

#include "visco/kernels.hpp"

namespace visco::kernels::serial {

namespace {
std::size_t wrap(int m, int big) { return static_cast<std::size_t>(m >= 0 ? m : m + big); }
}  // namespace

void multiply(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] * b[i];
}

void multiply_add(std::span<const double> a, std::span<const double> b, std::span<double> out,
                  double sign) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += sign * (a[i] * b[i]);
}

double weighted_inner(std::span<const double> w, std::span<const cplx> f, std::span<const cplx> g) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += w[i] * (std::conj(g[i]) * f[i]).real();
  return s;
}

double max_abs(std::span<const double> a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

void leray_project(const SpectralGrid& grid, std::span<cplx> v0, std::span<cplx> v1,
                   std::span<cplx> v2) {
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const Vec3 k = grid.wavenumber(idx);
    const double kk = norm_sq(k);
    if (kk == 0.0) continue;
    const cplx kv = (k[0] * v0[idx] + k[1] * v1[idx] + k[2] * v2[idx]) / kk;
    v0[idx] -= k[0] * kv;
    v1[idx] -= k[1] * kv;
    v2[idx] -= k[2] * kv;
  }
}

void scatter_padded(const SpectralGrid& grid, std::span<const cplx> a, std::span<const cplx> b,
                    std::span<cplx> z) {
  const int big = grid.padded_n();
  std::fill(z.begin(), z.end(), cplx(0.0, 0.0));
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    if (!grid.in_band(idx)) continue;
    const Modes3 m = grid.modes(idx);
    const std::size_t dst = (wrap(m[0], big) * big + wrap(m[1], big)) * big + wrap(m[2], big);
    z[dst] = b.empty() ? a[idx] : a[idx] + cplx(0.0, 1.0) * b[idx];
  }
}

void gather_padded_pair(const SpectralGrid& grid, std::span<const cplx> z, std::span<cplx> a,
                        std::span<cplx> b, double scale) {
  const int big = grid.padded_n();
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    a[idx] = 0.0;
    if (!b.empty()) b[idx] = 0.0;
    if (!grid.in_band(idx)) continue;
    const Modes3 m = grid.modes(idx);
    const cplx zp = z[(wrap(m[0], big) * big + wrap(m[1], big)) * big + wrap(m[2], big)];
    const cplx zm = z[(wrap(-m[0], big) * big + wrap(-m[1], big)) * big + wrap(-m[2], big)];
    a[idx] = 0.5 * (zp + std::conj(zm)) * scale;
    if (!b.empty()) b[idx] = (zp - std::conj(zm)) / cplx(0.0, 2.0) * scale;
  }
}

}  // namespace visco::kernels::serial
