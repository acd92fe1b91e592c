#include "visco/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace visco::kernels {

namespace {

using Index = std::ptrdiff_t;

Index signed_size(std::size_t n) { return static_cast<Index>(n); }

// Padded-grid index of a signed mode.
inline std::size_t padded_slot(int m, int big) { return static_cast<std::size_t>(m >= 0 ? m : m + big); }

template <class Body>
double chunked_sum(std::size_t n, Body body) {
  const std::size_t chunks = (n + kReductionChunk - 1) / kReductionChunk;
  std::vector<double> partial(chunks, 0.0);
#pragma omp parallel for schedule(static)
  for (Index c = 0; c < signed_size(chunks); ++c) {
    const std::size_t lo = static_cast<std::size_t>(c) * kReductionChunk;
    const std::size_t hi = std::min(n, lo + kReductionChunk);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += body(i);
    partial[c] = s;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace

void multiply(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  const Index n = signed_size(out.size());
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void multiply_add(std::span<const double> a, std::span<const double> b, std::span<double> out,
                  double sign) {
  const Index n = signed_size(out.size());
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) out[i] += sign * (a[i] * b[i]);
}

double weighted_inner(std::span<const double> w, std::span<const cplx> f, std::span<const cplx> g) {
  return chunked_sum(f.size(), [&](std::size_t i) {
    return w[i] * (f[i].real() * g[i].real() + f[i].imag() * g[i].imag());
  });
}

double max_abs(std::span<const double> a) {
  double m = 0.0;
  const Index n = signed_size(a.size());
#pragma omp parallel for reduction(max : m) schedule(static)
  for (Index i = 0; i < n; ++i) m = std::max(m, std::abs(a[i]));
  return m;
}

void leray_project(const SpectralGrid& grid, std::span<cplx> v0, std::span<cplx> v1,
                   std::span<cplx> v2) {
  const Index n = grid.n();
#pragma omp parallel for schedule(static)
  for (Index i0 = 0; i0 < n; ++i0) {
    const double k0 = grid.k1d(i0);
    for (Index i1 = 0; i1 < n; ++i1) {
      const double k1 = grid.k1d(i1);
      for (Index i2 = 0; i2 < n; ++i2) {
        const double k2 = grid.k1d(i2);
        const double kk = k0 * k0 + k1 * k1 + k2 * k2;
        if (kk == 0.0) continue;
        const std::size_t idx = grid.index(i0, i1, i2);
        const cplx kv = (k0 * v0[idx] + k1 * v1[idx] + k2 * v2[idx]) / kk;
        v0[idx] -= k0 * kv;
        v1[idx] -= k1 * kv;
        v2[idx] -= k2 * kv;
      }
    }
  }
}

void scatter_padded(const SpectralGrid& grid, std::span<const cplx> a, std::span<const cplx> b,
                    std::span<cplx> z) {
  const int n = grid.n();
  const int big = grid.padded_n();
  const int band = grid.band_limit();
  const Index total = signed_size(z.size());
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < total; ++i) z[i] = cplx(0.0, 0.0);
  const bool pair = !b.empty();
#pragma omp parallel for schedule(static)
  for (Index i0 = 0; i0 < n; ++i0) {
    const int m0 = grid.mode(i0);
    if (std::abs(m0) > band) continue;
    for (int i1 = 0; i1 < n; ++i1) {
      const int m1 = grid.mode(i1);
      if (std::abs(m1) > band) continue;
      const std::size_t row = (padded_slot(m0, big) * big + padded_slot(m1, big)) * big;
      for (int i2 = 0; i2 < n; ++i2) {
        const int m2 = grid.mode(i2);
        if (std::abs(m2) > band) continue;
        const std::size_t src = grid.index(i0, i1, i2);
        const cplx v = pair ? cplx(a[src].real() - b[src].imag(), a[src].imag() + b[src].real())
                            : a[src];
        z[row + padded_slot(m2, big)] = v;
      }
    }
  }
}

void gather_padded_pair(const SpectralGrid& grid, std::span<const cplx> z, std::span<cplx> a,
                        std::span<cplx> b, double scale) {
  const int n = grid.n();
  const int big = grid.padded_n();
  const int band = grid.band_limit();
#pragma omp parallel for schedule(static)
  for (Index i0 = 0; i0 < n; ++i0) {
    const int m0 = grid.mode(i0);
    for (int i1 = 0; i1 < n; ++i1) {
      const int m1 = grid.mode(i1);
      for (int i2 = 0; i2 < n; ++i2) {
        const int m2 = grid.mode(i2);
        const std::size_t dst = grid.index(i0, i1, i2);
        if (std::abs(m0) > band || std::abs(m1) > band || std::abs(m2) > band) {
          a[dst] = 0.0;
          if (!b.empty()) b[dst] = 0.0;
          continue;
        }
        const cplx zp = z[(padded_slot(m0, big) * big + padded_slot(m1, big)) * big + padded_slot(m2, big)];
        const cplx zm =
            z[(padded_slot(-m0, big) * big + padded_slot(-m1, big)) * big + padded_slot(-m2, big)];
        const cplx s = zp + std::conj(zm);
        a[dst] = cplx(0.5 * s.real() * scale, 0.5 * s.imag() * scale);
        if (!b.empty()) {
          const cplx d = zp - std::conj(zm);
          b[dst] = cplx(0.5 * d.imag() * scale, -0.5 * d.real() * scale);
        }
      }
    }
  }
}

void gather_padded(const SpectralGrid& grid, std::span<const cplx> z, std::span<cplx> a, double scale) {
  const int n = grid.n();
  const int big = grid.padded_n();
  const int band = grid.band_limit();
#pragma omp parallel for schedule(static)
  for (Index i0 = 0; i0 < n; ++i0) {
    const int m0 = grid.mode(i0);
    for (int i1 = 0; i1 < n; ++i1) {
      const int m1 = grid.mode(i1);
      for (int i2 = 0; i2 < n; ++i2) {
        const int m2 = grid.mode(i2);
        const std::size_t dst = grid.index(i0, i1, i2);
        if (std::abs(m0) > band || std::abs(m1) > band || std::abs(m2) > band) {
          a[dst] = 0.0;
          continue;
        }
        a[dst] = z[(padded_slot(m0, big) * big + padded_slot(m1, big)) * big + padded_slot(m2, big)] * scale;
      }
    }
  }
}

void split_complex(std::span<const cplx> z, std::span<double> re, std::span<double> im) {
  const Index n = signed_size(z.size());
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) {
    re[i] = z[i].real();
    im[i] = z[i].imag();
  }
}

void combine_complex(std::span<const double> re, std::span<const double> im, std::span<cplx> z) {
  const Index n = signed_size(z.size());
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) z[i] = cplx(re[i], im.empty() ? 0.0 : im[i]);
}

}  // namespace visco::kernels
