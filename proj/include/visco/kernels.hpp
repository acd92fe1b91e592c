#pragma once

// Data-parallel inner loops. The functions in visco::kernels use OpenMP; the
// ones in visco::kernels::serial are plain loops with identical contracts and
// are kept as the reference the parallel versions are tested and benchmarked
// against.
//
// Reductions split their input into fixed-size chunks independent of the
// thread count and add the partial sums in chunk order, so results do not
// depend on how many threads ran.

#include <cstddef>
#include <span>

#include "visco/field.hpp"
#include "visco/grid.hpp"

namespace visco::kernels {

inline constexpr std::size_t kReductionChunk = 4096;

/// out = a * b
void multiply(std::span<const double> a, std::span<const double> b, std::span<double> out);
/// out += sign * a * b
void multiply_add(std::span<const double> a, std::span<const double> b, std::span<double> out,
                  double sign = 1.0);
/// sum_i w_i * Re(f_i * conj(g_i))
double weighted_inner(std::span<const double> w, std::span<const cplx> f, std::span<const cplx> g);
double max_abs(std::span<const double> a);

/// In-place Leray projection v - k (k.v) / |k|^2 per mode; the zero mode is left unchanged.
void leray_project(const SpectralGrid& grid, std::span<cplx> v0, std::span<cplx> v1,
                   std::span<cplx> v2);

/// Zero z (padded size) and write a + i*b into the padded slots of every band mode.
/// b may be empty.
void scatter_padded(const SpectralGrid& grid, std::span<const cplx> a, std::span<const cplx> b,
                    std::span<cplx> z);
/// Inverse of scatter_padded for Hermitian a and b: a = (z(k) + conj z(-k)) / 2 * scale,
/// b = (z(k) - conj z(-k)) / (2i) * scale on band modes, zero elsewhere.
void gather_padded_pair(const SpectralGrid& grid, std::span<const cplx> z, std::span<cplx> a,
                        std::span<cplx> b, double scale);
/// Plain gather of band modes (complex fields): a(k) = z(k) * scale.
void gather_padded(const SpectralGrid& grid, std::span<const cplx> z, std::span<cplx> a,
                   double scale);

void split_complex(std::span<const cplx> z, std::span<double> re, std::span<double> im);
void combine_complex(std::span<const double> re, std::span<const double> im, std::span<cplx> z);

}  // namespace visco::kernels

namespace visco::kernels::serial {

void multiply(std::span<const double> a, std::span<const double> b, std::span<double> out);
void multiply_add(std::span<const double> a, std::span<const double> b, std::span<double> out,
                  double sign = 1.0);
double weighted_inner(std::span<const double> w, std::span<const cplx> f, std::span<const cplx> g);
double max_abs(std::span<const double> a);
void leray_project(const SpectralGrid& grid, std::span<cplx> v0, std::span<cplx> v1,
                   std::span<cplx> v2);
void scatter_padded(const SpectralGrid& grid, std::span<const cplx> a, std::span<const cplx> b,
                    std::span<cplx> z);
void gather_padded_pair(const SpectralGrid& grid, std::span<const cplx> z, std::span<cplx> a,
                        std::span<cplx> b, double scale);

}  // namespace visco::kernels::serial
