#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "visco/grid.hpp"

namespace visco {

using cplx = std::complex<double>;

/// Allocator backed by fftw_malloc so every buffer satisfies FFTW's SIMD alignment.
template <class T>
struct AlignedAllocator {
  using value_type = T;
  AlignedAllocator() = default;
  template <class U>
  AlignedAllocator(const AlignedAllocator<U>&) {}
  T* allocate(std::size_t count);
  void deallocate(T* p, std::size_t) noexcept;
  template <class U>
  bool operator==(const AlignedAllocator<U>&) const { return true; }
};

using CoeffVector = std::vector<cplx, AlignedAllocator<cplx>>;
using RealVector = std::vector<double, AlignedAllocator<double>>;

enum class Rank { scalar = 0, vector = 1, tensor = 2 };

constexpr int components_of(Rank r) {
  return r == Rank::scalar ? 1 : (r == Rank::vector ? 3 : 9);
}

/// Fourier coefficients of a scalar, vector, or 3x3 tensor field.
///
/// f(x) = sum_k coeff(k) exp(i k.x), so the L2 norm (volume-averaged) is the
/// root-sum-square of coefficient moduli. Components are stored one after
/// another; tensor component (i, j) is component 3*i + j.
class SpectralField {
 public:
  SpectralField(const SpectralGrid& grid, Rank rank);

  const SpectralGrid& grid() const { return grid_; }
  Rank rank() const { return rank_; }
  int components() const { return components_of(rank_); }

  std::span<cplx> component(int c);
  std::span<const cplx> component(int c) const;
  std::span<cplx> component(int i, int j) { return component(3 * i + j); }
  std::span<const cplx> component(int i, int j) const { return component(3 * i + j); }

  cplx& at(int c, std::size_t idx) { return data_[c * grid_.size() + idx]; }
  const cplx& at(int c, std::size_t idx) const { return data_[c * grid_.size() + idx]; }

  std::span<cplx> data() { return data_; }
  std::span<const cplx> data() const { return data_; }

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double s);
  SpectralField& operator*=(cplx s);
  SpectralField& axpy(double a, const SpectralField& x);

  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(double s, SpectralField a) { return a *= s; }

  void set_zero();
  bool is_zero() const;
  bool all_finite() const;

  /// Largest |coeff(-k) - conj(coeff(k))| over all modes and components.
  double hermitian_defect() const;
  /// Replace coefficients by (coeff(k) + conj(coeff(-k))) / 2, i.e. the real part of the field.
  void symmetrize();
  /// Zero every mode outside the resolved band (including the Nyquist planes).
  void truncate_to_band();

  double max_abs_difference(const SpectralField& other) const;

 private:
  SpectralGrid grid_;
  Rank rank_;
  CoeffVector data_;
};

void require_rank(const SpectralField& f, Rank r, const char* what);

}  // namespace visco
