#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace visco {

using Vec3 = std::array<double, 3>;
using Index3 = std::array<std::size_t, 3>;
using Modes3 = std::array<int, 3>;

/// Zero-padding ratio used for alias-free quadratic products, kept as a rational.
struct PadFactor {
  int num = 2;
  int den = 1;

  double value() const { return static_cast<double>(num) / den; }
  friend bool operator==(const PadFactor&, const PadFactor&) = default;
};

/// Periodic cube of side 2*pi*L sampled with n modes per dimension.
///
/// Lattice indices follow FFT ordering: index i maps to the signed mode
/// m = i for i <= n/2 and m = i - n otherwise; the wavenumber is m / L.
/// The resolved band used by every derivative and product is |m_d| <= n/2 - 1
/// in each dimension; the Nyquist planes are kept only by plain transforms.
class SpectralGrid {
 public:
  SpectralGrid(int n, double box_scale, PadFactor pad = {});

  int n() const { return n_; }
  double box_scale() const { return box_scale_; }
  PadFactor pad() const { return pad_; }

  /// Modes per dimension of the padded physical grid (even, >= 3K + 1).
  int padded_n() const { return padded_n_; }
  /// Largest resolved |m| per dimension, K = n/2 - 1.
  int band_limit() const { return n_ / 2 - 1; }
  /// Largest resolved wavenumber per dimension, K / L.
  double band_wavenumber() const { return band_limit() / box_scale_; }

  std::size_t size() const { return static_cast<std::size_t>(n_) * n_ * n_; }
  std::size_t padded_size() const {
    return static_cast<std::size_t>(padded_n_) * padded_n_ * padded_n_;
  }

  int mode(std::size_t i) const { return mode_[i]; }
  double k1d(std::size_t i) const { return k1d_[i]; }

  Modes3 modes(std::size_t idx) const;
  Vec3 wavenumber(std::size_t idx) const;
  double wavenumber_sq(std::size_t idx) const;
  std::size_t index(std::size_t i0, std::size_t i1, std::size_t i2) const {
    return (i0 * n_ + i1) * n_ + i2;
  }
  /// Flat index of signed modes; each |m_d| must be <= n/2 (n/2 maps to the Nyquist index).
  std::size_t index_of_modes(const Modes3& m) const;
  /// Flat index of the mode -m (Nyquist indices map to themselves).
  std::size_t mirror(std::size_t idx) const;
  bool in_band(std::size_t idx) const;

  friend bool operator==(const SpectralGrid& a, const SpectralGrid& b) {
    return a.n_ == b.n_ && a.box_scale_ == b.box_scale_ && a.pad_ == b.pad_;
  }

 private:
  int n_;
  double box_scale_;
  PadFactor pad_;
  int padded_n_;
  std::vector<int> mode_;
  std::vector<double> k1d_;
};

/// Signed wavenumber triple of a lattice index; throws ArgumentError when out of range.
Vec3 wavenumber_of(const Index3& index, const SpectralGrid& grid);

void require_same_grid(const SpectralGrid& a, const SpectralGrid& b, const char* what);

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm_sq(const Vec3& a) { return dot(a, a); }
Vec3 cross(const Vec3& a, const Vec3& b);

}  // namespace visco
