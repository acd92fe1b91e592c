#pragma once

#include <span>
#include <vector>

#include "visco/field.hpp"
#include "visco/grid.hpp"

namespace visco {

/// Forward transform of physical samples on the native n^3 collocation grid
/// (point i sits at x = 2*pi*L*i/n), one block of n^3 samples per component.
SpectralField forward_transform(const SpectralGrid& grid, Rank rank, std::span<const cplx> samples);

/// Physical samples on the native n^3 grid; one block of n^3 values per component.
CoeffVector inverse_transform(const SpectralField& field);

/// Physical-space L2 norm (root-mean-square over the collocation grid, all components).
double physical_l2_norm(const SpectralField& field);

/// Transforms between band-limited spectra and the zero-padded physical grid.
///
/// Real fields are transformed two at a time by packing a + i*b into one
/// complex transform. Products formed pointwise on the padded grid and
/// brought back with from_physical are exact convolutions truncated to the
/// band. Not thread-safe: each thread needs its own instance.
class PaddedTransform {
 public:
  explicit PaddedTransform(const SpectralGrid& grid);

  const SpectralGrid& grid() const { return grid_; }
  std::size_t padded_size() const { return grid_.padded_size(); }

  /// Hermitian spectra to real padded-grid values; spectra and outputs are paired up internally.
  void to_physical(std::span<const std::span<const cplx>> spectra, std::span<const std::span<double>> out);
  void to_physical(std::span<const cplx> spectrum, std::span<double> out);

  /// Real padded-grid values to band-limited Hermitian spectra.
  void from_physical(std::span<const std::span<const double>> values, std::span<const std::span<cplx>> out);
  void from_physical(std::span<const double> values, std::span<cplx> out);

  /// General complex spectra (no Hermitian symmetry assumed).
  void to_physical_complex(std::span<const cplx> spectrum, std::span<cplx> out);
  void from_physical_complex(std::span<const cplx> values, std::span<cplx> out);

 private:
  void backward_in_place(std::span<cplx> z);
  void forward_in_place(std::span<cplx> z);

  SpectralGrid grid_;
  CoeffVector scratch_;
};

}  // namespace visco
