#pragma once

// Seeded random band-limited real fields for property checks.

#include <random>

#include "visco/cone.hpp"
#include "visco/field.hpp"

namespace visco {

using Rng = std::mt19937_64;

/// Gaussian coefficients on modes with max_d |m_d| <= radius (radius < 0: the whole band),
/// made Hermitian so the field is real. The zero mode is left at 0.
SpectralField random_field(const SpectralGrid& grid, Rank rank, Rng& rng, int radius = -1);
/// Leray-projected random vector field.
SpectralField random_solenoidal(const SpectralGrid& grid, Rng& rng, int radius = -1);
/// Random tensor with every column divergence-free, i.e. div E^T = 0.
SpectralField random_column_solenoidal(const SpectralGrid& grid, Rng& rng, int radius = -1);
/// Copy of f with every mode outside the double cone (and the zero mode) removed.
SpectralField restrict_to_cone(const SpectralField& f, const Cone& cone);
/// Uniformly distributed unit vector.
Vec3 random_unit_vector(Rng& rng);

}  // namespace visco
