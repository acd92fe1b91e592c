#pragma once

#include <filesystem>

#include "visco/field.hpp"

namespace visco {

// Field checkpoint, little-endian throughout:
//
//   offset  size  content
//   0       8     magic "VISCOCKP"
//   8       4     u32 format version (1)
//   12      4     u32 reserved, written as 0
//   16      4     u32 n
//   20      8     f64 box scale L
//   28      4     u32 pad factor numerator
//   32      4     u32 pad factor denominator
//   36      4     u32 rank (0 scalar, 1 vector, 2 tensor)
//   40      4     u32 component count (1, 3 or 9)
//   44      ...   component-major coefficients; within a component the n^3
//                 lattice in row-major FFT order; each coefficient is a pair
//                 of f64 (real, imaginary)
//
// Total size is 44 + 16 * components * n^3 bytes.

inline constexpr std::uint32_t kCheckpointVersion = 1;

void write_checkpoint(const std::filesystem::path& path, const SpectralField& field);
SpectralField read_checkpoint(const std::filesystem::path& path);

}  // namespace visco
