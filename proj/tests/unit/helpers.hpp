#pragma once

#include <algorithm>
#include <cmath>

#include "visco/field.hpp"

namespace visco::testing {

inline double rel_diff(const SpectralField& a, const SpectralField& b) {
  double scale = 0.0;
  for (const auto& c : b.data()) scale = std::max(scale, std::abs(c));
  return a.max_abs_difference(b) / std::max(scale, 1e-300);
}

inline double max_coeff(const SpectralField& f) {
  double m = 0.0;
  for (const auto& c : f.data()) m = std::max(m, std::abs(c));
  return m;
}

}  // namespace visco::testing
