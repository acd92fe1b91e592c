#pragma once

#include <utility>

#include "visco/field.hpp"
#include "visco/grid.hpp"

namespace visco {

/// Double cone of wavenumbers within half_angle of the line through axis.
///
/// Real fields have Hermitian-symmetric spectra, so support in a single cone
/// is impossible for them; containment is tested against the cone and its
/// mirror image together.
class Cone {
 public:
  Cone(const Vec3& axis, double half_angle);

  const Vec3& axis() const { return axis_; }
  double half_angle() const { return half_angle_; }

 private:
  Vec3 axis_;
  double half_angle_;
};

/// Angle between the line through xi and the axis, in [0, pi/2]. Throws for xi = 0.
double cone_angle(const Vec3& xi, const Cone& cone);
/// cone_angle(xi) <= half angle (with a 1e-12 rad allowance for lattice points on the
/// boundary); the zero vector counts as contained.
bool cone_contains(const Vec3& xi, const Cone& cone);

/// Fraction of spectral energy on modes outside the cone; the zero mode always counts
/// as outside. Zero for the zero field.
double cone_leakage(const SpectralField& f, const Cone& cone);

/// Orthogonal split of eta along w: a = (eta.w/|w|^2) w, b = eta - a.
struct EtaSplit {
  Vec3 a;
  Vec3 b;
};
EtaSplit split_eta(const Vec3& eta, const Vec3& w);

/// Angle between two nonzero vectors in [0, pi].
double angle_between(const Vec3& a, const Vec3& b);

}  // namespace visco
