#include "visco/cone.hpp"

#include <cmath>
#include <numbers>

#include "visco/errors.hpp"

namespace visco {

namespace {
constexpr double kBoundaryAllowance = 1e-12;
}

Cone::Cone(const Vec3& axis, double half_angle) : half_angle_(half_angle) {
  const double len = std::sqrt(norm_sq(axis));
  if (!(len > 0.0) || !std::isfinite(len)) throw ArgumentError("cone: axis must be a nonzero vector");
  if (!(half_angle > 0.0) || half_angle > std::numbers::pi / 2) {
    throw ArgumentError("cone: half angle must lie in (0, pi/2]");
  }
  axis_ = {axis[0] / len, axis[1] / len, axis[2] / len};
}

double cone_angle(const Vec3& xi, const Cone& cone) {
  if (norm_sq(xi) == 0.0) throw ArgumentError("cone_angle: zero wavevector");
  const double along = std::abs(dot(xi, cone.axis()));
  const double across = std::sqrt(norm_sq(cross(xi, cone.axis())));
  return std::atan2(across, along);
}

bool cone_contains(const Vec3& xi, const Cone& cone) {
  if (norm_sq(xi) == 0.0) return true;
  return cone_angle(xi, cone) <= cone.half_angle() + kBoundaryAllowance;
}

double cone_leakage(const SpectralField& f, const Cone& cone) {
  const SpectralGrid& g = f.grid();
  double outside = 0.0, total = 0.0;
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    double e = 0.0;
    for (int c = 0; c < f.components(); ++c) e += std::norm(f.at(c, idx));
    if (e == 0.0) continue;
    total += e;
    const Vec3 k = g.wavenumber(idx);
    if (norm_sq(k) == 0.0 || !cone_contains(k, cone)) outside += e;
  }
  return total > 0.0 ? outside / total : 0.0;
}

EtaSplit split_eta(const Vec3& eta, const Vec3& w) {
  const double ww = norm_sq(w);
  if (ww == 0.0) throw ArgumentError("split_eta: w must be nonzero");
  const double c = dot(eta, w) / ww;
  EtaSplit s;
  for (int d = 0; d < 3; ++d) {
    s.a[d] = c * w[d];
    s.b[d] = eta[d] - s.a[d];
  }
  return s;
}

double angle_between(const Vec3& a, const Vec3& b) {
  if (norm_sq(a) == 0.0 || norm_sq(b) == 0.0) throw ArgumentError("angle_between: zero vector");
  return std::atan2(std::sqrt(norm_sq(cross(a, b))), dot(a, b));
}

}  // namespace visco
