#pragma once

// Slow, obviously-correct evaluations used as oracles by the tests and by the
// verify suites. Nothing here touches an FFT.

#include <array>

#include "visco/field.hpp"

namespace visco::reference {

/// Direct double-sum convolution over band modes, truncated to the band.
/// Rank rules match dealiased_product.
SpectralField direct_convolution(const SpectralField& a, const SpectralField& b);

/// Leray projection of -u.grad u + mu lap u + div(E E^T) + div E + div E^T.
SpectralField momentum_rhs(const SpectralField& u, const SpectralField& E, double mu);
/// -u.grad E + (grad u) E + grad u.
SpectralField deformation_rhs(const SpectralField& u, const SpectralField& E);

/// One Fourier mode of the system linearized about zero: u (3) then E (9, row-major).
using ModeState = std::array<cplx, 12>;
/// u' = -mu |k|^2 u + P_k (i E k + i E^T k),  E' = i u k^T.
ModeState linear_mode_derivative(const Vec3& k, double mu, const ModeState& x);
/// Classical RK4 with `substeps` equal steps over [0, t].
ModeState propagate_linear_mode(const Vec3& k, double mu, const ModeState& x0, double t, int substeps);

}  // namespace visco::reference
