#pragma once

#include "visco/field.hpp"

namespace visco {

// Differential operators are Fourier multipliers; every output is zero
// outside the resolved band. Index conventions: [grad u]_ij = d_j u_i,
// [div F]_i = sum_j d_j F_ij.

/// scalar -> vector, vector -> tensor.
SpectralField gradient(const SpectralField& f);
/// vector -> scalar, tensor -> vector (row divergence).
SpectralField divergence(const SpectralField& f);
SpectralField laplacian(const SpectralField& f);
SpectralField transpose(const SpectralField& tensor);
/// Row-wise curl of a tensor: [curl E]_im = eps_mkj d_k E_ij.
SpectralField curl_rows(const SpectralField& tensor);

/// Exact discrete convolution of the band-limited coefficient sets, truncated to the band.
/// Either operand may be scalar (broadcast); otherwise ranks must match and the product is
/// taken component by component.
SpectralField dealiased_product(const SpectralField& a, const SpectralField& b);

/// v(k) - k (k.v(k)) / |k|^2 per mode; the zero mode passes through.
SpectralField leray_project(const SpectralField& v);
/// max over modes of |k.v(k)|.
double divergence_defect(const SpectralField& v);

double l2_norm(const SpectralField& f);
/// Full Sobolev norm with multiplier sum_{j<=s} |k|^{2j}.
double sobolev_norm(const SpectralField& f, int s);
/// Homogeneous norm with multiplier |k|^{2s}.
double hdot_norm(const SpectralField& f, double s);
double hdot_half_norm(const SpectralField& f);

/// sum_k (sum_{j<=s} |k|^{2j}) Re(f(k) conj g(k)), summed over components.
double inner_sobolev(const SpectralField& f, const SpectralField& g, int s);
/// sum_k |k|^{2s} Re(f(k) conj g(k)), summed over components.
double inner_hdot(const SpectralField& f, const SpectralField& g, double s);

}  // namespace visco
