#include "visco/spectral_ops.hpp"

#include <cmath>

#include "visco/errors.hpp"
#include "visco/fft.hpp"
#include "visco/kernels.hpp"

namespace visco {

namespace {

const cplx kI(0.0, 1.0);

template <class Weight>
RealVector mode_weights(const SpectralGrid& grid, Weight w) {
  RealVector out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) out[i] = w(grid.wavenumber_sq(i));
  return out;
}

double weighted_inner_all(const SpectralField& f, const SpectralField& g, const RealVector& w) {
  require_same_grid(f.grid(), g.grid(), "inner product");
  if (f.rank() != g.rank()) throw ArgumentError("inner product: rank mismatch");
  double total = 0.0;
  for (int c = 0; c < f.components(); ++c) total += kernels::weighted_inner(w, f.component(c), g.component(c));
  return total;
}

RealVector sobolev_weights(const SpectralGrid& grid, int s) {
  if (s < 0) throw ArgumentError("sobolev norm: order must be nonnegative");
  return mode_weights(grid, [s](double kk) {
    double acc = 0.0, term = 1.0;
    for (int j = 0; j <= s; ++j) {
      acc += term;
      term *= kk;
    }
    return acc;
  });
}

RealVector hdot_weights(const SpectralGrid& grid, double s) {
  if (s < 0.0) throw ArgumentError("homogeneous norm: order must be nonnegative");
  return mode_weights(grid, [s](double kk) { return kk == 0.0 ? (s == 0.0 ? 1.0 : 0.0) : std::pow(kk, s); });
}

}  // namespace

SpectralField gradient(const SpectralField& f) {
  const SpectralGrid& g = f.grid();
  if (f.rank() == Rank::tensor) throw ArgumentError("gradient: tensor input not supported");
  SpectralField out(g, f.rank() == Rank::scalar ? Rank::vector : Rank::tensor);
  const int rows = f.components();
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    if (!g.in_band(idx)) continue;
    const Vec3 k = g.wavenumber(idx);
    for (int i = 0; i < rows; ++i) {
      const cplx v = f.at(i, idx);
      for (int j = 0; j < 3; ++j) out.at(3 * i + j, idx) = kI * k[j] * v;
    }
  }
  return out;
}

SpectralField divergence(const SpectralField& f) {
  const SpectralGrid& g = f.grid();
  if (f.rank() == Rank::scalar) throw ArgumentError("divergence: scalar input");
  SpectralField out(g, f.rank() == Rank::vector ? Rank::scalar : Rank::vector);
  const int rows = f.rank() == Rank::vector ? 1 : 3;
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    if (!g.in_band(idx)) continue;
    const Vec3 k = g.wavenumber(idx);
    for (int i = 0; i < rows; ++i) {
      cplx s = 0.0;
      for (int j = 0; j < 3; ++j) s += k[j] * f.at(3 * i + j, idx);
      out.at(i, idx) = kI * s;
    }
  }
  return out;
}

SpectralField laplacian(const SpectralField& f) {
  const SpectralGrid& g = f.grid();
  SpectralField out(g, f.rank());
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    if (!g.in_band(idx)) continue;
    const double kk = g.wavenumber_sq(idx);
    for (int c = 0; c < f.components(); ++c) out.at(c, idx) = -kk * f.at(c, idx);
  }
  return out;
}

SpectralField transpose(const SpectralField& tensor) {
  require_rank(tensor, Rank::tensor, "transpose");
  SpectralField out(tensor.grid(), Rank::tensor);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      auto src = tensor.component(j, i);
      std::copy(src.begin(), src.end(), out.component(i, j).begin());
    }
  }
  return out;
}

SpectralField curl_rows(const SpectralField& tensor) {
  require_rank(tensor, Rank::tensor, "curl_rows");
  const SpectralGrid& g = tensor.grid();
  SpectralField out(g, Rank::tensor);
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    if (!g.in_band(idx)) continue;
    const Vec3 k = g.wavenumber(idx);
    for (int i = 0; i < 3; ++i) {
      const Vec3 re{tensor.at(3 * i, idx).real(), tensor.at(3 * i + 1, idx).real(), tensor.at(3 * i + 2, idx).real()};
      const Vec3 im{tensor.at(3 * i, idx).imag(), tensor.at(3 * i + 1, idx).imag(), tensor.at(3 * i + 2, idx).imag()};
      const Vec3 cr = cross(k, re);
      const Vec3 ci = cross(k, im);
      for (int m = 0; m < 3; ++m) out.at(3 * i + m, idx) = kI * cplx(cr[m], ci[m]);
    }
  }
  return out;
}

SpectralField dealiased_product(const SpectralField& a, const SpectralField& b) {
  require_same_grid(a.grid(), b.grid(), "dealiased_product");
  Rank rank;
  if (a.rank() == Rank::scalar) {
    rank = b.rank();
  } else if (b.rank() == Rank::scalar || a.rank() == b.rank()) {
    rank = a.rank();
  } else {
    throw ArgumentError("dealiased_product: incompatible ranks");
  }
  const SpectralGrid& g = a.grid();
  SpectralField out(g, rank);
  PaddedTransform xf(g);
  CoeffVector pa(g.padded_size()), pb(g.padded_size());
  for (int c = 0; c < out.components(); ++c) {
    xf.to_physical_complex(a.component(a.rank() == Rank::scalar ? 0 : c), pa);
    xf.to_physical_complex(b.component(b.rank() == Rank::scalar ? 0 : c), pb);
    for (std::size_t i = 0; i < pa.size(); ++i) pa[i] *= pb[i];
    xf.from_physical_complex(pa, out.component(c));
  }
  return out;
}

SpectralField leray_project(const SpectralField& v) {
  require_rank(v, Rank::vector, "leray_project");
  SpectralField out = v;
  kernels::leray_project(out.grid(), out.component(0), out.component(1), out.component(2));
  return out;
}

double divergence_defect(const SpectralField& v) {
  require_rank(v, Rank::vector, "divergence_defect");
  const SpectralGrid& g = v.grid();
  double worst = 0.0;
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    const Vec3 k = g.wavenumber(idx);
    const cplx d = k[0] * v.at(0, idx) + k[1] * v.at(1, idx) + k[2] * v.at(2, idx);
    worst = std::max(worst, std::abs(d));
  }
  return worst;
}

double l2_norm(const SpectralField& f) { return sobolev_norm(f, 0); }

double sobolev_norm(const SpectralField& f, int s) {
  return std::sqrt(std::max(0.0, weighted_inner_all(f, f, sobolev_weights(f.grid(), s))));
}

double hdot_norm(const SpectralField& f, double s) {
  return std::sqrt(std::max(0.0, weighted_inner_all(f, f, hdot_weights(f.grid(), s))));
}

double hdot_half_norm(const SpectralField& f) { return hdot_norm(f, 0.5); }

double inner_sobolev(const SpectralField& f, const SpectralField& g, int s) {
  return weighted_inner_all(f, g, sobolev_weights(f.grid(), s));
}

double inner_hdot(const SpectralField& f, const SpectralField& g, double s) {
  return weighted_inner_all(f, g, hdot_weights(f.grid(), s));
}

}  // namespace visco
