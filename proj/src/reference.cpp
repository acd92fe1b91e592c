#include "visco/reference.hpp"

#include <vector>

#include "visco/errors.hpp"
#include "visco/spectral_ops.hpp"

namespace visco::reference {

namespace {

// Scalar-component convolution: out[p + q] += a[p] b[q] for band p, q, p + q.
void convolve_component(const SpectralGrid& g, std::span<const cplx> a, std::span<const cplx> b,
                        std::span<cplx> out) {
  std::vector<std::size_t> band;
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    if (g.in_band(idx)) band.push_back(idx);
  }
  const int K = g.band_limit();
  for (std::size_t p : band) {
    if (a[p] == cplx(0.0)) continue;
    const Modes3 mp = g.modes(p);
    for (std::size_t q : band) {
      const Modes3 mq = g.modes(q);
      const Modes3 s{mp[0] + mq[0], mp[1] + mq[1], mp[2] + mq[2]};
      if (std::abs(s[0]) > K || std::abs(s[1]) > K || std::abs(s[2]) > K) continue;
      out[g.index_of_modes(s)] += a[p] * b[q];
    }
  }
}


}  // namespace

SpectralField direct_convolution(const SpectralField& a, const SpectralField& b) {
  require_same_grid(a.grid(), b.grid(), "direct_convolution");
  Rank rank;
  if (a.rank() == Rank::scalar) {
    rank = b.rank();
  } else if (b.rank() == Rank::scalar || a.rank() == b.rank()) {
    rank = a.rank();
  } else {
    throw ArgumentError("direct_convolution: incompatible ranks");
  }
  SpectralField out(a.grid(), rank);
  for (int c = 0; c < out.components(); ++c) {
    convolve_component(a.grid(), a.component(a.rank() == Rank::scalar ? 0 : c),
                       b.component(b.rank() == Rank::scalar ? 0 : c), out.component(c));
  }
  return out;
}

namespace {

SpectralField scalar_of(const SpectralField& f, int c) {
  SpectralField out(f.grid(), Rank::scalar);
  auto src = f.component(c);
  std::copy(src.begin(), src.end(), out.component(0).begin());
  return out;
}

void add_into(SpectralField& dst, int c, const SpectralField& scalar, double sign) {
  auto d = dst.component(c);
  auto s = scalar.component(0);
  for (std::size_t i = 0; i < d.size(); ++i) d[i] += sign * s[i];
}

}  // namespace

SpectralField momentum_rhs(const SpectralField& u, const SpectralField& E, double mu) {
  require_same_grid(u.grid(), E.grid(), "reference momentum_rhs");
  const SpectralGrid& g = u.grid();
  const SpectralField gu = gradient(u);
  SpectralField raw(g, Rank::vector);
  for (int i = 0; i < 3; ++i) {
    for (int k = 0; k < 3; ++k) {
      add_into(raw, i, direct_convolution(scalar_of(u, k), scalar_of(gu, 3 * i + k)), -1.0);
    }
  }
  SpectralField eet(g, Rank::tensor);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) {
        add_into(eet, 3 * i + j, direct_convolution(scalar_of(E, 3 * i + k), scalar_of(E, 3 * j + k)), 1.0);
      }
    }
  }
  raw += divergence(eet);
  raw += divergence(E);
  raw += divergence(transpose(E));
  SpectralField out = leray_project(raw);
  out.axpy(mu, laplacian(u));
  out.truncate_to_band();
  return out;
}

SpectralField deformation_rhs(const SpectralField& u, const SpectralField& E) {
  require_same_grid(u.grid(), E.grid(), "reference deformation_rhs");
  const SpectralGrid& g = u.grid();
  const SpectralField gu = gradient(u);
  SpectralField out(g, Rank::tensor);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const SpectralField gE = gradient(scalar_of(E, 3 * i + j));
      for (int k = 0; k < 3; ++k) {
        add_into(out, 3 * i + j, direct_convolution(scalar_of(u, k), scalar_of(gE, k)), -1.0);
        add_into(out, 3 * i + j, direct_convolution(scalar_of(gu, 3 * i + k), scalar_of(E, 3 * k + j)), 1.0);
      }
    }
  }
  out += gu;
  out.truncate_to_band();
  return out;
}

}  // namespace visco::reference

namespace visco::reference {

ModeState linear_mode_derivative(const Vec3& k, double mu, const ModeState& x) {
  const cplx I(0.0, 1.0);
  const double kk = norm_sq(k);
  ModeState d{};
  cplx f[3];
  for (int i = 0; i < 3; ++i) {
    f[i] = 0.0;
    for (int j = 0; j < 3; ++j) f[i] += I * k[j] * (x[3 + 3 * i + j] + x[3 + 3 * j + i]);
  }
  if (kk > 0.0) {
    const cplx kf = (k[0] * f[0] + k[1] * f[1] + k[2] * f[2]) / kk;
    for (int i = 0; i < 3; ++i) f[i] -= k[i] * kf;
  }
  for (int i = 0; i < 3; ++i) {
    d[i] = -mu * kk * x[i] + f[i];
    for (int j = 0; j < 3; ++j) d[3 + 3 * i + j] = I * k[j] * x[i];
  }
  return d;
}

ModeState propagate_linear_mode(const Vec3& k, double mu, const ModeState& x0, double t, int substeps) {
  if (substeps < 1) throw ArgumentError("propagate_linear_mode: substeps must be positive");
  const double h = t / substeps;
  auto add = [](const ModeState& a, double s, const ModeState& b) {
    ModeState r;
    for (int i = 0; i < 12; ++i) r[i] = a[i] + s * b[i];
    return r;
  };
  ModeState x = x0;
  for (int n = 0; n < substeps; ++n) {
    const ModeState k1 = linear_mode_derivative(k, mu, x);
    const ModeState k2 = linear_mode_derivative(k, mu, add(x, h / 2, k1));
    const ModeState k3 = linear_mode_derivative(k, mu, add(x, h / 2, k2));
    const ModeState k4 = linear_mode_derivative(k, mu, add(x, h, k3));
    for (int i = 0; i < 12; ++i) x[i] += h / 6 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return x;
}

}  // namespace visco::reference
