#include "visco/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "visco/errors.hpp"
#include "visco/kernels.hpp"

namespace visco {

namespace {

// FFTW planning is not thread-safe; executing an existing plan on new arrays is.
// Plans are estimated rather than measured so results are reproducible run to run.
struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

const PlanPair& plans_for(int size) {
  static std::map<int, PlanPair> cache;
  std::lock_guard<std::mutex> lock(plan_mutex());
  auto it = cache.find(size);
  if (it != cache.end()) return it->second;
  const std::size_t total = static_cast<std::size_t>(size) * size * size;
  CoeffVector probe(total);
  auto* p = reinterpret_cast<fftw_complex*>(probe.data());
  PlanPair plans;
  plans.forward = fftw_plan_dft_3d(size, size, size, p, p, FFTW_FORWARD, FFTW_ESTIMATE);
  plans.backward = fftw_plan_dft_3d(size, size, size, p, p, FFTW_BACKWARD, FFTW_ESTIMATE);
  if (plans.forward == nullptr || plans.backward == nullptr) {
    throw std::runtime_error("fftw planning failed");
  }
  return cache.emplace(size, plans).first->second;
}

void execute(fftw_plan plan, std::span<cplx> z) {
  auto* p = reinterpret_cast<fftw_complex*>(z.data());
  fftw_execute_dft(plan, p, p);
}

}  // namespace

SpectralField forward_transform(const SpectralGrid& grid, Rank rank, std::span<const cplx> samples) {
  SpectralField out(grid, rank);
  if (samples.size() != out.data().size()) {
    throw ArgumentError("forward_transform: sample count does not match grid and rank");
  }
  const PlanPair& plans = plans_for(grid.n());
  const double scale = 1.0 / static_cast<double>(grid.size());
  for (int c = 0; c < out.components(); ++c) {
    auto dst = out.component(c);
    std::copy_n(samples.begin() + c * grid.size(), grid.size(), dst.begin());
    execute(plans.forward, dst);
    for (auto& v : dst) v *= scale;
  }
  return out;
}

CoeffVector inverse_transform(const SpectralField& field) {
  const SpectralGrid& grid = field.grid();
  const PlanPair& plans = plans_for(grid.n());
  CoeffVector out(field.data().begin(), field.data().end());
  for (int c = 0; c < field.components(); ++c) {
    execute(plans.backward, std::span<cplx>(out).subspan(c * grid.size(), grid.size()));
  }
  return out;
}

double physical_l2_norm(const SpectralField& field) {
  const CoeffVector samples = inverse_transform(field);
  double s = 0.0;
  for (const cplx& v : samples) s += std::norm(v);
  return std::sqrt(s / static_cast<double>(field.grid().size()));
}

PaddedTransform::PaddedTransform(const SpectralGrid& grid)
    : grid_(grid), scratch_(grid.padded_size()) {
  plans_for(grid.padded_n());
}

void PaddedTransform::backward_in_place(std::span<cplx> z) { execute(plans_for(grid_.padded_n()).backward, z); }

void PaddedTransform::forward_in_place(std::span<cplx> z) { execute(plans_for(grid_.padded_n()).forward, z); }

void PaddedTransform::to_physical(std::span<const std::span<const cplx>> spectra,
                                  std::span<const std::span<double>> out) {
  if (spectra.size() != out.size()) throw ArgumentError("to_physical: size mismatch");
  for (std::size_t f = 0; f < spectra.size(); f += 2) {
    const bool pair = f + 1 < spectra.size();
    kernels::scatter_padded(grid_, spectra[f], pair ? spectra[f + 1] : std::span<const cplx>{}, scratch_);
    backward_in_place(scratch_);
    if (pair) {
      kernels::split_complex(scratch_, out[f], out[f + 1]);
    } else {
      const std::span<double> dst = out[f];
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = scratch_[i].real();
    }
  }
}

void PaddedTransform::to_physical(std::span<const cplx> spectrum, std::span<double> out) {
  const std::span<const cplx> in[1] = {spectrum};
  const std::span<double> dst[1] = {out};
  to_physical(in, dst);
}

void PaddedTransform::from_physical(std::span<const std::span<const double>> values,
                                    std::span<const std::span<cplx>> out) {
  if (values.size() != out.size()) throw ArgumentError("from_physical: size mismatch");
  const double scale = 1.0 / static_cast<double>(grid_.padded_size());
  for (std::size_t f = 0; f < values.size(); f += 2) {
    const bool pair = f + 1 < values.size();
    kernels::combine_complex(values[f], pair ? values[f + 1] : std::span<const double>{}, scratch_);
    forward_in_place(scratch_);
    kernels::gather_padded_pair(grid_, scratch_, out[f], pair ? out[f + 1] : std::span<cplx>{}, scale);
  }
}

void PaddedTransform::from_physical(std::span<const double> values, std::span<cplx> out) {
  const std::span<const double> in[1] = {values};
  const std::span<cplx> dst[1] = {out};
  from_physical(in, dst);
}

void PaddedTransform::to_physical_complex(std::span<const cplx> spectrum, std::span<cplx> out) {
  kernels::scatter_padded(grid_, spectrum, {}, out);
  backward_in_place(out);
}

void PaddedTransform::from_physical_complex(std::span<const cplx> values, std::span<cplx> out) {
  std::copy(values.begin(), values.end(), scratch_.begin());
  forward_in_place(scratch_);
  kernels::gather_padded(grid_, scratch_, out, 1.0 / static_cast<double>(grid_.padded_size()));
}

}  // namespace visco
