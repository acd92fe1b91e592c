#include "visco/field.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <new>
#include <string>

#include "visco/errors.hpp"

namespace visco {

template <class T>
T* AlignedAllocator<T>::allocate(std::size_t count) {
  void* p = fftw_malloc(count * sizeof(T));
  if (p == nullptr && count != 0) throw std::bad_alloc();
  return static_cast<T*>(p);
}

template <class T>
void AlignedAllocator<T>::deallocate(T* p, std::size_t) noexcept {
  fftw_free(p);
}

template struct AlignedAllocator<cplx>;
template struct AlignedAllocator<double>;

SpectralField::SpectralField(const SpectralGrid& grid, Rank rank)
    : grid_(grid), rank_(rank), data_(grid.size() * components_of(rank), cplx(0.0, 0.0)) {}

std::span<cplx> SpectralField::component(int c) {
  return std::span<cplx>(data_).subspan(c * grid_.size(), grid_.size());
}

std::span<const cplx> SpectralField::component(int c) const {
  return std::span<const cplx>(data_).subspan(c * grid_.size(), grid_.size());
}

namespace {
void require_compatible(const SpectralField& a, const SpectralField& b, const char* what) {
  require_same_grid(a.grid(), b.grid(), what);
  if (a.rank() != b.rank()) throw ArgumentError(std::string(what) + ": rank mismatch");
}
}  // namespace

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  require_compatible(*this, other, "field +=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  require_compatible(*this, other, "field -=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  for (auto& c : data_) c *= s;
  return *this;
}

SpectralField& SpectralField::operator*=(cplx s) {
  for (auto& c : data_) c *= s;
  return *this;
}

SpectralField& SpectralField::axpy(double a, const SpectralField& x) {
  require_compatible(*this, x, "field axpy");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += a * x.data_[i];
  return *this;
}

void SpectralField::set_zero() { std::fill(data_.begin(), data_.end(), cplx(0.0, 0.0)); }

bool SpectralField::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const cplx& c) { return c == cplx(0.0, 0.0); });
}

bool SpectralField::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](const cplx& c) {
    return std::isfinite(c.real()) && std::isfinite(c.imag());
  });
}

double SpectralField::hermitian_defect() const {
  double worst = 0.0;
  const std::size_t n = grid_.size();
  std::vector<std::size_t> mirror(n);
  for (std::size_t i = 0; i < n; ++i) mirror[i] = grid_.mirror(i);
  for (int c = 0; c < components(); ++c) {
    auto f = component(c);
    for (std::size_t i = 0; i < n; ++i) {
      worst = std::max(worst, std::abs(f[mirror[i]] - std::conj(f[i])));
    }
  }
  return worst;
}

void SpectralField::symmetrize() {
  const std::size_t n = grid_.size();
  std::vector<std::size_t> mirror(n);
  for (std::size_t i = 0; i < n; ++i) mirror[i] = grid_.mirror(i);
  for (int c = 0; c < components(); ++c) {
    auto f = component(c);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = mirror[i];
      if (j < i) continue;
      if (j == i) {
        f[i] = cplx(f[i].real(), 0.0);
        continue;
      }
      const cplx s = 0.5 * (f[i] + std::conj(f[j]));
      f[i] = s;
      f[j] = std::conj(s);
    }
  }
}

void SpectralField::truncate_to_band() {
  const std::size_t n = grid_.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (grid_.in_band(i)) continue;
    for (int c = 0; c < components(); ++c) at(c, i) = 0.0;
  }
}

double SpectralField::max_abs_difference(const SpectralField& other) const {
  require_compatible(*this, other, "max_abs_difference");
  double worst = 0.0;
  for (std::size_t i = 0; i < data_.size(); ++i) worst = std::max(worst, std::abs(data_[i] - other.data_[i]));
  return worst;
}

void require_rank(const SpectralField& f, Rank r, const char* what) {
  if (f.rank() != r) throw ArgumentError(std::string(what) + ": unexpected field rank");
}

}  // namespace visco
