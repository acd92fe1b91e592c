// Serial vs OpenMP kernel timings. Usage: bench_kernels [n] [repeats]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>

#include <omp.h>

#include "visco/dynamics.hpp"
#include "visco/kernels.hpp"
#include "visco/random_fields.hpp"

using namespace visco;

namespace {

double time_ms(int repeats, const std::function<void()>& fn) {
  fn();
  const auto t0 = std::chrono::steady_clock::now();
  for (int r = 0; r < repeats; ++r) fn();
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count() / repeats;
}

void row(const char* name, double serial, double parallel) {
  std::printf("%-22s %10.3f %10.3f %8.2fx\n", name, serial, parallel, serial / parallel);
}

}  // namespace

int main(int argc, char** argv) {
  const int n = argc > 1 ? std::atoi(argv[1]) : 32;
  const int repeats = argc > 2 ? std::atoi(argv[2]) : 20;
  const SpectralGrid g(n, 1.0, PadFactor{3, 2});
  Rng rng(7);
  const std::size_t M = g.padded_size();
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  RealVector a(M), b(M), out(M), w(g.size());
  for (std::size_t i = 0; i < M; ++i) {
    a[i] = uni(rng);
    b[i] = uni(rng);
  }
  for (std::size_t i = 0; i < g.size(); ++i) w[i] = g.wavenumber_sq(i);
  SpectralField f = random_field(g, Rank::vector, rng), h = random_field(g, Rank::vector, rng);
  CoeffVector z(M), za(g.size()), zb(g.size());

  std::printf("n = %d (padded %d), threads = %d, repeats = %d\n", n, g.padded_n(), omp_get_max_threads(), repeats);
  std::printf("%-22s %10s %10s %9s\n", "kernel", "serial ms", "omp ms", "speedup");
  row("multiply", time_ms(repeats, [&] { kernels::serial::multiply(a, b, out); }),
      time_ms(repeats, [&] { kernels::multiply(a, b, out); }));
  row("multiply_add", time_ms(repeats, [&] { kernels::serial::multiply_add(a, b, out); }),
      time_ms(repeats, [&] { kernels::multiply_add(a, b, out); }));
  volatile double sink = 0.0;
  row("max_abs", time_ms(repeats, [&] { sink = kernels::serial::max_abs(a); }),
      time_ms(repeats, [&] { sink = kernels::max_abs(a); }));
  row("weighted_inner", time_ms(repeats, [&] { sink = kernels::serial::weighted_inner(w, f.component(0), h.component(0)); }),
      time_ms(repeats, [&] { sink = kernels::weighted_inner(w, f.component(0), h.component(0)); }));
  row("leray_project",
      time_ms(repeats, [&] { kernels::serial::leray_project(g, f.component(0), f.component(1), f.component(2)); }),
      time_ms(repeats, [&] { kernels::leray_project(g, f.component(0), f.component(1), f.component(2)); }));
  row("scatter_padded", time_ms(repeats, [&] { kernels::serial::scatter_padded(g, f.component(0), f.component(1), z); }),
      time_ms(repeats, [&] { kernels::scatter_padded(g, f.component(0), f.component(1), z); }));
  row("gather_padded_pair", time_ms(repeats, [&] { kernels::serial::gather_padded_pair(g, z, za, zb, 1.0); }),
      time_ms(repeats, [&] { kernels::gather_padded_pair(g, z, za, zb, 1.0); }));

  FlowState s(0.1 * random_solenoidal(g, rng, n / 4), 0.1 * random_column_solenoidal(g, rng, n / 4), 0.0, 1.0);
  RhsEvaluator ev(g);
  SpectralField nu(g, Rank::vector), dE(g, Rank::tensor);
  const double rhs = time_ms(std::max(1, repeats / 10), [&] { ev.evaluate(s.u, s.E, nu, dE); });
  std::printf("%-22s %21.3f\n", "full rhs (omp)", rhs);
  (void)sink;
  return 0;
}
