// Times the OpenMP dataset kernels against the serial reference on synthetic
// poisoning data and reports the agreement between the two paths.

#include <chrono>
#include <cmath>
#include <cstdio>

#include "accmm/poisoning.hpp"
#include "accmm/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

double rel_diff(double a, double b) {
  const double scale = std::max({std::fabs(a), std::fabs(b), 1.0});
  return std::fabs(a - b) / scale;
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads = %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP disabled (serial chunked path)\n");
#endif
  std::printf("%-10s %-6s %12s %12s %8s %10s\n", "n", "d", "serial ms", "chunked ms", "speedup",
              "rel diff");

  for (const int n : {10000, 100000, 400000}) {
    const int d = 100;
    const int reps = n <= 10000 ? 50 : 10;
    accmm::RngStream rng(7, "data-gen");
    const accmm::PoisonDataset ds = accmm::gen_poisoning_data(n, d, rng, 0.15);

    accmm::Vec x(static_cast<std::size_t>(d), 0.3);
    accmm::Vec y(static_cast<std::size_t>(d), 0.02);

    double v_serial = 0.0, v_chunked = 0.0;
    auto t0 = Clock::now();
    for (int r = 0; r < reps; ++r) {
      v_serial = accmm::ref::poisoning_full_value(ds, x, y);
      auto g = accmm::ref::poisoning_full_grads(ds, x, y);
      v_serial += g.gy[0];
    }
    const double serial_ms = ms_since(t0) / reps;

    t0 = Clock::now();
    for (int r = 0; r < reps; ++r) {
      v_chunked = accmm::poisoning_full_value(ds, x, y);
      auto g = accmm::poisoning_full_grads(ds, x, y);
      v_chunked += g.gy[0];
    }
    const double chunked_ms = ms_since(t0) / reps;

    std::printf("%-10d %-6d %12.3f %12.3f %8.2fx %10.2e\n", n, d, serial_ms, chunked_ms,
                serial_ms / chunked_ms, rel_diff(v_serial, v_chunked));
  }
  return 0;
}
