// Serial vs OpenMP timing for scenario batches.
//   bench_batch [scenarios=64] [horizon_s=20]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <vector>

#include <omp.h>

#include "freqstab/batch.hpp"

using namespace freqstab;

namespace {

std::vector<Scenario> make_batch(int count, double horizon) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Scenario> out;
  for (int i = 0; i < count; ++i) {
    Scenario s;
    s.params.base_power = 4000.0;
    s.params.inertia = 1.0 + 5.0 * u(rng);
    s.params.load_damping = 1.0 + 2.0 * u(rng);
    s.params.droop = 0.04 + 0.03 * u(rng);
    s.params.reheat_time = 5.0 + 5.0 * u(rng);
    s.params.conventional_capacity = 4000.0;
    s.params.initial_load = 4000.0;
    s.params.generator_pfr_fraction = 0.06;
    s.disturbance = StepDisturbance{100.0 + 500.0 * u(rng), 1.0};
    s.horizon = horizon;
    s.dt_step = 1e-3;
    s.options.saturation = false;
    s.options.new_energy_lag = 0.0;
    out.push_back(s);
  }
  return out;
}

template <class F>
double seconds(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

int main(int argc, char** argv) {
  const int count = argc > 1 ? std::atoi(argv[1]) : 64;
  const double horizon = argc > 2 ? std::atof(argv[2]) : 20.0;
  const auto batch = make_batch(count, horizon);

  std::vector<double> serial, parallel;
  const double ts = seconds([&] { serial = sfr_oracle_deviations_serial(batch); });
  const double tp = seconds([&] { parallel = sfr_oracle_deviations(batch); });

  bool same = serial == parallel;
  std::printf("scenarios %d, horizon %.1f s, threads %d\n", count, horizon,
              omp_get_max_threads());
  std::printf("serial    %8.3f s\n", ts);
  std::printf("parallel  %8.3f s  (speedup %.2fx)\n", tp, ts / tp);
  std::printf("results   %s\n", same ? "identical" : "DIFFER");
  return same ? 0 : 1;
}
