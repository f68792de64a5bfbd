#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "spinepr/ode.hpp"
#include "spinepr/rng.hpp"

namespace {

void bm_philox_u64(benchmark::State& state) {
  spinepr::Philox4x64 gen(42);
  for (auto _ : state) benchmark::DoNotOptimize(gen.next_u64());
}
BENCHMARK(bm_philox_u64);

void bm_philox_normal_pair(benchmark::State& state) {
  spinepr::Philox4x64 gen(42);
  double z0, z1;
  for (auto _ : state) {
    gen.next_normal_pair(z0, z1);
    benchmark::DoNotOptimize(z0);
  }
}
BENCHMARK(bm_philox_normal_pair);

void bm_ode_oscillator(benchmark::State& state) {
  auto rhs = [](double, const Eigen::Vector2d& y) -> Eigen::Vector2d { return {y[1], -y[0]}; };
  Eigen::Vector2d y0{1.0, 0.0};
  const double grid[] = {10.0};
  for (auto _ : state) {
    double out = 0;
    spinepr::integrate_grid(rhs, y0, 0.0, grid, 1,
                            [&](std::size_t, const Eigen::Vector2d& y) { out = y[0]; });
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(bm_ode_oscillator);

}  // namespace

BENCHMARK_MAIN();
