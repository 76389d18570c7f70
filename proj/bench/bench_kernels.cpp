// Serial reference vs OpenMP for the two Monte Carlo kernels.

#include <benchmark/benchmark.h>

#include "arcd/cd_estimation.hpp"
#include "arcd/wald_region.hpp"

namespace {

using namespace arcd;

const SeriesSample& series() {
  static const SeriesSample s = simulate(ARParams{Eigen::Vector2d(0.4, 0.2), 1.0}, 50, 11);
  return s;
}

void BM_CdfGrid(benchmark::State& state) {
  const auto exec = state.range(0) ? Exec::parallel : Exec::serial;
  const FitResult f = fit_ar(series(), 2);
  const ParamGrid2D g = default_window(f, 30);
  const Eigen::Vector2d obs(f.phi_hat[0], f.phi_hat[1]);
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate_cdf_grid(g, obs, 50, 1.0, 100, 7, exec).cdf.data());
  }
}
BENCHMARK(BM_CdfGrid)->Arg(0)->Arg(1)->ArgNames({"parallel"})->Unit(benchmark::kMillisecond);

void BM_WaldBootstrap(benchmark::State& state) {
  const auto exec = state.range(0) ? Exec::parallel : Exec::serial;
  const FitResult f = fit_ar(series(), 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bootstrap_wald(series(), f, 2000, 7, exec).q_sorted.data());
  }
}
BENCHMARK(BM_WaldBootstrap)->Arg(0)->Arg(1)->ArgNames({"parallel"})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
