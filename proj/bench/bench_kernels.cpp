#include <benchmark/benchmark.h>

#include "mpqkd/kernels.hpp"

namespace {

mpqkd::OptimizationProblem grid_problem() {
  mpqkd::OptimizationProblem p;
  p.L_a = 100.0;
  p.delta = 10.0;
  p.lambda = mpqkd::PairingInterval(1000000);
  return p;
}

mpqkd::Scenario sim_scenario() {
  return mpqkd::Scenario::from_distances(20.0, 20.0, 0.5, 0.5, mpqkd::PairingInterval(100));
}

void BM_RateGridSerial(benchmark::State& state) {
  const auto p = grid_problem();
  for (auto _ : state) {
    benchmark::DoNotOptimize(mpqkd::kernels::rate_grid_serial(p, static_cast<int>(state.range(0))));
  }
}

void BM_RateGridParallel(benchmark::State& state) {
  const auto p = grid_problem();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        mpqkd::kernels::rate_grid_parallel(p, static_cast<int>(state.range(0))));
  }
}

void BM_RoundsSerial(benchmark::State& state) {
  const auto s = sim_scenario();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        mpqkd::kernels::simulate_rounds_serial(s, static_cast<std::uint64_t>(state.range(0)), 7));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_RoundsParallel(benchmark::State& state) {
  const auto s = sim_scenario();
  for (auto _ : state) {
    benchmark::DoNotOptimize(mpqkd::kernels::simulate_rounds_parallel(
        s, static_cast<std::uint64_t>(state.range(0)), 7));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_RateGridSerial)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RateGridParallel)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RoundsSerial)->Arg(1 << 20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RoundsParallel)->Arg(1 << 20)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
