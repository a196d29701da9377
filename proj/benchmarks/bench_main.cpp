#include <benchmark/benchmark.h>

#include "multitree/experiments.hpp"
#include "multitree/metrics.hpp"
#include "multitree/sim.hpp"

using namespace multitree;

namespace {

SimConfig tight_config(std::uint32_t n, DepthMode mode) {
  SimConfig cfg;
  cfg.nodes = n;
  cfg.colors = 2;
  cfg.need = 2;
  cfg.profile = DegreeProfile::tight();
  cfg.mode = mode;
  cfg.seed = 7;
  return cfg;
}

void BM_OnSampleDistributed(benchmark::State& state) {
  auto n = static_cast<std::uint32_t>(state.range(0));
  SimConfig cfg = tight_config(n, DepthMode::kDistributed);
  Simulation sim(cfg);
  for (auto _ : state) benchmark::DoNotOptimize(sim.step());
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_OnSampleDistributed)->Arg(1000)->Arg(10000);

void BM_OnSampleInstantaneous(benchmark::State& state) {
  auto n = static_cast<std::uint32_t>(state.range(0));
  SimConfig cfg = tight_config(n, DepthMode::kInstantaneous);
  Simulation sim(cfg);
  for (auto _ : state) benchmark::DoNotOptimize(sim.step());
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_OnSampleInstantaneous)->Arg(200)->Arg(1000);

void BM_MeasureSnapshot(benchmark::State& state) {
  auto n = static_cast<std::uint32_t>(state.range(0));
  SimConfig cfg = tight_config(n, DepthMode::kDistributed);
  cfg.horizon = 20;
  Simulation sim(cfg);
  sim.run();
  for (auto _ : state) benchmark::DoNotOptimize(measure(sim.state(), 0.0));
}
BENCHMARK(BM_MeasureSnapshot)->Arg(1000);

void BM_ConvergenceProbe(benchmark::State& state) {
  auto n = static_cast<std::uint32_t>(state.range(0));
  SimConfig cfg = tight_config(n, DepthMode::kInstantaneous);
  cfg.horizon = 300;
  Simulation sim(cfg);
  sim.run();
  for (auto _ : state)
    benchmark::DoNotOptimize(is_converged(sim.state(), DepthMode::kInstantaneous));
}
BENCHMARK(BM_ConvergenceProbe)->Arg(100);

void BM_SettleTrial(benchmark::State& state) {
  BoundConfig cfg;
  cfg.nodes = static_cast<std::uint32_t>(state.range(0));
  cfg.trials = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_bound(cfg));
    ++cfg.seed;  // fresh trial each iteration
  }
}
BENCHMARK(BM_SettleTrial)->Arg(256)->Arg(1024);

}  // namespace

BENCHMARK_MAIN();
