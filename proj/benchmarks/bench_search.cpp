#include <benchmark/benchmark.h>

#include "fixtures.hpp"
#include "necred/oracle.hpp"
#include "necred/reduction.hpp"

using namespace necred;

static void BM_SearchButterfly(benchmark::State& state) {
  auto inst = fixtures::butterfly();
  SearchBudget budget;
  budget.n = 1;
  for (auto _ : state) {
    auto verdict = search_unicast(inst, budget, static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(verdict.feasible());
  }
}
BENCHMARK(BM_SearchButterfly)->Arg(1)->Arg(4);

static void BM_SearchBottleneckExhaustive(benchmark::State& state) {
  auto inst = fixtures::bottleneck();
  SearchBudget budget;
  budget.n = 1;
  for (auto _ : state) {
    auto verdict = search_unicast(inst, budget);
    benchmark::DoNotOptimize(verdict.infeasible());
  }
}
BENCHMARK(BM_SearchBottleneckExhaustive);

static void BM_NecEnumerationRelayGadget(benchmark::State& state) {
  auto reduced = reduce(fixtures::relay()).instance;
  SearchBudget budget;
  budget.n = 1;
  budget.max_codes = BigInt(1) << 21;
  NecSearchOptions options;
  options.allow_reduction_shortcut = false;
  options.jobs = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto verdict = search_nec(reduced, 1, budget, options);
    benchmark::DoNotOptimize(verdict.feasible());
  }
}
BENCHMARK(BM_NecEnumerationRelayGadget)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);
