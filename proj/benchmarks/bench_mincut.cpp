#include <benchmark/benchmark.h>

#include "fixtures.hpp"
#include "necred/graph.hpp"
#include "necred/reduction.hpp"

using namespace necred;

static void BM_MinCutReducedButterfly(benchmark::State& state) {
  auto reduced = reduce(fixtures::butterfly()).instance;
  for (auto _ : state) {
    auto cut = min_cut(reduced.graph, reduced.source, reduced.terminal);
    benchmark::DoNotOptimize(cut.value);
  }
}
BENCHMARK(BM_MinCutReducedButterfly);

static void BM_UnicastCutCheckCorpus(benchmark::State& state) {
  auto corpus = fixtures::corpus();
  for (auto _ : state) {
    long long total = 0;
    for (const auto& entry : corpus)
      for (long long v : unicast_cut_check(entry.instance)) total += v;
    benchmark::DoNotOptimize(total);
  }
}
BENCHMARK(BM_UnicastCutCheckCorpus);

static void BM_Reduce(benchmark::State& state) {
  auto inst = fixtures::butterfly();
  for (auto _ : state) {
    auto result = reduce(inst);
    benchmark::DoNotOptimize(result.instance.graph.edges.size());
  }
}
BENCHMARK(BM_Reduce);
