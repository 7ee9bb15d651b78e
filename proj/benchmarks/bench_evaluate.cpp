#include <benchmark/benchmark.h>

#include "fixtures.hpp"
#include "necred/adversary.hpp"
#include "necred/evaluate.hpp"
#include "necred/reduction.hpp"

using namespace necred;

namespace {

struct Lifted {
  NECInstance reduced;
  NetworkCode code;
  explicit Lifted(int n) {
    auto uinst = fixtures::butterfly();
    auto r = reduce(uinst);
    reduced = r.instance;
    code = lift_code(fixtures::butterfly_xor_code(n), uinst, reduced).code;
  }
};

}  // namespace

static void BM_ZeroErrorCheck(benchmark::State& state) {
  Lifted fx(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto result = check_zero_error(fx.code, fx.reduced);
    benchmark::DoNotOptimize(result.ok());
  }
}
BENCHMARK(BM_ZeroErrorCheck)->Arg(1)->Arg(2)->Arg(3);

static void BM_PatternEnumeration(benchmark::State& state) {
  Lifted fx(static_cast<int>(state.range(0)));
  PatternEnumerator pats(fx.reduced, fx.code.n);
  for (auto _ : state) {
    std::uint64_t sum = 0;
    auto cur = pats.cursor();
    while (cur.next()) sum += cur.values().size();
    benchmark::DoNotOptimize(sum);
  }
}
BENCHMARK(BM_PatternEnumeration)->Arg(1)->Arg(4);

static void BM_SingleEvaluation(benchmark::State& state) {
  Lifted fx(2);
  auto shape = CodeShape::for_nec(fx.code, fx.reduced);
  CompiledCode cc(shape);
  const std::vector<std::uint64_t> no_error;
  std::uint64_t m = 0;
  for (auto _ : state) {
    cc.run({m++ & 15}, no_error);
    benchmark::DoNotOptimize(cc.decoded()[0]);
  }
}
BENCHMARK(BM_SingleEvaluation);

static void BM_Classify(benchmark::State& state) {
  Lifted fx(2);
  for (auto _ : state) {
    auto prob = empirical_error_prob(fx.code, fx.reduced);
    benchmark::DoNotOptimize(prob);
  }
}
BENCHMARK(BM_Classify);
