#include <doctest.h>

#include <map>
#include <optional>

#include "fixtures.hpp"
#include "necred/evaluate.hpp"
#include "necred/oracle.hpp"
#include "necred/reduction.hpp"

using namespace necred;

namespace {

// Minimal independent enumerator for the 1-bit butterfly: walks the same
// canonical candidate order (eval-order edges, lexicographic tables, last
// digit fastest) and decides decodability per terminal by simulation. Used to
// cross-check the search engine's verdicts and first-witness index.
struct MiniButterfly {
  // eval order of the butterfly edges: e1..e7 (tails s1,s2 precede m1, m2).
  // e1,e2,e4,e5 read one message bit; e3 reads (e1,e2); e6,e7 read e3.
  std::optional<std::uint64_t> first_witness;
  std::uint64_t witness_count = 0;
  std::uint64_t xor_e3_witnesses = 0;

  MiniButterfly() {
    // Canonical edge order is (topo position of tail, declaration index):
    // e1, e4, e2, e5, e3, e6, e7. Table entry 0 is the most significant
    // digit, so the candidate bits read (MSB to LSB):
    // e1:2, e4:2, e2:2, e5:2, e3:4, e6:2, e7:2.
    for (std::uint64_t cand = 0; cand < (1u << 16); ++cand) {
      std::uint64_t d = cand;
      std::uint64_t e7t = d & 3;
      d >>= 2;
      std::uint64_t e6t = d & 3;
      d >>= 2;
      std::uint64_t e3t = d & 15;
      d >>= 4;
      std::uint64_t e5t = d & 3;
      d >>= 2;
      std::uint64_t e2t = d & 3;
      d >>= 2;
      std::uint64_t e4t = d & 3;
      d >>= 2;
      std::uint64_t e1t = d & 3;

      auto bit = [](std::uint64_t table, std::uint64_t idx) { return (table >> (1 - idx)) & 1; };
      auto bit4 = [](std::uint64_t table, std::uint64_t idx) { return (table >> (3 - idx)) & 1; };

      std::map<std::pair<std::uint64_t, std::uint64_t>, std::uint64_t> t1_obs, t2_obs;
      bool ok = true;
      for (std::uint64_t m = 0; m < 4 && ok; ++m) {
        const std::uint64_t m1 = m & 1, m2 = (m >> 1) & 1;
        const std::uint64_t v1 = bit(e1t, m1);
        const std::uint64_t v2 = bit(e2t, m2);
        const std::uint64_t v3 = bit4(e3t, v1 * 2 + v2);
        const std::uint64_t v4 = bit(e4t, m1);
        const std::uint64_t v5 = bit(e5t, m2);
        const std::uint64_t v6 = bit(e6t, v3);
        const std::uint64_t v7 = bit(e7t, v3);
        // t1 sees (e5, e6) and must output m1; t2 sees (e4, e7) -> m2.
        auto check = [&](auto& obs, std::uint64_t a, std::uint64_t b, std::uint64_t want) {
          auto [it, fresh] = obs.try_emplace({a, b}, want);
          if (!fresh && it->second != want) ok = false;
        };
        check(t1_obs, v5, v6, m1);
        check(t2_obs, v4, v7, m2);
      }
      if (ok) {
        if (!first_witness) first_witness = cand;
        ++witness_count;
        if (e3t == 0b0110) ++xor_e3_witnesses;
      }
    }
  }
};

}  // namespace

TEST_CASE("code space sizes") {
  CHECK(count_code_space(fixtures::relay(), 1) == 4);  // one binary edge, 1-bit input
  CHECK(count_code_space(fixtures::butterfly(), 1) == 65536);
  CHECK(count_code_space(fixtures::bottleneck(), 1) == 4096);  // the 2-input edge adds 16
  CHECK(count_code_space(fixtures::relay(), 2) == 256);        // 4^4
}

TEST_CASE("butterfly search agrees with the independent enumerator") {
  MiniButterfly mini;
  REQUIRE(mini.first_witness.has_value());
  CHECK(mini.witness_count == 128);
  CHECK(mini.xor_e3_witnesses > 0);  // some witness uses e3 = in1 XOR in2

  SearchBudget budget;
  budget.n = 1;
  auto verdict = search_unicast(fixtures::butterfly(), budget);
  REQUIRE(verdict.feasible());
  CHECK(verdict.space_size == 65536);
  CHECK(*verdict.witness_index == BigInt(*mini.first_witness));
  CHECK(check_unicast_zero_error(*verdict.witness, fixtures::butterfly()).ok());
}

TEST_CASE("bottleneck is infeasible at n=1") {
  SearchBudget budget;
  budget.n = 1;
  auto verdict = search_unicast(fixtures::bottleneck(), budget);
  CHECK(verdict.infeasible());
  CHECK(verdict.space_size == 4096);
}

TEST_CASE("single-edge relay finds the identity witness") {
  SearchBudget budget;
  budget.n = 1;
  auto verdict = search_unicast(fixtures::relay(), budget);
  REQUIRE(verdict.feasible());
  CHECK(*verdict.witness_index == 1);  // after the all-zero constant table
  CHECK(verdict.witness->edge_functions.at("r1").table == std::vector<std::uint64_t>{0, 1});
}

TEST_CASE("search verdicts and witnesses ignore the worker count") {
  SearchBudget budget;
  budget.n = 1;
  auto serial = search_unicast(fixtures::butterfly(), budget, 1);
  auto parallel = search_unicast(fixtures::butterfly(), budget, 4);
  REQUIRE(serial.feasible());
  REQUIRE(parallel.feasible());
  CHECK(*serial.witness_index == *parallel.witness_index);
  CHECK(*serial.witness == *parallel.witness);

  auto inf1 = search_unicast(fixtures::bottleneck(), budget, 1);
  auto inf3 = search_unicast(fixtures::bottleneck(), budget, 3);
  CHECK(inf1.kind == inf3.kind);
}

TEST_CASE("budget refusal reports the space size") {
  SearchBudget budget;
  budget.n = 1;
  budget.max_codes = 1000;
  auto verdict = search_unicast(fixtures::butterfly(), budget);
  CHECK(verdict.kind == SearchVerdict::Kind::exhausted);
  CHECK(verdict.space_size == 65536);
}

TEST_CASE("nec search by full enumeration matches the reduction shortcut") {
  auto reduced = reduce(fixtures::relay()).instance;
  CHECK(count_code_space(reduced, 1, 1) == BigInt(1) << 20);

  SearchBudget budget;
  budget.n = 1;
  budget.max_codes = BigInt(1) << 21;

  NecSearchOptions honest;
  honest.allow_reduction_shortcut = false;
  honest.jobs = 4;
  auto enumerated = search_nec(reduced, 1, budget, honest);
  REQUIRE(enumerated.feasible());
  CHECK(enumerated.strategy == "enumeration");
  CHECK(check_zero_error(*enumerated.witness, reduced).ok());

  honest.jobs = 1;
  auto serial = search_nec(reduced, 1, budget, honest);
  REQUIRE(serial.feasible());
  CHECK(*serial.witness_index == *enumerated.witness_index);
  CHECK(*serial.witness == *enumerated.witness);

  // The enumerated witness is a gadget code that was never produced by
  // lifting; extraction must still recover a working relay code from it.
  auto outcome = extract_code(*enumerated.witness, reduced);
  auto* extracted = std::get_if<ExtractResult>(&outcome);
  REQUIRE(extracted != nullptr);
  CHECK(check_unicast_zero_error(extracted->unicast_code, fixtures::relay()).ok());

  // Shrink the budget below the gadget space so the shortcut path engages.
  SearchBudget small = budget;
  small.max_codes = 1000;
  auto via_reduction = search_nec(reduced, 1, small);
  REQUIRE(via_reduction.feasible());
  CHECK(via_reduction.strategy == "via-reduction");
  CHECK(check_zero_error(*via_reduction.witness, reduced).ok());
}

TEST_CASE("searches parametrize over the block length") {
  SearchBudget budget;
  budget.n = 2;
  auto verdict = search_unicast(fixtures::relay(), budget);
  REQUIRE(verdict.feasible());
  CHECK(verdict.space_size == 256);  // 4^4 tables on a 2-bit edge
  CHECK(verdict.witness->n == 2);

  // At n=2 the gadget's combiner tables make enumeration hopeless (4^64
  // candidates each); the reduction strategy still decides it.
  auto reduced = reduce(fixtures::relay()).instance;
  auto nec = search_nec(reduced, 2, budget);
  REQUIRE(nec.feasible());
  CHECK(nec.strategy == "via-reduction");
  CHECK(check_zero_error(*nec.witness, reduced).ok());
}

TEST_CASE("a fully jammable cut is infeasible by enumeration") {
  NECInstance inst;
  inst.graph.nodes = {"s", "t"};
  inst.graph.edges = {{"e1", "s", "t", 1}};
  inst.source = "s";
  inst.terminal = "t";
  inst.adversary = {{"e1"}};
  SearchBudget budget;
  budget.n = 1;
  auto verdict = search_nec(inst, 1, budget);
  CHECK(verdict.infeasible());
  CHECK(verdict.strategy == "enumeration");
  CHECK(verdict.space_size == 4);
}

TEST_CASE("witness hints short-circuit the search") {
  auto uinst = fixtures::butterfly();
  auto reduced = reduce(uinst).instance;
  auto lifted = lift_code(fixtures::butterfly_xor_code(), uinst, reduced);
  REQUIRE(lifted.premise_ok);

  SearchBudget budget;
  budget.n = 1;
  NecSearchOptions options;
  options.witness_hint = &lifted.code;
  auto verdict = search_nec(reduced, 2, budget, options);
  REQUIRE(verdict.feasible());
  CHECK(verdict.strategy == "witness-hint");
  CHECK(*verdict.witness == lifted.code);
}

TEST_CASE("rejected hints fall through to other strategies") {
  auto uinst = fixtures::butterfly();
  auto reduced = reduce(uinst).instance;
  auto broken = lift_code(fixtures::butterfly_routing_code(), uinst, reduced).code;

  SearchBudget budget;
  budget.n = 1;
  NecSearchOptions options;
  options.witness_hint = &broken;
  auto verdict = search_nec(reduced, 2, budget, options);
  REQUIRE(verdict.feasible());
  CHECK(verdict.hint_rejected);
  CHECK(verdict.strategy == "via-reduction");
  CHECK(check_zero_error(*verdict.witness, reduced).ok());
}

TEST_CASE("reduced butterfly without the shortcut exhausts the budget") {
  auto reduced = reduce(fixtures::butterfly()).instance;
  SearchBudget budget;
  budget.n = 1;
  NecSearchOptions options;
  options.allow_reduction_shortcut = false;
  auto verdict = search_nec(reduced, 2, budget, options);
  CHECK(verdict.kind == SearchVerdict::Kind::exhausted);
  CHECK(verdict.space_size > budget.max_codes);
}

TEST_CASE("via-reduction infeasibility on the reduced bottleneck") {
  auto reduced = reduce(fixtures::bottleneck()).instance;
  SearchBudget budget;
  budget.n = 1;
  auto verdict = search_nec(reduced, 2, budget);
  CHECK(verdict.infeasible());
  CHECK(verdict.strategy == "via-reduction");
}

TEST_CASE("shortcut only applies at the gadget rate") {
  auto reduced = reduce(fixtures::bottleneck()).instance;
  SearchBudget budget;
  budget.n = 1;
  budget.max_codes = 1000;
  auto verdict = search_nec(reduced, 1, budget);  // rate 1 != k*n = 2
  CHECK(verdict.kind == SearchVerdict::Kind::exhausted);
}

TEST_CASE("corpus searches stay within their advertised spaces") {
  for (const auto& entry : fixtures::corpus()) {
    SearchBudget budget;
    budget.n = 1;
    auto verdict = search_unicast(entry.instance, budget);
    INFO(entry.name);
    CHECK(verdict.kind != SearchVerdict::Kind::exhausted);
    if (verdict.feasible())
      CHECK(check_unicast_zero_error(*verdict.witness, entry.instance).ok());
  }
}
