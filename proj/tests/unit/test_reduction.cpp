#include <doctest.h>

#include <set>

#include "fixtures.hpp"
#include "necred/evaluate.hpp"
#include "necred/oracle.hpp"
#include "necred/reduction.hpp"

using namespace necred;

TEST_CASE("reduce(butterfly) matches the gadget arithmetic") {
  auto result = reduce(fixtures::butterfly());
  const auto& inst = result.instance;
  CHECK(inst.graph.nodes.size() == 12);   // 6 + 2 + 2k
  CHECK(inst.graph.edges.size() == 19);   // 7 + 6k
  CHECK(inst.adversary.size() == 15);     // 7 + 4k
  CHECK(validate_instance(inst).ok());
  CHECK(reduced_instance_diagnostics(inst).empty());

  // Every adversary set is a singleton avoiding the a/b edges.
  std::set<EdgeId> unjammable;
  for (const auto& br : result.wiring.branches) {
    unjammable.insert(br.a);
    unjammable.insert(br.b);
  }
  for (const auto& set : inst.adversary) {
    REQUIRE(set.size() == 1);
    CHECK_FALSE(unjammable.count(set[0]));
  }
}

TEST_CASE("reduce(relay) is the one-branch gadget") {
  auto result = reduce(fixtures::relay());
  CHECK(result.instance.graph.nodes.size() == 6);
  CHECK(result.instance.graph.edges.size() == 7);
  CHECK(result.instance.adversary.size() == 5);
  auto cut = min_cut(result.instance.graph, result.instance.source, result.instance.terminal);
  CHECK(cut.value == 1);
}

TEST_CASE("reduce sizes hold across the corpus") {
  for (const auto& entry : fixtures::corpus()) {
    const auto k = entry.instance.pairs.size();
    const auto v = entry.instance.graph.nodes.size();
    const auto e = entry.instance.graph.edges.size();
    auto result = reduce(entry.instance);
    CHECK(result.instance.graph.nodes.size() == v + 2 + 2 * k);
    CHECK(result.instance.graph.edges.size() == e + 6 * k);
    CHECK(result.instance.adversary.size() == e + 4 * k);
    CHECK(reduced_instance_diagnostics(result.instance).empty());
    CHECK(embedded_unicast(result.instance) == entry.instance);
  }
}

TEST_CASE("reduce avoids id collisions with the embedded network") {
  UnicastInstance inst;
  inst.graph.nodes = {"s", "t", "u_1"};  // clash with the gadget's names
  inst.graph.edges = {{"a_1", "s", "u_1", 1}, {"e", "u_1", "t", 1}};
  inst.pairs = {{"s", "t"}};
  auto result = reduce(inst);
  CHECK(validate_instance(result.instance).ok());
  CHECK(reduced_instance_diagnostics(result.instance).empty());
  CHECK(embedded_unicast(result.instance) == inst);
}

TEST_CASE("lift produces the majority table") {
  auto reduced = reduce(fixtures::butterfly());
  auto lifted = lift_code(fixtures::butterfly_xor_code(), fixtures::butterfly(), reduced.instance);
  REQUIRE(lifted.premise_ok);
  CHECK(lifted.code.edge_functions.at("b_1").table ==
        std::vector<std::uint64_t>{0, 0, 0, 1, 0, 1, 1, 1});
}

TEST_CASE("bitwise majority at n=2") {
  auto reduced = reduce(fixtures::butterfly());
  auto lifted =
      lift_code(fixtures::butterfly_xor_code(2), fixtures::butterfly(), reduced.instance);
  REQUIRE(lifted.premise_ok);
  const auto& table = lifted.code.edge_functions.at("b_1").table;
  // inputs (3, 3, 0): per-bit majority of (1,1,0) twice.
  CHECK(table.at((3 * 4 + 3) * 4 + 0) == 3);
  CHECK(table.at((2 * 4 + 1) * 4 + 3) == 3);  // (10, 01, 11) -> per-bit (1,1)
  CHECK(table.at((2 * 4 + 0) * 4 + 0) == 0);
}

TEST_CASE("lifting the XOR code yields a zero-error gadget code") {
  for (int n : {1, 2}) {
    auto reduced = reduce(fixtures::butterfly());
    auto lifted =
        lift_code(fixtures::butterfly_xor_code(n), fixtures::butterfly(), reduced.instance);
    REQUIRE(lifted.premise_ok);
    CHECK(check_zero_error(lifted.code, reduced.instance).ok());
  }
}

TEST_CASE("lift reports a violated premise but still emits the code") {
  auto reduced = reduce(fixtures::butterfly());
  auto lifted =
      lift_code(fixtures::butterfly_routing_code(), fixtures::butterfly(), reduced.instance);
  CHECK_FALSE(lifted.premise_ok);
  REQUIRE(lifted.premise_counterexample.has_value());
  CHECK(lifted.premise_counterexample->failed_terminal == "t2");
  // The emitted code is well-formed even though the premise failed.
  CHECK_FALSE(check_zero_error(lifted.code, reduced.instance).ok());
}

TEST_CASE("extract(lift(xor)) returns a zero-error unicast code with identity chains") {
  auto uinst = fixtures::butterfly();
  auto reduced = reduce(uinst);
  auto lifted = lift_code(fixtures::butterfly_xor_code(), uinst, reduced.instance);
  REQUIRE(lifted.premise_ok);
  auto outcome = extract_code(lifted.code, reduced.instance);
  auto* ok = std::get_if<ExtractResult>(&outcome);
  REQUIRE(ok != nullptr);
  CHECK_FALSE(ok->normalized);
  CHECK(check_unicast_zero_error(ok->unicast_code, uinst).ok());
  for (const auto& br : ok->chain.branches) {
    CHECK(br.a_to_x == fixtures::identity_table(1));
    CHECK(br.x_to_b == fixtures::identity_table(1));
    CHECK(br.b_to_zp == fixtures::identity_table(1));
    CHECK(br.a_to_z == fixtures::identity_table(1));
    CHECK(is_permutation(br.a_to_x));
  }
  // The lift rebinding is inverted exactly, so the round trip reproduces the
  // original code.
  CHECK(ok->unicast_code == fixtures::butterfly_xor_code());
}

TEST_CASE("extract rejects codes that are not zero-error") {
  auto uinst = fixtures::butterfly();
  auto reduced = reduce(uinst);
  auto lifted = lift_code(fixtures::butterfly_xor_code(), uinst, reduced.instance);
  lifted.code.edge_functions["b_1"].table = {0, 0, 0, 0, 1, 1, 1, 1};
  auto outcome = extract_code(lifted.code, reduced.instance);
  auto* premise = std::get_if<ExtractPremiseFailure>(&outcome);
  REQUIRE(premise != nullptr);
  CHECK(premise->counterexample.pattern.support() == std::vector<EdgeId>{"x_1"});
}

TEST_CASE("a constant x table breaks the chain") {
  auto uinst = fixtures::butterfly();
  auto reduced = reduce(uinst);
  auto lifted = lift_code(fixtures::butterfly_xor_code(), uinst, reduced.instance);
  lifted.code.edge_functions["x_1"].table = {0, 0};
  auto outcome = build_bijection_chain(lifted.code, reduced.instance);
  auto* violation = std::get_if<BijectionViolation>(&outcome);
  REQUIRE(violation != nullptr);
  CHECK(violation->branch == 1);
  CHECK(violation->relation == "x_1 not injective in a_1");
  CHECK(violation->witness_m1 == 0);
  CHECK(violation->witness_m2 == 1);
}

TEST_CASE("k=1 relay round trip") {
  auto uinst = fixtures::relay();
  auto reduced = reduce(uinst);
  auto lifted = lift_code(fixtures::relay_identity_code(), uinst, reduced.instance);
  REQUIRE(lifted.premise_ok);
  REQUIRE(check_zero_error(lifted.code, reduced.instance).ok());
  auto outcome = extract_code(lifted.code, reduced.instance);
  auto* ok = std::get_if<ExtractResult>(&outcome);
  REQUIRE(ok != nullptr);
  CHECK(check_unicast_zero_error(ok->unicast_code, uinst).ok());
  CHECK(ok->unicast_code == fixtures::relay_identity_code());
}

TEST_CASE("normalize_z_to_identity preserves terminal behavior") {
  auto uinst = fixtures::butterfly();
  auto reduced = reduce(uinst);
  auto lifted = lift_code(fixtures::butterfly_xor_code(), uinst, reduced.instance);
  REQUIRE(lifted.premise_ok);
  // Make each z edge send the complement; consumers un-complement.
  NetworkCode twisted = lifted.code;
  twisted.edge_functions["z_1"].table = {1, 0};
  twisted.edge_functions["z_2"].table = {1, 0};
  for (const char* id : {"e1", "e4"}) {
    auto& t = twisted.edge_functions[id].table;
    std::swap(t[0], t[1]);
  }
  for (const char* id : {"e2", "e5"}) {
    auto& t = twisted.edge_functions[id].table;
    std::swap(t[0], t[1]);
  }
  REQUIRE(check_zero_error(twisted, reduced.instance).ok());

  NetworkCode normalized = normalize_z_to_identity(twisted, reduced.instance);
  CHECK(normalized.edge_functions.at("z_1").table == fixtures::identity_table(1));
  CHECK(normalized.edge_functions.at("z_2").table == fixtures::identity_table(1));
  CHECK(check_zero_error(normalized, reduced.instance).ok());
  // Terminal-observable behavior is untouched.
  for (std::uint64_t m = 0; m < 4; ++m) {
    auto before = evaluate(twisted, reduced.instance, {m}, ErrorPattern{});
    auto after = evaluate(normalized, reduced.instance, {m}, ErrorPattern{});
    CHECK(before.decoded == after.decoded);
    CHECK(before.transmitted.at("b_1") == after.transmitted.at("b_1"));
  }
}

TEST_CASE("extract(lift(c)) stays zero-error for every zero-error butterfly code") {
  // All 128 zero-error codes at n=1: e1/e2/e4/e5/e6/e7 range over the two
  // bijections of {0,1} and e3 over XOR/XNOR; decoders are derived by
  // simulation. Every other encoder assignment fails some terminal.
  auto uinst = fixtures::butterfly();
  auto reduced = reduce(uinst);
  int verified = 0;
  for (int bits = 0; bits < 128; ++bits) {
    auto unary = [&](int b) {
      return (bits >> b) & 1 ? std::vector<std::uint64_t>{1, 0}
                             : std::vector<std::uint64_t>{0, 1};
    };
    NetworkCode code = fixtures::butterfly_xor_code();
    code.edge_functions["e1"].table = unary(0);
    code.edge_functions["e2"].table = unary(1);
    code.edge_functions["e4"].table = unary(2);
    code.edge_functions["e5"].table = unary(3);
    code.edge_functions["e6"].table = unary(4);
    code.edge_functions["e7"].table = unary(5);
    if ((bits >> 6) & 1) code.edge_functions["e3"].table = {1, 0, 0, 1};

    // Derive each decoder from the observed (input, message) pairs.
    for (auto& [node, dec] : code.decoders) {
      std::fill(dec.table.begin(), dec.table.end(), 0);
    }
    auto shape = CodeShape::for_unicast(code, uinst);
    CompiledCode cc(shape);
    GraphIndex ix(uinst.graph);
    const std::vector<std::uint64_t> no_error;
    std::map<NodeId, std::map<std::uint64_t, std::uint64_t>> obs;
    for (std::uint64_t m = 0; m < 4; ++m) {
      cc.run(shape.unpack_message(m), no_error);
      for (std::size_t t = 0; t < shape.terminals().size(); ++t) {
        const auto& [node, slot] = shape.terminals()[t];
        const auto& inputs = code.decoders.at(node).inputs;
        std::uint64_t key = 0;
        for (const auto& in : inputs)
          key = key * 2 + cc.received()[ix.edge_index(in.edge)];
        obs[node][key] = (m >> slot) & 1;
      }
    }
    for (auto& [node, table] : obs)
      for (auto& [key, val] : table) code.decoders.at(node).table[key] = val;

    REQUIRE(check_unicast_zero_error(code, uinst).ok());
    auto lifted = lift_code(code, uinst, reduced.instance);
    REQUIRE(lifted.premise_ok);
    auto outcome = extract_code(lifted.code, reduced.instance);
    auto* ok = std::get_if<ExtractResult>(&outcome);
    REQUIRE(ok != nullptr);
    CHECK(check_unicast_zero_error(ok->unicast_code, uinst).ok());
    ++verified;
  }
  CHECK(verified == 128);
}

TEST_CASE("extract round-trips every oracle witness in the corpus") {
  for (const auto& entry : fixtures::corpus()) {
    SearchBudget budget;
    budget.n = 1;
    auto verdict = search_unicast(entry.instance, budget);
    if (!verdict.feasible()) continue;
    auto reduced = reduce(entry.instance);
    auto lifted = lift_code(*verdict.witness, entry.instance, reduced.instance);
    REQUIRE(lifted.premise_ok);
    REQUIRE(check_zero_error(lifted.code, reduced.instance).ok());
    auto outcome = extract_code(lifted.code, reduced.instance);
    auto* ok = std::get_if<ExtractResult>(&outcome);
    REQUIRE(ok != nullptr);
    CHECK(check_unicast_zero_error(ok->unicast_code, entry.instance).ok());
  }
}

TEST_CASE("extract works at n=2") {
  auto uinst = fixtures::butterfly();
  auto reduced = reduce(uinst);
  auto lifted = lift_code(fixtures::butterfly_xor_code(2), uinst, reduced.instance);
  REQUIRE(lifted.premise_ok);
  auto outcome = extract_code(lifted.code, reduced.instance);
  auto* ok = std::get_if<ExtractResult>(&outcome);
  REQUIRE(ok != nullptr);
  CHECK(check_unicast_zero_error(ok->unicast_code, uinst).ok());
  for (const auto& br : ok->chain.branches) {
    CHECK(br.a_to_x == fixtures::identity_table(2));
    CHECK(br.b_to_zp == fixtures::identity_table(2));
  }
}

TEST_CASE("colliding a tuples are reported") {
  auto uinst = fixtures::butterfly();
  auto reduced = reduce(uinst);
  auto lifted = lift_code(fixtures::butterfly_xor_code(), uinst, reduced.instance);
  // a_2 mirrors a_1, so messages 0 and 2 share the tuple (0, 0).
  lifted.code.edge_functions["a_2"].table = {0, 1, 0, 1};
  auto outcome = build_bijection_chain(lifted.code, reduced.instance);
  auto* violation = std::get_if<BijectionViolation>(&outcome);
  REQUIRE(violation != nullptr);
  CHECK(violation->relation == "a tuple repeats across messages");
  CHECK(violation->witness_m1 == 0);
  CHECK(violation->witness_m2 == 2);
}

// The gadget also has to work when a pair source has other incoming edges
// and a pair terminal has outgoing ones: z_1 becomes one extra input of s1,
// z'_1 one extra output of t1.
TEST_CASE("round trip on a pair embedded mid-network") {
  UnicastInstance inst;
  inst.graph.nodes = {"a", "s1", "t1", "b"};
  inst.graph.edges = {
      {"q1", "a", "s1", 1}, {"q2", "s1", "t1", 1}, {"q3", "t1", "b", 1}};
  inst.pairs = {{"s1", "t1"}};
  REQUIRE(validate_instance(inst).ok());

  SearchBudget budget;
  budget.n = 1;
  auto verdict = search_unicast(inst, budget);
  REQUIRE(verdict.feasible());

  auto reduced = reduce(inst);
  CHECK(reduced_instance_diagnostics(reduced.instance).empty());
  auto lifted = lift_code(*verdict.witness, inst, reduced.instance);
  REQUIRE(lifted.premise_ok);
  REQUIRE(check_zero_error(lifted.code, reduced.instance).ok());
  auto outcome = extract_code(lifted.code, reduced.instance);
  auto* ok = std::get_if<ExtractResult>(&outcome);
  REQUIRE(ok != nullptr);
  CHECK(check_unicast_zero_error(ok->unicast_code, inst).ok());
}

TEST_CASE("wiring recovery matches the construction") {
  auto result = reduce(fixtures::butterfly());
  auto recovered = BranchWiring::from_instance(result.instance);
  REQUIRE(recovered.k() == 2);
  CHECK(recovered.source == result.wiring.source);
  CHECK(recovered.terminal == result.wiring.terminal);
  for (int i = 0; i < 2; ++i) {
    CHECK(recovered.branches[i].a == result.wiring.branches[i].a);
    CHECK(recovered.branches[i].zp == result.wiring.branches[i].zp);
    CHECK(recovered.branches[i].pair_source == result.wiring.branches[i].pair_source);
    CHECK(recovered.branches[i].pair_terminal == result.wiring.branches[i].pair_terminal);
  }
}

TEST_CASE("diagnostics flag tampered gadgets") {
  auto result = reduce(fixtures::butterfly());
  SUBCASE("jammable a edge") {
    auto inst = result.instance;
    inst.adversary.push_back({result.wiring.branches[0].a});
    CHECK_FALSE(reduced_instance_diagnostics(inst).empty());
  }
  SUBCASE("missing jammable edge") {
    auto inst = result.instance;
    inst.adversary.pop_back();
    CHECK_FALSE(reduced_instance_diagnostics(inst).empty());
  }
  SUBCASE("extra edge into a combiner") {
    auto inst = result.instance;
    inst.graph.edges.push_back({"rogue", "m1", result.wiring.branches[0].combiner, 1});
    inst.adversary.push_back({"rogue"});
    CHECK_FALSE(reduced_instance_diagnostics(inst).empty());
  }
}
