#include "fixtures.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <random>
#include <set>

#include "necred/oracle.hpp"
#include "necred/types.hpp"

namespace necred::fixtures {

std::vector<std::uint64_t> identity_table(int bits) {
  std::vector<std::uint64_t> t(pow2(bits));
  std::iota(t.begin(), t.end(), 0);
  return t;
}

std::vector<std::uint64_t> xor_table(int bits) {
  const std::uint64_t alpha = pow2(bits);
  std::vector<std::uint64_t> t(alpha * alpha);
  for (std::uint64_t a = 0; a < alpha; ++a)
    for (std::uint64_t b = 0; b < alpha; ++b) t[a * alpha + b] = a ^ b;
  return t;
}

UnicastInstance butterfly() {
  UnicastInstance inst;
  inst.graph.nodes = {"s1", "s2", "m1", "m2", "t1", "t2"};
  inst.graph.edges = {
      {"e1", "s1", "m1", 1}, {"e2", "s2", "m1", 1}, {"e3", "m1", "m2", 1},
      {"e4", "s1", "t2", 1}, {"e5", "s2", "t1", 1}, {"e6", "m2", "t1", 1},
      {"e7", "m2", "t2", 1},
  };
  inst.pairs = {{"s1", "t1"}, {"s2", "t2"}};
  return inst;
}

NetworkCode butterfly_xor_code(int n) {
  NetworkCode code;
  code.n = n;
  code.message_bits = 2 * n;
  code.edge_functions["e1"] = {{CodeInput::for_message(0)}, identity_table(n)};
  code.edge_functions["e2"] = {{CodeInput::for_message(1)}, identity_table(n)};
  code.edge_functions["e3"] = {{CodeInput::for_edge("e1"), CodeInput::for_edge("e2")},
                               xor_table(n)};
  code.edge_functions["e4"] = {{CodeInput::for_message(0)}, identity_table(n)};
  code.edge_functions["e5"] = {{CodeInput::for_message(1)}, identity_table(n)};
  code.edge_functions["e6"] = {{CodeInput::for_edge("e3")}, identity_table(n)};
  code.edge_functions["e7"] = {{CodeInput::for_edge("e3")}, identity_table(n)};
  code.decoders["t1"] = {{CodeInput::for_edge("e5"), CodeInput::for_edge("e6")}, xor_table(n)};
  code.decoders["t2"] = {{CodeInput::for_edge("e4"), CodeInput::for_edge("e7")}, xor_table(n)};
  return code;
}

NetworkCode butterfly_routing_code() {
  NetworkCode code = butterfly_xor_code(1);
  // e3 forwards M1 and ignores M2; t2 is left with two copies of M1.
  code.edge_functions["e3"].table = {0, 0, 1, 1};
  code.decoders["t1"].table = {0, 1, 0, 1};  // t1 still works: e6 carries M1
  code.decoders["t2"].table = {0, 0, 0, 0};
  return code;
}

UnicastInstance bottleneck() {
  UnicastInstance inst;
  inst.graph.nodes = {"s1", "s2", "u", "v", "t1", "t2"};
  inst.graph.edges = {
      {"f1", "s1", "u", 1}, {"f2", "s2", "u", 1}, {"f3", "u", "v", 1},
      {"f4", "v", "t1", 1}, {"f5", "v", "t2", 1},
  };
  inst.pairs = {{"s1", "t1"}, {"s2", "t2"}};
  return inst;
}

UnicastInstance relay() {
  UnicastInstance inst;
  inst.graph.nodes = {"s1", "t1"};
  inst.graph.edges = {{"r1", "s1", "t1", 1}};
  inst.pairs = {{"s1", "t1"}};
  return inst;
}

NetworkCode relay_identity_code(int n) {
  NetworkCode code;
  code.n = n;
  code.message_bits = n;
  code.edge_functions["r1"] = {{CodeInput::for_message(0)}, identity_table(n)};
  code.decoders["t1"] = {{CodeInput::for_edge("r1")}, identity_table(n)};
  return code;
}

namespace {

UnicastInstance two_hop_relay() {
  UnicastInstance inst;
  inst.graph.nodes = {"s1", "m", "t1"};
  inst.graph.edges = {{"h1", "s1", "m", 1}, {"h2", "m", "t1", 1}};
  inst.pairs = {{"s1", "t1"}};
  return inst;
}

UnicastInstance parallel_pair() {
  UnicastInstance inst;
  inst.graph.nodes = {"s1", "t1"};
  inst.graph.edges = {{"p1", "s1", "t1", 1}, {"p2", "s1", "t1", 1}};
  inst.pairs = {{"s1", "t1"}};
  return inst;
}

UnicastInstance diamond() {
  UnicastInstance inst;
  inst.graph.nodes = {"s1", "a", "b", "t1"};
  inst.graph.edges = {
      {"d1", "s1", "a", 1}, {"d2", "s1", "b", 1}, {"d3", "a", "t1", 1}, {"d4", "b", "t1", 1}};
  inst.pairs = {{"s1", "t1"}};
  return inst;
}

UnicastInstance disconnected_pair() {
  UnicastInstance inst;
  inst.graph.nodes = {"s1", "t1", "x"};
  inst.graph.edges = {{"q1", "s1", "x", 1}};
  inst.pairs = {{"s1", "t1"}};
  return inst;
}

UnicastInstance crossing_pairs() {
  // Two pairs whose only routes cross one shared middle node with two
  // outgoing edges; feasible by plain routing.
  UnicastInstance inst;
  inst.graph.nodes = {"s1", "s2", "m", "t1", "t2"};
  inst.graph.edges = {
      {"c1", "s1", "m", 1}, {"c2", "s2", "m", 1}, {"c3", "m", "t1", 1}, {"c4", "m", "t2", 1}};
  inst.pairs = {{"s1", "t1"}, {"s2", "t2"}};
  return inst;
}

UnicastInstance side_channel_bottleneck() {
  // Like the bottleneck, but pair 1 has a direct edge, which frees the
  // shared edge to carry pair 2 alone: feasible by plain routing.
  UnicastInstance inst;
  inst.graph.nodes = {"s1", "s2", "u", "v", "t1", "t2"};
  inst.graph.edges = {
      {"g1", "s1", "u", 1}, {"g2", "s2", "u", 1}, {"g3", "u", "v", 1},
      {"g4", "v", "t1", 1}, {"g5", "v", "t2", 1}, {"g6", "s1", "t1", 1},
  };
  inst.pairs = {{"s1", "t1"}, {"s2", "t2"}};
  return inst;
}

UnicastInstance wide_relay() {
  UnicastInstance inst;
  inst.graph.nodes = {"s1", "t1"};
  inst.graph.edges = {{"w1", "s1", "t1", 2}};
  inst.pairs = {{"s1", "t1"}};
  return inst;
}

std::vector<CorpusEntry> random_entries(std::size_t want, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::vector<CorpusEntry> out;
  int attempt = 0;
  while (out.size() < want && attempt < 4000) {
    ++attempt;
    std::uniform_int_distribution<int> layers_d(2, 3);
    const int layers = layers_d(rng);
    std::vector<std::vector<NodeId>> layer(layers);
    UnicastInstance inst;
    int node_id = 0;
    std::uniform_int_distribution<int> width_d(1, 3);
    for (int li = 0; li < layers; ++li) {
      const int width = width_d(rng);
      for (int wi = 0; wi < width; ++wi) {
        NodeId id = "n" + std::to_string(node_id++);
        layer[li].push_back(id);
        inst.graph.nodes.push_back(id);
      }
    }
    if (inst.graph.nodes.size() < 4 || inst.graph.nodes.size() > 8) continue;

    std::uniform_int_distribution<int> edges_d(3, 8);
    const int edge_count = edges_d(rng);
    std::set<std::pair<int, int>> used;
    int edge_id = 0;
    for (int e = 0; e < edge_count; ++e) {
      std::uniform_int_distribution<int> from_layer_d(0, layers - 2);
      const int lf = from_layer_d(rng);
      std::uniform_int_distribution<int> to_layer_d(lf + 1, layers - 1);
      const int lt = to_layer_d(rng);
      std::uniform_int_distribution<std::size_t> fd(0, layer[lf].size() - 1);
      std::uniform_int_distribution<std::size_t> td(0, layer[lt].size() - 1);
      inst.graph.edges.push_back({"re" + std::to_string(edge_id++), layer[lf][fd(rng)],
                                  layer[lt][td(rng)], 1});
    }

    // Pick k pairs with all endpoints distinct: sources in the first layer,
    // terminals in the last.
    std::uniform_int_distribution<int> k_d(1, 2);
    const int k = k_d(rng);
    if (static_cast<int>(layer.front().size()) < k ||
        static_cast<int>(layer.back().size()) < k)
      continue;
    std::vector<NodeId> sources = layer.front();
    std::vector<NodeId> terminals = layer.back();
    std::shuffle(sources.begin(), sources.end(), rng);
    std::shuffle(terminals.begin(), terminals.end(), rng);
    bool ok = true;
    std::set<NodeId> endpoints;
    for (int i = 0; i < k && ok; ++i) {
      if (!endpoints.insert(sources[i]).second) ok = false;
      if (!endpoints.insert(terminals[i]).second) ok = false;
    }
    if (!ok) continue;
    for (int i = 0; i < k; ++i) inst.pairs.push_back({sources[i], terminals[i]});

    if (!validate_instance(inst).ok()) continue;
    try {
      if (count_code_space(inst, 1) > BigInt(2'000'000)) continue;
    } catch (const SizeRefusal&) {
      continue;
    }
    out.push_back({"random_" + std::to_string(out.size() + 1), std::move(inst)});
  }
  return out;
}

}  // namespace

std::uint32_t test_seed(std::uint32_t fallback) {
  if (const char* env = std::getenv("NECRED_TEST_SEED"))
    return static_cast<std::uint32_t>(std::strtoul(env, nullptr, 10));
  return fallback;
}

std::vector<CorpusEntry> corpus() {
  std::vector<CorpusEntry> all = {
      {"butterfly", butterfly()},
      {"bottleneck", bottleneck()},
      {"relay", relay()},
      {"two_hop_relay", two_hop_relay()},
      {"parallel_pair", parallel_pair()},
      {"diamond", diamond()},
      {"disconnected_pair", disconnected_pair()},
      {"crossing_pairs", crossing_pairs()},
      {"side_channel_bottleneck", side_channel_bottleneck()},
      {"wide_relay", wide_relay()},
  };
  for (auto& e : random_entries(12, 20240717)) all.push_back(std::move(e));
  return all;
}

}  // namespace necred::fixtures
