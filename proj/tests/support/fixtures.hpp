#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "necred/code.hpp"
#include "necred/graph.hpp"

namespace necred::fixtures {

// Crossed butterfly: both demands route through the m1->m2 bottleneck while
// each terminal overhears the other pair's source.
//
//   e1: s1->m1   e2: s2->m1   e3: m1->m2 (bottleneck)
//   e4: s1->t2   e5: s2->t1   e6: m2->t1   e7: m2->t2
//   pairs (s1,t1), (s2,t2)
UnicastInstance butterfly();

/// XOR coding scheme on the butterfly at block length n: e3 carries the XOR
/// of both messages, each terminal cancels the overheard message.
NetworkCode butterfly_xor_code(int n = 1);

/// Degenerate routing scheme: e3 carries M1 only, so t2 sees nothing of M2.
NetworkCode butterfly_routing_code();

/// Two unit paths forced through one shared edge: infeasible at unit rate.
///   f1: s1->u  f2: s2->u  f3: u->v  f4: v->t1  f5: v->t2
UnicastInstance bottleneck();

/// Single pair, single unit edge r1: s1->t1.
UnicastInstance relay();
NetworkCode relay_identity_code(int n = 1);

/// Identity table on [0, 2^bits).
std::vector<std::uint64_t> identity_table(int bits);

/// XOR table over two bits-wide inputs, row-major.
std::vector<std::uint64_t> xor_table(int bits);

struct CorpusEntry {
  std::string name;
  UnicastInstance instance;
};

/// Fixed instance corpus: the named networks above plus seeded random DAGs
/// of at most 8 edges, all sized so the n=1 encoder space stays enumerable.
/// The generator seed is frozen; golden files depend on it.
std::vector<CorpusEntry> corpus();

/// Seed for randomized property tests: NECRED_TEST_SEED when set, else the
/// given default.
std::uint32_t test_seed(std::uint32_t fallback);

}  // namespace necred::fixtures
