#include "necred/audit.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <thread>

#include "necred/adversary.hpp"
#include "necred/evaluate.hpp"

namespace necred {

namespace {

struct BranchEdges {
  int a, b, zp;
};

std::vector<BranchEdges> branch_edge_indices(const BranchWiring& wiring, const GraphIndex& ix) {
  std::vector<BranchEdges> out;
  out.reserve(wiring.branches.size());
  for (const auto& br : wiring.branches)
    out.push_back({ix.edge_index(br.a), ix.edge_index(br.b), ix.edge_index(br.zp)});
  return out;
}

}  // namespace

MessageClassification classify_messages(const NetworkCode& code, const NECInstance& inst,
                                        int jobs) {
  BranchWiring wiring = BranchWiring::from_instance(inst);
  const int k = wiring.k();
  if (code.message_bits != k * code.n)
    throw std::invalid_argument("classification requires a rate-k code (message_bits = k*n)");
  auto shape = CodeShape::for_nec(code, inst);
  PatternEnumerator pats(inst, code.n);
  if (code.message_bits > 40)
    throw SizeRefusal("exhaustive check too large", BigInt(1) << code.message_bits);
  const std::uint64_t messages = pow2(code.message_bits);
  BigInt evals = BigInt(messages) * pats.count();
  if (evals > kMaxExhaustiveEvals) throw SizeRefusal("exhaustive check too large", evals);

  GraphIndex ix(inst.graph);
  auto edges = branch_edge_indices(wiring, ix);
  const int n = code.n;

  const int workers = std::max(jobs, 1);
  std::vector<std::vector<std::uint64_t>> good_parts(workers), bad_parts(workers);
  std::vector<std::vector<std::pair<std::uint64_t, std::uint64_t>>> zp_parts(workers);

  const std::uint64_t chunk = (messages + workers - 1) / workers;
  std::vector<std::thread> threads;
  for (int w = 0; w < workers; ++w) {
    const std::uint64_t lo = chunk * static_cast<std::uint64_t>(w);
    const std::uint64_t hi = std::min<std::uint64_t>(messages, lo + chunk);
    auto body = [&, w, lo, hi] {
      CompiledCode cc(shape);
      auto cur = pats.cursor();
      for (std::uint64_t m = lo; m < hi; ++m) {
        const auto slots = shape.unpack_message(m);
        bool good = true;
        std::uint64_t zp_packed = 0;
        cur.reset();
        while (cur.next()) {
          cc.run(slots, cur.values());
          if (cur.index() == 0) {
            for (int i = 0; i < k; ++i)
              zp_packed |= cc.transmitted()[edges[i].zp] << (i * n);
          }
          if (cc.decoded()[0] != m) {
            good = false;
            break;
          }
        }
        if (good) {
          good_parts[w].push_back(m);
          zp_parts[w].emplace_back(m, zp_packed);
        } else {
          bad_parts[w].push_back(m);
        }
      }
    };
    if (workers == 1) body();
    else threads.emplace_back(body);
  }
  for (auto& t : threads) t.join();

  MessageClassification cls;
  cls.n = n;
  cls.k = k;
  std::map<std::uint64_t, std::uint64_t> zp_occupancy;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> zp_of_good;
  for (int w = 0; w < workers; ++w) {
    cls.good.insert(cls.good.end(), good_parts[w].begin(), good_parts[w].end());
    cls.bad.insert(cls.bad.end(), bad_parts[w].begin(), bad_parts[w].end());
    for (auto& p : zp_parts[w]) {
      ++zp_occupancy[p.second];
      zp_of_good.push_back(p);
    }
  }

  for (const auto& [m, zp] : zp_of_good) {
    if (zp_occupancy.at(zp) > 1) cls.poor.push_back(m);
    else cls.circle.push_back(m);
  }

  cls.epsilon = Rational(BigInt(cls.bad.size()), BigInt(messages));
  cls.epsilon_prime = cls.epsilon * 4;
  return cls;
}

SignalSets compute_signal_sets(const NetworkCode& code, const NECInstance& inst,
                               const MessageClassification& cls, int l) {
  if (l < 1) throw std::invalid_argument("l must be positive");
  BranchWiring wiring = BranchWiring::from_instance(inst);
  const int k = wiring.k();
  if (cls.k != k || cls.n != code.n)
    throw std::invalid_argument("classification does not match code/instance");
  auto shape = CodeShape::for_nec(code, inst);

  GraphIndex ix(inst.graph);
  auto edges = branch_edge_indices(wiring, ix);
  const int n = code.n;

  SignalSets sets;
  sets.l = l;
  sets.a_count.resize(k);
  sets.b_count.resize(k);
  sets.zp_count.resize(k);
  sets.zp_b_joint.resize(k);
  sets.a_level.resize(k);
  sets.b_level.resize(k);
  sets.zp_level.resize(k);

  std::set<std::uint64_t> a_circle, b_circle, zp_circle;
  CompiledCode cc(shape);
  const std::vector<std::uint64_t> no_error;
  for (std::uint64_t m : cls.circle) {
    cc.run(shape.unpack_message(m), no_error);
    const auto& val = cc.transmitted();
    std::uint64_t pa = 0, pb = 0, pz = 0;
    for (int i = 0; i < k; ++i) {
      const std::uint64_t va = val[edges[i].a];
      const std::uint64_t vb = val[edges[i].b];
      const std::uint64_t vz = val[edges[i].zp];
      pa |= va << (i * n);
      pb |= vb << (i * n);
      pz |= vz << (i * n);
      ++sets.a_count[i][va];
      ++sets.b_count[i][vb];
      ++sets.zp_count[i][vz];
      ++sets.zp_b_joint[i][{vz, vb}];
    }
    a_circle.insert(pa);
    b_circle.insert(pb);
    zp_circle.insert(pz);
  }
  sets.a_circle.assign(a_circle.begin(), a_circle.end());
  sets.b_circle.assign(b_circle.begin(), b_circle.end());
  sets.zp_circle.assign(zp_circle.begin(), zp_circle.end());

  const BigInt tuple_space = BigInt(1) << (k * n);
  sets.a_cross_size = tuple_space - BigInt(sets.a_circle.size());
  sets.b_cross_size = tuple_space - BigInt(sets.b_circle.size());

  // Level threshold (1 - l*eps') * 2^((k-1)n), compared exactly.
  const Rational threshold = (Rational(1) - Rational(l) * cls.epsilon_prime) *
                             Rational(BigInt(1) << ((k - 1) * n));
  auto fill_level = [&](const std::map<std::uint64_t, std::uint64_t>& counts,
                        std::vector<std::uint64_t>& level) {
    for (const auto& [v, c] : counts)
      if (Rational(BigInt(c)) >= threshold) level.push_back(v);
  };
  for (int i = 0; i < k; ++i) {
    fill_level(sets.a_count[i], sets.a_level[i]);
    fill_level(sets.b_count[i], sets.b_level[i]);
    fill_level(sets.zp_count[i], sets.zp_level[i]);
  }
  return sets;
}

AuditReport audit_counting_bounds(const MessageClassification& cls, const SignalSets& sets,
                                  int l) {
  AuditReport report;
  const BigInt total = cls.message_count();

  // Classification invariants; a breach makes the bounds meaningless.
  auto is_sorted_unique = [](const std::vector<std::uint64_t>& v) {
    return std::is_sorted(v.begin(), v.end()) &&
           std::adjacent_find(v.begin(), v.end()) == v.end();
  };
  bool consistent = is_sorted_unique(cls.good) && is_sorted_unique(cls.bad) &&
                    is_sorted_unique(cls.poor) && is_sorted_unique(cls.circle) &&
                    BigInt(cls.good.size()) + BigInt(cls.bad.size()) == total &&
                    std::includes(cls.good.begin(), cls.good.end(), cls.poor.begin(),
                                  cls.poor.end()) &&
                    cls.epsilon == Rational(BigInt(cls.bad.size()), total) &&
                    cls.epsilon_prime == cls.epsilon * 4;
  if (consistent) {
    std::vector<std::uint64_t> expect_circle;
    std::set_difference(cls.good.begin(), cls.good.end(), cls.poor.begin(), cls.poor.end(),
                        std::back_inserter(expect_circle));
    consistent = expect_circle == cls.circle;
  }
  if (consistent) {
    std::vector<std::uint64_t> overlap;
    std::set_intersection(cls.good.begin(), cls.good.end(), cls.bad.begin(), cls.bad.end(),
                          std::back_inserter(overlap));
    consistent = overlap.empty();
  }
  for (int i = 0; consistent && i < cls.k; ++i) {
    BigInt occupancy = 0;
    for (const auto& [v, c] : sets.a_count[i]) occupancy += c;
    consistent = occupancy == BigInt(cls.circle.size());
  }
  if (!consistent) {
    report.malformed = true;
    report.rows.push_back({"malformed classification", 0, 0, false, ""});
    return report;
  }

  auto row = [&](std::string name, Rational lhs, Rational rhs, bool leq) {
    bool holds = leq ? lhs <= rhs : lhs >= rhs;
    report.rows.push_back({std::move(name), std::move(lhs), std::move(rhs), holds,
                           leq ? "<=" : ">="});
  };

  const Rational eps = cls.epsilon;
  const Rational epsp = cls.epsilon_prime;
  row("bad-count", Rational(BigInt(cls.bad.size())), eps * Rational(total), true);
  row("poor-count", Rational(BigInt(cls.poor.size())), Rational(3) * eps * Rational(total), true);
  row("circle-count", Rational(BigInt(cls.circle.size())),
      (Rational(1) - epsp) * Rational(total), false);
  row("a-cross", Rational(sets.a_cross_size), epsp * Rational(total), true);
  row("b-cross", Rational(sets.b_cross_size), epsp * Rational(total), true);

  const Rational level_rhs =
      (Rational(1) - epsp - Rational(1, l)) * Rational(BigInt(1) << cls.n);
  for (int i = 0; i < cls.k; ++i) {
    const std::string suffix = "-" + std::to_string(i + 1);
    row("a-level" + suffix, Rational(BigInt(sets.a_level[i].size())), level_rhs, false);
    row("b-level" + suffix, Rational(BigInt(sets.b_level[i].size())), level_rhs, false);
    row("zp-level" + suffix, Rational(BigInt(sets.zp_level[i].size())), level_rhs, false);
  }

  // Per-branch collision aggregate: circle messages not explained by the
  // dominant b value at their z' value, bounded by twice the b-cross size.
  for (int i = 0; i < cls.k; ++i) {
    BigInt aggregate = 0;
    for (const auto& [zv, nz] : sets.zp_count[i]) {
      std::uint64_t best = 0;
      bool first = true;
      for (const auto& [key, c] : sets.zp_b_joint[i]) {
        if (key.first != zv) continue;
        if (first || c > best) best = c;  // map order breaks ties by smallest b value
        first = false;
      }
      aggregate += BigInt(nz) - BigInt(best);
    }
    row("zp-collision-aggregate-" + std::to_string(i + 1), Rational(aggregate),
        Rational(2) * Rational(sets.b_cross_size), true);
  }

  return report;
}

std::variant<BijectionChain, BijectionViolation> check_bijections(const NetworkCode& code,
                                                                  const NECInstance& inst) {
  return build_bijection_chain(code, inst);
}

}  // namespace necred
