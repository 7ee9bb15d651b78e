#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "necred/code.hpp"
#include "necred/graph.hpp"
#include "necred/reduction.hpp"
#include "necred/types.hpp"

namespace necred {

/// Worst-case partition of the message space on a gadget instance: a message
/// is good when it decodes under every admissible pattern, poor when another
/// good message shares its z'-signal tuple, circle = good minus poor.
struct MessageClassification {
  int n = 0;
  int k = 0;
  std::vector<std::uint64_t> good;    // ascending
  std::vector<std::uint64_t> bad;     // ascending
  std::vector<std::uint64_t> poor;    // ascending, subset of good
  std::vector<std::uint64_t> circle;  // ascending, good \ poor
  Rational epsilon;                   // |bad| / 2^(kn)
  Rational epsilon_prime;             // 4 * epsilon

  BigInt message_count() const { return BigInt(1) << (k * n); }
};

MessageClassification classify_messages(const NetworkCode& code, const NECInstance& inst,
                                        int jobs = 1);

/// Zero-pattern cut-signal statistics over the circle messages: the tuple
/// images A°, B°, Z'°, the per-branch occupancy counts N(.) and the level
/// sets of values whose occupancy reaches (1 - l*eps')*2^((k-1)n).
struct SignalSets {
  int l = 1;
  std::vector<std::uint64_t> a_circle, b_circle, zp_circle;  // packed tuples, ascending
  BigInt a_cross_size, b_cross_size;                         // complements in [2^n]^k
  // Per branch (outer index i-1): value -> occupancy count over circle.
  std::vector<std::map<std::uint64_t, std::uint64_t>> a_count, b_count, zp_count;
  // Per branch: (z' value, b value) -> occupancy count over circle.
  std::vector<std::map<std::pair<std::uint64_t, std::uint64_t>, std::uint64_t>> zp_b_joint;
  std::vector<std::vector<std::uint64_t>> a_level, b_level, zp_level;  // ascending values
};

SignalSets compute_signal_sets(const NetworkCode& code, const NECInstance& inst,
                               const MessageClassification& cls, int l);

struct BoundRow {
  std::string name;
  Rational lhs;
  Rational rhs;
  bool holds = false;
  std::string direction;  // "<=" or ">="
};

struct AuditReport {
  std::vector<BoundRow> rows;
  bool malformed = false;

  bool all_hold() const {
    if (malformed) return false;
    for (const auto& r : rows)
      if (!r.holds) return false;
    return true;
  }
};

/// Exact-arithmetic checks of the counting bounds: |M^b| <= eps*2^kn,
/// |M^poor| <= 3*eps*2^kn, |M°| >= (1-eps')*2^kn, cross-set sizes, per-branch
/// level-set sizes, and the per-branch aggregate
/// sum_z' (N(z') - |M(z', argmax b)|) <= 2|B^x|. Inconsistent inputs yield a
/// single "malformed classification" row.
AuditReport audit_counting_bounds(const MessageClassification& cls, const SignalSets& sets,
                                  int l);

/// Chain verification on a gadget code: the verified maps on success, else
/// the first broken relation with witnesses.
std::variant<BijectionChain, BijectionViolation> check_bijections(const NetworkCode& code,
                                                                  const NECInstance& inst);

}  // namespace necred
