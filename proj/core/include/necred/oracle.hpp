#pragma once

#include <optional>
#include <string>

#include "necred/code.hpp"
#include "necred/graph.hpp"
#include "necred/types.hpp"

namespace necred {

/// Caps for a brute-force search at block length n.
struct SearchBudget {
  BigInt max_codes = BigInt(100'000'000);
  double max_seconds = 600.0;
  int n = 1;
};

/// Outcome of a feasibility search. Feasibility and witnesses are exact;
/// infeasibility claims are always "at block length n", never for all n.
struct SearchVerdict {
  enum class Kind { feasible, infeasible, exhausted };

  Kind kind = Kind::exhausted;
  std::optional<NetworkCode> witness;
  std::optional<BigInt> witness_index;  // canonical index, enumeration only
  BigInt space_size = 0;                // encoder assignments at this n
  int n = 1;
  std::string strategy;  // "enumeration", "witness-hint" or "via-reduction"
  bool hint_rejected = false;
  std::string detail;  // why the budget was exhausted, when it was

  bool feasible() const { return kind == Kind::feasible; }
  bool infeasible() const { return kind == Kind::infeasible; }
};

/// Number of encoder assignments at block length n: the product over edges of
/// alphabet^(input-space size), with inputs fixed to the canonical layout
/// (message slot first, then incoming edges in declaration order).
BigInt count_code_space(const UnicastInstance& inst, int n);
BigInt count_code_space(const NECInstance& inst, int rate_bits, int n);

/// Exhaustive search over all deterministic encoders in canonical order
/// (edges in evaluation order, tables lexicographic). Decoders are derived,
/// not enumerated: a candidate is feasible iff each terminal's observations
/// separate its messages, and the witness carries the induced decoders. The
/// witness is the canonically-first one for any worker count.
SearchVerdict search_unicast(const UnicastInstance& inst, const SearchBudget& budget,
                             int jobs = 1);

struct NecSearchOptions {
  /// Candidate code to verify instead of enumerating; used when the space is
  /// out of reach but a constructive witness exists.
  const NetworkCode* witness_hint = nullptr;
  /// Permit deciding canonical gadget instances through the embedded unicast
  /// problem (search + lift for feasibility, exhaustion of the unicast space
  /// for infeasibility). Every witness produced this way is still verified by
  /// the exhaustive zero-error check.
  bool allow_reduction_shortcut = true;
  int jobs = 1;
};

/// Zero-error feasibility of rate_bits message bits per n symbols against the
/// instance's adversary. Tries, in order: the witness hint, plain enumeration
/// when the space fits the budget, and the reduction shortcut on canonical
/// gadget instances.
SearchVerdict search_nec(const NECInstance& inst, int rate_bits, const SearchBudget& budget,
                         const NecSearchOptions& options = {});

}  // namespace necred
