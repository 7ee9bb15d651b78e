#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "necred/adversary.hpp"
#include "necred/code.hpp"
#include "necred/graph.hpp"
#include "necred/types.hpp"

namespace necred {

/// Binding of a code's message slots and functions to a concrete instance.
/// Construction validates every shape constraint (locality of inputs, table
/// lengths, codomains) and throws std::invalid_argument starting with
/// "code/instance mismatch" on any violation.
class CodeShape {
public:
  static CodeShape for_unicast(const NetworkCode& code, const UnicastInstance& inst);
  static CodeShape for_nec(const NetworkCode& code, const NECInstance& inst);

  const NetworkGraph& graph() const { return *graph_; }
  int slot_count() const { return static_cast<int>(slot_bits_.size()); }
  int slot_width(int slot) const { return slot_bits_[slot]; }
  int message_bits() const { return message_bits_; }

  /// Terminals in fixed order with the slot each must reproduce.
  const std::vector<std::pair<NodeId, int>>& terminals() const { return terminals_; }

  std::vector<std::uint64_t> unpack_message(std::uint64_t packed) const;
  std::uint64_t pack_message(const std::vector<std::uint64_t>& slots) const;

private:
  friend class CompiledCode;
  const NetworkGraph* graph_ = nullptr;
  const NetworkCode* code_ = nullptr;
  std::vector<int> slot_bits_;
  std::map<NodeId, int> source_slot_;
  std::vector<std::pair<NodeId, int>> terminals_;
  int message_bits_ = 0;

  void check_functions() const;
};

/// Flattened evaluation program: edges in canonical order with inputs
/// resolved to dense indices. Borrows the code and shape; keep them alive.
class CompiledCode {
public:
  explicit CompiledCode(const CodeShape& shape);

  /// Evaluates one transmission. `slots` holds one value per message slot;
  /// `error` holds one value per edge declaration index (may be empty for the
  /// zero pattern). Encoders read post-error values of their inputs.
  void run(const std::vector<std::uint64_t>& slots,
           const std::vector<std::uint64_t>& error) const;

  const std::vector<std::uint64_t>& transmitted() const { return transmitted_; }
  const std::vector<std::uint64_t>& received() const { return received_; }
  const std::vector<std::uint64_t>& decoded() const { return decoded_; }

  const CodeShape& shape() const { return *shape_; }
  EvalTrace trace() const;

private:
  struct Source {
    bool is_message = false;
    std::uint32_t index = 0;  // slot or edge declaration index
  };
  struct Op {
    std::uint32_t out = 0;  // edge declaration index, or terminal order index
    std::vector<Source> inputs;
    std::vector<std::uint64_t> alphabets;
    const std::uint64_t* table = nullptr;
  };

  const CodeShape* shape_;
  std::vector<Op> edge_ops_;      // in canonical evaluation order
  std::vector<Op> decoder_ops_;   // in terminals() order
  mutable std::vector<std::uint64_t> transmitted_, received_, decoded_;
};

/// Single-shot evaluation with full trace.
EvalTrace evaluate(const NetworkCode& code, const UnicastInstance& inst,
                   const std::vector<std::uint64_t>& slots, const ErrorPattern& err);
EvalTrace evaluate(const NetworkCode& code, const NECInstance& inst,
                   const std::vector<std::uint64_t>& slots, const ErrorPattern& err);

struct NecCounterexample {
  std::uint64_t message = 0;
  ErrorPattern pattern;
  std::uint64_t decoded = 0;
};

struct NecCheckResult {
  std::optional<NecCounterexample> counterexample;  // empty means ok
  BigInt evaluations = 0;

  bool ok() const { return !counterexample.has_value(); }
};

/// Exhaustively checks zero-error decodability of an NEC code against every
/// message and every admissible pattern. The returned counterexample, if any,
/// is the first under (message ascending, pattern canonical order) for any
/// worker count. Refuses state spaces above 2^40 evaluations.
NecCheckResult check_zero_error(const NetworkCode& code, const NECInstance& inst, int jobs = 1);

struct UnicastCounterexample {
  std::uint64_t message = 0;                 // packed
  std::vector<std::uint64_t> message_tuple;  // per slot
  NodeId failed_terminal;
  std::uint64_t decoded = 0;
};

struct UnicastCheckResult {
  std::optional<UnicastCounterexample> counterexample;
  BigInt evaluations = 0;

  bool ok() const { return !counterexample.has_value(); }
};

/// Error-free exhaustive check that every terminal reproduces its slot.
UnicastCheckResult check_unicast_zero_error(const NetworkCode& code,
                                            const UnicastInstance& inst, int jobs = 1);

/// Fraction of messages for which some admissible pattern defeats the
/// decoder; exact. Equal to 0 iff check_zero_error passes.
Rational empirical_error_prob(const NetworkCode& code, const NECInstance& inst, int jobs = 1);

}  // namespace necred
