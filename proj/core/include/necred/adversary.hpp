#pragma once

#include <cstdint>
#include <vector>

#include "necred/code.hpp"
#include "necred/graph.hpp"
#include "necred/types.hpp"

namespace necred {

/// The collection A of jammable channel sets, canonicalized against a graph:
/// members resolved to edge declaration indices, each set sorted, the set
/// list sorted lexicographically with duplicates collapsed.
class AdversaryClass {
public:
  AdversaryClass() = default;
  AdversaryClass(const NetworkGraph& graph, const std::vector<std::vector<EdgeId>>& sets);

  const std::vector<std::vector<int>>& sets() const { return sets_; }
  std::vector<std::vector<EdgeId>> to_edge_ids(const NetworkGraph& graph) const;

private:
  std::vector<std::vector<int>> sets_;
};

/// Enumerates R_A: every pattern whose support is contained in some A in A,
/// including the zero pattern. Canonical order: supports (as sorted index
/// lists) lexicographically with the empty support first, then value tuples
/// ascending with the first support edge most significant. The stream is
/// random-access (at) and restartable (cursor), so it splits by index range.
class PatternEnumerator {
public:
  PatternEnumerator(const NECInstance& inst, int n);

  const BigInt& count() const { return total_; }
  bool fits_u64() const { return total_ <= BigInt(UINT64_MAX); }

  ErrorPattern at(const BigInt& index) const;

  /// Streaming cursor over dense per-edge error values (indexed by edge
  /// declaration order). The first next() yields the zero pattern.
  class Cursor {
  public:
    explicit Cursor(const PatternEnumerator& owner);
    bool next();
    const std::vector<std::uint64_t>& values() const { return values_; }
    std::uint64_t index() const { return index_ - 1; }
    void reset();

  private:
    const PatternEnumerator* owner_;
    std::size_t support_ = 0;
    std::vector<std::uint64_t> digits_;  // per support edge, in [1, alpha-1]
    std::vector<std::uint64_t> values_;
    std::uint64_t index_ = 0;
    bool exhausted_ = false;
  };

  Cursor cursor() const { return Cursor(*this); }

  const std::vector<std::vector<int>>& supports() const { return supports_; }
  const NetworkGraph& graph() const { return *graph_; }

private:
  friend class Cursor;
  const NetworkGraph* graph_;
  int n_ = 1;
  std::vector<std::uint64_t> alphabet_;       // per edge declaration index
  std::vector<std::vector<int>> supports_;    // sorted index lists, lex order
  std::vector<BigInt> prefix_;                // cumulative pattern counts
  BigInt total_ = 0;
};

/// |R_A| without enumeration; exact.
BigInt pattern_count(const NECInstance& inst, int n);

}  // namespace necred
