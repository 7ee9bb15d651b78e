#include "necred/adversary.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace necred {

AdversaryClass::AdversaryClass(const NetworkGraph& graph,
                               const std::vector<std::vector<EdgeId>>& sets) {
  GraphIndex ix(graph);
  std::set<std::vector<int>> canon;
  for (const auto& set : sets) {
    std::set<int> members;
    for (const auto& id : set) {
      int e = ix.edge_index(id);
      if (e < 0) throw std::invalid_argument("unknown edge in adversary: " + id);
      members.insert(e);
    }
    canon.emplace(members.begin(), members.end());
  }
  sets_.assign(canon.begin(), canon.end());
}

std::vector<std::vector<EdgeId>> AdversaryClass::to_edge_ids(const NetworkGraph& graph) const {
  std::vector<std::vector<EdgeId>> out;
  out.reserve(sets_.size());
  for (const auto& set : sets_) {
    std::vector<EdgeId> ids;
    ids.reserve(set.size());
    for (int e : set) ids.push_back(graph.edges[e].id);
    out.push_back(std::move(ids));
  }
  return out;
}

namespace {

constexpr std::size_t kMaxSupports = 1u << 22;

}  // namespace

PatternEnumerator::PatternEnumerator(const NECInstance& inst, int n) : graph_(&inst.graph), n_(n) {
  if (n < 1) throw std::invalid_argument("block length must be positive");
  alphabet_.reserve(inst.graph.edges.size());
  for (const auto& e : inst.graph.edges) alphabet_.push_back(pow2(e.capacity * n));

  AdversaryClass adv(inst.graph, inst.adversary);

  // All subsets of all members, deduplicated: the admissible supports.
  std::set<std::vector<int>> supports;
  supports.insert(std::vector<int>{});
  for (const auto& set : adv.sets()) {
    if (set.size() > 22)
      throw SizeRefusal("adversary set too large to enumerate subsets", BigInt(1) << set.size());
    const std::size_t subsets = std::size_t{1} << set.size();
    for (std::size_t mask = 1; mask < subsets; ++mask) {
      std::vector<int> sub;
      for (std::size_t b = 0; b < set.size(); ++b)
        if (mask & (std::size_t{1} << b)) sub.push_back(set[b]);
      supports.insert(std::move(sub));
      if (supports.size() > kMaxSupports)
        throw SizeRefusal("too many admissible supports", BigInt(supports.size()));
    }
  }
  supports_.assign(supports.begin(), supports.end());

  prefix_.reserve(supports_.size() + 1);
  prefix_.push_back(0);
  for (const auto& sup : supports_) {
    BigInt cnt = 1;
    for (int e : sup) cnt *= BigInt(alphabet_[e]) - 1;
    prefix_.push_back(prefix_.back() + cnt);
  }
  total_ = prefix_.back();
}

ErrorPattern PatternEnumerator::at(const BigInt& index) const {
  if (index < 0 || index >= total_) throw std::out_of_range("pattern index out of range");
  // Locate the support block, then decode the offset mixed-radix over the
  // nonzero values of each support edge (last edge fastest).
  std::size_t lo = 0, hi = supports_.size();
  while (lo + 1 < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (prefix_[mid] <= index) lo = mid;
    else hi = mid;
  }
  BigInt offset = index - prefix_[lo];
  const auto& sup = supports_[lo];
  std::vector<std::uint64_t> digits(sup.size(), 0);
  for (std::size_t j = sup.size(); j-- > 0;) {
    BigInt radix = BigInt(alphabet_[sup[j]]) - 1;
    digits[j] = static_cast<std::uint64_t>(offset % radix);
    offset /= radix;
  }
  ErrorPattern p;
  for (std::size_t j = 0; j < sup.size(); ++j)
    p.values[graph_->edges[sup[j]].id] = digits[j] + 1;
  return p;
}

PatternEnumerator::Cursor::Cursor(const PatternEnumerator& owner)
    : owner_(&owner), values_(owner.alphabet_.size(), 0) {}

void PatternEnumerator::Cursor::reset() {
  support_ = 0;
  digits_.clear();
  std::fill(values_.begin(), values_.end(), 0);
  index_ = 0;
  exhausted_ = false;
}

bool PatternEnumerator::Cursor::next() {
  if (exhausted_) return false;
  if (index_ == 0) {
    // Zero pattern: supports_[0] is the empty set.
    support_ = 0;
    digits_.clear();
    ++index_;
    if (owner_->supports_.size() == 1) exhausted_ = true;
    return true;
  }
  // Advance the value odometer within the current support, else move to the
  // next support with all digits at their minimum (value 1).
  const auto advance_support = [&]() -> bool {
    for (int e : owner_->supports_[support_]) values_[e] = 0;
    ++support_;
    while (support_ < owner_->supports_.size()) {
      const auto& sup = owner_->supports_[support_];
      bool nonempty_alphabet = true;
      for (int e : sup)
        if (owner_->alphabet_[e] < 2) nonempty_alphabet = false;
      if (nonempty_alphabet) {
        digits_.assign(sup.size(), 1);
        for (std::size_t j = 0; j < sup.size(); ++j) values_[sup[j]] = 1;
        return true;
      }
      ++support_;
    }
    return false;
  };

  bool ok;
  if (support_ == 0) {
    ok = advance_support();
  } else {
    const auto& sup = owner_->supports_[support_];
    std::size_t j = sup.size();
    ok = false;
    while (j-- > 0) {
      if (digits_[j] + 1 < owner_->alphabet_[sup[j]]) {
        ++digits_[j];
        values_[sup[j]] = digits_[j];
        ok = true;
        break;
      }
      digits_[j] = 1;
      values_[sup[j]] = 1;
    }
    if (!ok) ok = advance_support();
  }
  if (!ok) {
    exhausted_ = true;
    return false;
  }
  ++index_;
  return true;
}

BigInt pattern_count(const NECInstance& inst, int n) {
  return PatternEnumerator(inst, n).count();
}

}  // namespace necred
