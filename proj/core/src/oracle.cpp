#include "necred/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <stdexcept>
#include <thread>

#include "necred/adversary.hpp"
#include "necred/evaluate.hpp"
#include "necred/reduction.hpp"

namespace necred {

namespace {

struct Source {
  bool is_message = false;
  std::uint32_t index = 0;  // slot index or edge declaration index
};

// Fixed per-instance search layout: edges in canonical evaluation order with
// the canonical input convention, plus the derived-decoder bookkeeping.
struct SearchPlan {
  const NetworkGraph* graph = nullptr;
  int n = 1;
  std::vector<int> slot_bits;
  int message_bits = 0;

  struct EdgeSlot {
    int edge = -1;  // declaration index
    std::vector<Source> inputs;
    std::vector<std::uint64_t> alphabets;
    std::uint64_t alphabet = 2;
    std::uint64_t rows = 1;
  };
  std::vector<EdgeSlot> edges;  // canonical order

  struct Terminal {
    NodeId node;
    int slot = 0;  // slot to reproduce; NEC codes use slot 0 = whole message
    std::vector<int> in_edges;
    std::vector<std::uint64_t> alphabets;
    std::uint64_t obs_space = 1;
  };
  std::vector<Terminal> terminals;

  BigInt space = 1;

  static SearchPlan build(const NetworkGraph& graph, const std::vector<int>& slot_bits,
                          const std::map<NodeId, int>& source_slot,
                          const std::vector<std::pair<NodeId, int>>& terminals, int n);
};

SearchPlan SearchPlan::build(const NetworkGraph& graph, const std::vector<int>& slot_bits,
                             const std::map<NodeId, int>& source_slot,
                             const std::vector<std::pair<NodeId, int>>& terminals, int n) {
  SearchPlan plan;
  plan.graph = &graph;
  plan.n = n;
  plan.slot_bits = slot_bits;
  for (int w : slot_bits) plan.message_bits += w;

  GraphIndex ix(graph);
  if (!ix.acyclic()) throw std::invalid_argument("search requires an acyclic graph");

  for (int e : ix.edge_eval_order()) {
    EdgeSlot slot;
    slot.edge = e;
    const Edge& edge = graph.edges[e];
    slot.alphabet = pow2(edge.capacity * n);
    const int tail = ix.node_index(edge.from);
    if (auto it = source_slot.find(edge.from); it != source_slot.end()) {
      slot.inputs.push_back({true, static_cast<std::uint32_t>(it->second)});
      slot.alphabets.push_back(pow2(slot_bits[it->second]));
    }
    for (int in : ix.incoming(tail)) {
      slot.inputs.push_back({false, static_cast<std::uint32_t>(in)});
      slot.alphabets.push_back(pow2(graph.edges[in].capacity * n));
    }
    BigInt rows = 1;
    for (auto a : slot.alphabets) rows *= a;
    if (rows > BigInt(1) << 30) throw SizeRefusal("encoder input space too large", rows);
    slot.rows = static_cast<std::uint64_t>(rows);
    plan.edges.push_back(std::move(slot));
  }

  for (const auto& [node, mslot] : terminals) {
    Terminal t;
    t.node = node;
    t.slot = mslot;
    const int v = ix.node_index(node);
    BigInt obs = 1;
    for (int in : ix.incoming(v)) {
      t.in_edges.push_back(in);
      t.alphabets.push_back(pow2(graph.edges[in].capacity * n));
      obs *= t.alphabets.back();
    }
    if (obs > BigInt(1) << 30) throw SizeRefusal("terminal observation space too large", obs);
    t.obs_space = static_cast<std::uint64_t>(obs);
    plan.terminals.push_back(std::move(t));
  }

  plan.space = 1;
  BigInt space_bits = 0;
  for (const auto& slot : plan.edges) {
    space_bits += BigInt(slot.rows) * (graph.edges[slot.edge].capacity * n);
    if (space_bits > 4'000'000)
      throw SizeRefusal("code space too large to count exactly", space_bits);
  }
  for (const auto& slot : plan.edges)
    plan.space *= boost::multiprecision::pow(BigInt(slot.alphabet),
                                             static_cast<unsigned>(slot.rows));
  return plan;
}

// Mutable per-worker search state: the current candidate's tables plus the
// evaluation and decoder scratch.
class Candidate {
public:
  explicit Candidate(const SearchPlan& plan) : plan_(&plan) {
    tables_.reserve(plan.edges.size());
    for (const auto& slot : plan.edges) tables_.emplace_back(slot.rows, 0);
    values_.resize(plan.graph->edges.size(), 0);
    for (const auto& t : plan.terminals) {
      obs_value_.emplace_back(t.obs_space, 0);
      obs_stamp_.emplace_back(t.obs_space, 0);
    }
    epoch_ = 0;
  }

  // Positions the odometer at the given candidate index (digits row-major,
  // first edge's first row most significant).
  void seek(const BigInt& index) {
    BigInt rest = index;
    for (std::size_t e = plan_->edges.size(); e-- > 0;) {
      auto& table = tables_[e];
      const BigInt radix = plan_->edges[e].alphabet;
      for (std::size_t r = table.size(); r-- > 0;) {
        table[r] = static_cast<std::uint64_t>(rest % radix);
        rest /= radix;
      }
    }
  }

  bool advance() {
    for (std::size_t e = plan_->edges.size(); e-- > 0;) {
      auto& table = tables_[e];
      const std::uint64_t top = plan_->edges[e].alphabet - 1;
      for (std::size_t r = table.size(); r-- > 0;) {
        if (table[r] < top) {
          ++table[r];
          return true;
        }
        table[r] = 0;
      }
    }
    return false;
  }

  // Zero-error feasibility of the current tables against (message, pattern)
  // pairs supplied by run_messages; returns the derived decoders on success.
  template <class PatternSource>
  bool decodable(PatternSource&& patterns) {
    ++epoch_;
    const std::uint64_t messages = pow2(plan_->message_bits);
    for (std::uint64_t m = 0; m < messages; ++m) {
      unpack(m);
      if (!patterns(m)) return false;
    }
    return true;
  }

  // Evaluates the current candidate for the unpacked message and the given
  // dense error vector, then folds each terminal's observation; returns false
  // on a decoding clash.
  bool run_once(const std::vector<std::uint64_t>& error) {
    const bool with_error = !error.empty();
    for (std::size_t e = 0; e < plan_->edges.size(); ++e) {
      const auto& slot = plan_->edges[e];
      std::uint64_t idx = 0;
      for (std::size_t j = 0; j < slot.inputs.size(); ++j) {
        const Source& src = slot.inputs[j];
        idx = idx * slot.alphabets[j] + (src.is_message ? slots_[src.index] : values_[src.index]);
      }
      std::uint64_t v = tables_[e][idx];
      if (with_error) v ^= error[slot.edge];
      values_[slot.edge] = v;
    }
    for (std::size_t t = 0; t < plan_->terminals.size(); ++t) {
      const auto& term = plan_->terminals[t];
      std::uint64_t obs = 0;
      for (std::size_t j = 0; j < term.in_edges.size(); ++j)
        obs = obs * term.alphabets[j] + values_[term.in_edges[j]];
      const std::uint64_t want = slots_[term.slot];
      if (obs_stamp_[t][obs] == epoch_) {
        if (obs_value_[t][obs] != want) return false;
      } else {
        obs_stamp_[t][obs] = epoch_;
        obs_value_[t][obs] = want;
      }
    }
    return true;
  }

  NetworkCode emit() const {
    NetworkCode code;
    code.n = plan_->n;
    code.message_bits = plan_->message_bits;
    for (std::size_t e = 0; e < plan_->edges.size(); ++e) {
      const auto& slot = plan_->edges[e];
      FunctionTable fn;
      for (const Source& src : slot.inputs) {
        if (src.is_message) fn.inputs.push_back(CodeInput::for_message(src.index));
        else fn.inputs.push_back(CodeInput::for_edge(plan_->graph->edges[src.index].id));
      }
      fn.table = tables_[e];
      code.edge_functions[plan_->graph->edges[slot.edge].id] = std::move(fn);
    }
    for (std::size_t t = 0; t < plan_->terminals.size(); ++t) {
      const auto& term = plan_->terminals[t];
      FunctionTable fn;
      for (int in : term.in_edges)
        fn.inputs.push_back(CodeInput::for_edge(plan_->graph->edges[in].id));
      fn.table.resize(term.obs_space, 0);
      for (std::uint64_t obs = 0; obs < term.obs_space; ++obs)
        if (obs_stamp_[t][obs] == epoch_) fn.table[obs] = obs_value_[t][obs];
      code.decoders[term.node] = std::move(fn);
    }
    return code;
  }

private:
  void unpack(std::uint64_t packed) {
    slots_.resize(plan_->slot_bits.size());
    int shift = 0;
    for (std::size_t i = 0; i < plan_->slot_bits.size(); ++i) {
      slots_[i] = (packed >> shift) & (pow2(plan_->slot_bits[i]) - 1);
      shift += plan_->slot_bits[i];
    }
  }

  const SearchPlan* plan_;
  std::vector<std::vector<std::uint64_t>> tables_;
  std::vector<std::uint64_t> values_;
  std::vector<std::uint64_t> slots_;
  std::vector<std::vector<std::uint64_t>> obs_value_;
  std::vector<std::vector<std::uint64_t>> obs_stamp_;
  std::uint64_t epoch_ = 0;
};

struct EnumerationResult {
  std::optional<std::uint64_t> witness_offset;
  std::optional<NetworkCode> witness;
  bool timed_out = false;
};

// Scans candidates [0, total) in canonical order, sharded by contiguous
// ranges. Workers above an already-found witness index stop early; the
// winning witness is the canonical-first one regardless of the worker count.
// make_check() builds one candidate predicate per worker, so predicates may
// carry mutable scratch.
template <class CheckFactory>
EnumerationResult enumerate_candidates(const SearchPlan& plan, std::uint64_t total, int jobs,
                                       double max_seconds, CheckFactory&& make_check) {
  const int workers =
      std::max(1, static_cast<int>(std::min<std::uint64_t>(std::max(jobs, 1), total)));
  std::vector<std::optional<std::uint64_t>> found(workers);
  std::vector<std::optional<NetworkCode>> codes(workers);
  std::atomic<std::uint64_t> best{UINT64_MAX};
  std::atomic<bool> expired{false};
  const auto t0 = std::chrono::steady_clock::now();

  auto body = [&](int w, std::uint64_t lo, std::uint64_t hi) {
    auto check = make_check();
    Candidate cand(plan);
    cand.seek(BigInt(lo));
    for (std::uint64_t i = lo; i < hi; ++i) {
      if ((i & 0xFFF) == 0) {
        if (best.load(std::memory_order_relaxed) < lo) return;
        if (expired.load(std::memory_order_relaxed)) return;
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (elapsed > max_seconds) {
          expired.store(true, std::memory_order_relaxed);
          return;
        }
      }
      if (check(cand)) {
        found[w] = i;
        codes[w] = cand.emit();
        std::uint64_t cur = best.load(std::memory_order_relaxed);
        while (i < cur && !best.compare_exchange_weak(cur, i, std::memory_order_relaxed)) {
        }
        return;
      }
      if (i + 1 < hi && !cand.advance()) break;
    }
  };

  if (workers == 1) {
    body(0, 0, total);
  } else {
    std::vector<std::thread> threads;
    const std::uint64_t chunk = (total + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const std::uint64_t lo = chunk * static_cast<std::uint64_t>(w);
      const std::uint64_t hi = std::min(total, lo + chunk);
      if (lo >= hi) break;
      threads.emplace_back(body, w, lo, hi);
    }
    for (auto& t : threads) t.join();
  }

  EnumerationResult result;
  for (int w = 0; w < workers; ++w) {
    if (found[w] && (!result.witness_offset || *found[w] < *result.witness_offset)) {
      result.witness_offset = found[w];
      result.witness = codes[w];
    }
  }
  result.timed_out = expired.load() && !result.witness_offset;
  return result;
}

SearchPlan unicast_plan(const UnicastInstance& inst, int n) {
  auto rep = validate_instance(inst);
  if (!rep.ok()) throw std::invalid_argument("invalid instance: " + rep.violations.front());
  std::vector<int> slot_bits(inst.pairs.size(), n);
  std::map<NodeId, int> source_slot;
  std::vector<std::pair<NodeId, int>> terminals;
  for (std::size_t i = 0; i < inst.pairs.size(); ++i) {
    source_slot.emplace(inst.pairs[i].source, static_cast<int>(i));
    terminals.emplace_back(inst.pairs[i].terminal, static_cast<int>(i));
  }
  return SearchPlan::build(inst.graph, slot_bits, source_slot, terminals, n);
}

SearchPlan nec_plan(const NECInstance& inst, int rate_bits, int n) {
  auto rep = validate_instance(inst);
  if (!rep.ok()) throw std::invalid_argument("invalid instance: " + rep.violations.front());
  if (rate_bits < 1) throw std::invalid_argument("rate_bits must be positive");
  return SearchPlan::build(inst.graph, {rate_bits}, {{inst.source, 0}},
                           {{inst.terminal, 0}}, n);
}

}  // namespace

BigInt count_code_space(const UnicastInstance& inst, int n) {
  return unicast_plan(inst, n).space;
}

BigInt count_code_space(const NECInstance& inst, int rate_bits, int n) {
  return nec_plan(inst, rate_bits, n).space;
}

SearchVerdict search_unicast(const UnicastInstance& inst, const SearchBudget& budget, int jobs) {
  SearchPlan plan = unicast_plan(inst, budget.n);
  SearchVerdict verdict;
  verdict.n = budget.n;
  verdict.space_size = plan.space;
  verdict.strategy = "enumeration";
  if (plan.message_bits > 40)
    throw SizeRefusal("message space too large", BigInt(1) << plan.message_bits);
  if (plan.space > budget.max_codes) {
    verdict.kind = SearchVerdict::Kind::exhausted;
    verdict.detail = "code space exceeds max_codes";
    return verdict;
  }

  const std::uint64_t total = static_cast<std::uint64_t>(plan.space);
  auto result = enumerate_candidates(plan, total, jobs, budget.max_seconds, [&]() {
    return [no_error = std::vector<std::uint64_t>{}](Candidate& cand) {
      return cand.decodable([&](std::uint64_t) { return cand.run_once(no_error); });
    };
  });

  if (result.witness_offset) {
    verdict.kind = SearchVerdict::Kind::feasible;
    verdict.witness_index = BigInt(*result.witness_offset);
    verdict.witness = std::move(result.witness);
    auto sound = check_unicast_zero_error(*verdict.witness, inst);
    if (!sound.ok()) throw std::logic_error("search witness failed verification");
  } else if (result.timed_out) {
    verdict.kind = SearchVerdict::Kind::exhausted;
    verdict.detail = "max_seconds exceeded";
  } else {
    verdict.kind = SearchVerdict::Kind::infeasible;
  }
  return verdict;
}

SearchVerdict search_nec(const NECInstance& inst, int rate_bits, const SearchBudget& budget,
                         const NecSearchOptions& options) {
  SearchPlan plan = nec_plan(inst, rate_bits, budget.n);
  SearchVerdict verdict;
  verdict.n = budget.n;
  verdict.space_size = plan.space;

  if (options.witness_hint) {
    const NetworkCode& hint = *options.witness_hint;
    bool usable = hint.n == budget.n && hint.message_bits == rate_bits;
    if (usable) {
      try {
        usable = check_zero_error(hint, inst, options.jobs).ok();
      } catch (const std::invalid_argument&) {
        usable = false;
      }
    }
    if (usable) {
      verdict.kind = SearchVerdict::Kind::feasible;
      verdict.strategy = "witness-hint";
      verdict.witness = hint;
      return verdict;
    }
    verdict.hint_rejected = true;
  }

  if (plan.space <= budget.max_codes && plan.message_bits <= 40) {
    PatternEnumerator pats(inst, budget.n);
    BigInt evals_per_candidate = (BigInt(1) << plan.message_bits) * pats.count();
    if (evals_per_candidate <= BigInt(kMaxExhaustiveEvals)) {
      verdict.strategy = "enumeration";
      const std::uint64_t total = static_cast<std::uint64_t>(plan.space);
      auto result = enumerate_candidates(plan, total, options.jobs, budget.max_seconds, [&]() {
        return [cur = pats.cursor()](Candidate& cand) mutable {
          return cand.decodable([&](std::uint64_t) {
            cur.reset();
            while (cur.next())
              if (!cand.run_once(cur.values())) return false;
            return true;
          });
        };
      });
      if (result.witness_offset) {
        verdict.kind = SearchVerdict::Kind::feasible;
        verdict.witness_index = BigInt(*result.witness_offset);
        verdict.witness = std::move(result.witness);
        auto sound = check_zero_error(*verdict.witness, inst, options.jobs);
        if (!sound.ok()) throw std::logic_error("search witness failed verification");
      } else if (result.timed_out) {
        verdict.kind = SearchVerdict::Kind::exhausted;
        verdict.detail = "max_seconds exceeded";
      } else {
        verdict.kind = SearchVerdict::Kind::infeasible;
      }
      return verdict;
    }
  }

  // Canonical gadget instances at rate k are decided through the embedded
  // unicast problem: a unicast witness lifts to a verified NEC witness, and
  // an exhausted unicast space with no witness rules out an NEC code, since
  // extraction would turn one into a unicast code.
  if (options.allow_reduction_shortcut && reduced_instance_diagnostics(inst).empty()) {
    const BranchWiring wiring = BranchWiring::from_instance(inst);
    if (rate_bits == wiring.k() * budget.n) {
      UnicastInstance embedded = embedded_unicast(inst);
      SearchVerdict sub = search_unicast(embedded, budget, options.jobs);
      verdict.strategy = "via-reduction";
      if (sub.kind == SearchVerdict::Kind::feasible) {
        LiftResult lifted = lift_code(*sub.witness, embedded, inst);
        if (!lifted.premise_ok) throw std::logic_error("unicast witness failed lift premise");
        auto sound = check_zero_error(lifted.code, inst, options.jobs);
        if (!sound.ok()) throw std::logic_error("lifted witness failed verification");
        verdict.kind = SearchVerdict::Kind::feasible;
        verdict.witness = std::move(lifted.code);
        return verdict;
      }
      if (sub.kind == SearchVerdict::Kind::infeasible) {
        verdict.kind = SearchVerdict::Kind::infeasible;
        return verdict;
      }
      verdict.kind = SearchVerdict::Kind::exhausted;
      verdict.detail = "embedded unicast search exhausted: " + sub.detail;
      return verdict;
    }
  }

  verdict.kind = SearchVerdict::Kind::exhausted;
  verdict.strategy = "enumeration";
  verdict.detail = "code space exceeds max_codes";
  return verdict;
}

}  // namespace necred
