#include "necred/evaluate.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>
#include <thread>

namespace necred {

namespace {

[[noreturn]] void mismatch(const std::string& detail) {
  throw std::invalid_argument("code/instance mismatch: " + detail);
}

BigInt table_rows(const std::vector<BigInt>& alphabets) {
  BigInt rows = 1;
  for (const auto& a : alphabets) rows *= a;
  return rows;
}

}  // namespace

CodeShape CodeShape::for_unicast(const NetworkCode& code, const UnicastInstance& inst) {
  auto rep = validate_instance(inst);
  if (!rep.ok()) mismatch("invalid instance: " + rep.violations.front());
  if (code.n < 1) mismatch("non-positive block length");
  const int k = static_cast<int>(inst.pairs.size());
  if (code.message_bits != k * code.n)
    mismatch("unicast code must have message_bits = k*n");

  CodeShape s;
  s.graph_ = &inst.graph;
  s.code_ = &code;
  s.message_bits_ = code.message_bits;
  s.slot_bits_.assign(k, code.n);
  for (int i = 0; i < k; ++i) {
    s.source_slot_.emplace(inst.pairs[i].source, i);
    s.terminals_.emplace_back(inst.pairs[i].terminal, i);
  }
  s.check_functions();
  return s;
}

CodeShape CodeShape::for_nec(const NetworkCode& code, const NECInstance& inst) {
  auto rep = validate_instance(inst);
  if (!rep.ok()) mismatch("invalid instance: " + rep.violations.front());
  if (code.n < 1) mismatch("non-positive block length");
  if (code.message_bits < 1) mismatch("non-positive message width");

  CodeShape s;
  s.graph_ = &inst.graph;
  s.code_ = &code;
  s.message_bits_ = code.message_bits;
  s.slot_bits_.assign(1, code.message_bits);
  s.source_slot_.emplace(inst.source, 0);
  s.terminals_.emplace_back(inst.terminal, 0);
  s.check_functions();
  return s;
}

void CodeShape::check_functions() const {
  GraphIndex ix(*graph_);
  for (const auto& e : graph_->edges)
    if (!code_->edge_functions.count(e.id)) mismatch("missing function for edge " + e.id);
  for (const auto& [id, fn] : code_->edge_functions) {
    (void)fn;
    if (ix.edge_index(id) < 0) mismatch("function for unknown edge " + id);
  }

  auto input_alphabet = [&](const CodeInput& in, const NodeId& node,
                            const std::string& where) -> BigInt {
    if (in.kind == CodeInput::Kind::message) {
      auto it = source_slot_.find(node);
      if (it == source_slot_.end()) mismatch(where + " reads a message at a non-source node");
      if (in.slot != it->second)
        mismatch(where + " reads message slot " + std::to_string(in.slot) +
                 " not owned by node " + node);
      return BigInt(1) << slot_bits_[in.slot];
    }
    int ei = ix.edge_index(in.edge);
    if (ei < 0) mismatch(where + " reads unknown edge " + in.edge);
    const Edge& src = graph_->edges[ei];
    if (src.to != node) mismatch(where + " reads edge " + in.edge + " not incoming to " + node);
    return BigInt(1) << (src.capacity * code_->n);
  };

  auto check_table = [&](const FunctionTable& fn, const NodeId& node, const BigInt& codomain,
                         const std::string& where) {
    std::set<std::pair<int, std::string>> seen;
    std::vector<BigInt> alphas;
    for (const auto& in : fn.inputs) {
      if (!seen.insert({in.kind == CodeInput::Kind::message, in.kind == CodeInput::Kind::message
                                                                  ? std::to_string(in.slot)
                                                                  : in.edge})
               .second)
        mismatch(where + " lists a duplicate input");
      alphas.push_back(input_alphabet(in, node, where));
    }
    BigInt rows = table_rows(alphas);
    if (rows > BigInt(1) << 28) throw SizeRefusal(where + ": table too large", rows);
    if (BigInt(fn.table.size()) != rows)
      mismatch(where + " table length " + std::to_string(fn.table.size()) +
               " does not match input space " + rows.str());
    for (auto v : fn.table)
      if (BigInt(v) >= codomain) mismatch(where + " table value out of codomain");
  };

  for (const auto& e : graph_->edges) {
    if (e.capacity * code_->n > kMaxAlphabetBits)
      throw SizeRefusal("edge alphabet too wide: " + e.id, BigInt(1) << (e.capacity * code_->n));
    const auto& fn = code_->edge_functions.at(e.id);
    check_table(fn, e.from, BigInt(1) << (e.capacity * code_->n), "edge " + e.id);
  }

  std::set<NodeId> expected;
  for (const auto& [t, slot] : terminals_) expected.insert(t);
  for (const auto& [t, fn] : code_->decoders) {
    (void)fn;
    if (!expected.count(t)) mismatch("decoder at non-terminal node " + t);
  }
  for (const auto& [t, slot] : terminals_) {
    auto it = code_->decoders.find(t);
    if (it == code_->decoders.end()) mismatch("missing decoder for terminal " + t);
    for (const auto& in : it->second.inputs)
      if (in.kind == CodeInput::Kind::message) mismatch("decoder at " + t + " reads a message");
    check_table(it->second, t, BigInt(1) << slot_bits_[slot], "decoder " + t);
  }
}

std::vector<std::uint64_t> CodeShape::unpack_message(std::uint64_t packed) const {
  std::vector<std::uint64_t> slots(slot_bits_.size());
  int shift = 0;
  for (std::size_t i = 0; i < slot_bits_.size(); ++i) {
    slots[i] = (packed >> shift) & (pow2(slot_bits_[i]) - 1);
    shift += slot_bits_[i];
  }
  return slots;
}

std::uint64_t CodeShape::pack_message(const std::vector<std::uint64_t>& slots) const {
  std::uint64_t packed = 0;
  int shift = 0;
  for (std::size_t i = 0; i < slot_bits_.size(); ++i) {
    packed |= slots[i] << shift;
    shift += slot_bits_[i];
  }
  return packed;
}

CompiledCode::CompiledCode(const CodeShape& shape) : shape_(&shape) {
  const NetworkGraph& g = shape.graph();
  GraphIndex ix(g);
  auto order = ix.edge_eval_order();

  auto compile = [&](const FunctionTable& fn, std::uint32_t out) {
    Op op;
    op.out = out;
    op.table = fn.table.data();
    for (const auto& in : fn.inputs) {
      if (in.kind == CodeInput::Kind::message) {
        op.inputs.push_back({true, static_cast<std::uint32_t>(in.slot)});
        op.alphabets.push_back(pow2(shape.slot_width(in.slot)));
      } else {
        int ei = ix.edge_index(in.edge);
        op.inputs.push_back({false, static_cast<std::uint32_t>(ei)});
        op.alphabets.push_back(pow2(g.edges[ei].capacity * shape.code_->n));
      }
    }
    return op;
  };

  for (int e : order)
    edge_ops_.push_back(compile(shape.code_->edge_functions.at(g.edges[e].id),
                                static_cast<std::uint32_t>(e)));
  for (std::size_t t = 0; t < shape.terminals().size(); ++t)
    decoder_ops_.push_back(compile(shape.code_->decoders.at(shape.terminals()[t].first),
                                   static_cast<std::uint32_t>(t)));

  transmitted_.resize(g.edges.size());
  received_.resize(g.edges.size());
  decoded_.resize(shape.terminals().size());
}

void CompiledCode::run(const std::vector<std::uint64_t>& slots,
                       const std::vector<std::uint64_t>& error) const {
  const bool with_error = !error.empty();
  for (const Op& op : edge_ops_) {
    std::uint64_t idx = 0;
    for (std::size_t j = 0; j < op.inputs.size(); ++j) {
      const Source& src = op.inputs[j];
      idx = idx * op.alphabets[j] + (src.is_message ? slots[src.index] : received_[src.index]);
    }
    const std::uint64_t v = op.table[idx];
    transmitted_[op.out] = v;
    received_[op.out] = with_error ? (v ^ error[op.out]) : v;
  }
  for (const Op& op : decoder_ops_) {
    std::uint64_t idx = 0;
    for (std::size_t j = 0; j < op.inputs.size(); ++j)
      idx = idx * op.alphabets[j] + received_[op.inputs[j].index];
    decoded_[op.out] = op.table[idx];
  }
}

EvalTrace CompiledCode::trace() const {
  EvalTrace tr;
  const NetworkGraph& g = shape_->graph();
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    tr.transmitted[g.edges[e].id] = transmitted_[e];
    tr.received[g.edges[e].id] = received_[e];
  }
  for (std::size_t t = 0; t < shape_->terminals().size(); ++t)
    tr.decoded[shape_->terminals()[t].first] = decoded_[t];
  return tr;
}

namespace {

std::vector<std::uint64_t> dense_error(const CodeShape& shape, int n, const ErrorPattern& err) {
  const NetworkGraph& g = shape.graph();
  GraphIndex ix(g);
  std::vector<std::uint64_t> dense(g.edges.size(), 0);
  for (const auto& [id, v] : err.values) {
    int e = ix.edge_index(id);
    if (e < 0) throw std::invalid_argument("error pattern names unknown edge " + id);
    if (v >= pow2(g.edges[e].capacity * n))
      throw std::invalid_argument("error value out of alphabet on edge " + id);
    dense[e] = v;
  }
  return dense;
}

EvalTrace evaluate_impl(const CodeShape& shape, int n, const std::vector<std::uint64_t>& slots,
                        const ErrorPattern& err) {
  if (static_cast<int>(slots.size()) != shape.slot_count())
    throw std::invalid_argument("message slot count mismatch");
  for (int i = 0; i < shape.slot_count(); ++i)
    if (slots[i] >= pow2(shape.slot_width(i)))
      throw std::invalid_argument("message value out of range");
  CompiledCode cc(shape);
  cc.run(slots, dense_error(shape, n, err));
  return cc.trace();
}

}  // namespace

EvalTrace evaluate(const NetworkCode& code, const UnicastInstance& inst,
                   const std::vector<std::uint64_t>& slots, const ErrorPattern& err) {
  if (!err.support().empty())
    throw std::invalid_argument("unicast channels are error-free");
  return evaluate_impl(CodeShape::for_unicast(code, inst), code.n, slots, err);
}

EvalTrace evaluate(const NetworkCode& code, const NECInstance& inst,
                   const std::vector<std::uint64_t>& slots, const ErrorPattern& err) {
  return evaluate_impl(CodeShape::for_nec(code, inst), code.n, slots, err);
}

namespace {

// Shards [0, total) into contiguous ranges and runs body(worker, lo, hi).
void parallel_ranges_impl(std::uint64_t total, int jobs,
                          const std::function<void(int, std::uint64_t, std::uint64_t)>& body) {
  if (jobs <= 1 || total < 2) {
    body(0, 0, total);
    return;
  }
  const int workers = static_cast<int>(std::min<std::uint64_t>(jobs, total));
  std::vector<std::thread> threads;
  const std::uint64_t chunk = (total + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::uint64_t lo = chunk * w;
    const std::uint64_t hi = std::min(total, lo + chunk);
    threads.emplace_back([&, w, lo, hi] { body(w, lo, hi); });
  }
  for (auto& t : threads) t.join();
}

}  // namespace

NecCheckResult check_zero_error(const NetworkCode& code, const NECInstance& inst, int jobs) {
  auto shape = CodeShape::for_nec(code, inst);
  PatternEnumerator pats(inst, code.n);
  if (code.message_bits > 62)
    throw SizeRefusal("exhaustive check too large", BigInt(1) << code.message_bits);
  const std::uint64_t messages = pow2(code.message_bits);
  BigInt evals = BigInt(messages) * pats.count();
  if (evals > kMaxExhaustiveEvals) throw SizeRefusal("exhaustive check too large", evals);

  struct Hit {
    std::uint64_t message;
    std::uint64_t pattern_index;
    std::uint64_t decoded;
  };
  std::vector<std::optional<Hit>> hits(std::max(jobs, 1));

  parallel_ranges_impl(messages, jobs, [&](int w, std::uint64_t lo, std::uint64_t hi) {
    CompiledCode cc(shape);
    auto cur = pats.cursor();
    for (std::uint64_t m = lo; m < hi; ++m) {
      const auto slots = shape.unpack_message(m);
      cur.reset();
      while (cur.next()) {
        cc.run(slots, cur.values());
        if (cc.decoded()[0] != m) {
          hits[w] = Hit{m, cur.index(), cc.decoded()[0]};
          return;
        }
      }
    }
  });

  NecCheckResult result;
  result.evaluations = evals;
  std::optional<Hit> best;
  for (const auto& h : hits)
    if (h && (!best || h->message < best->message)) best = h;
  if (best) {
    NecCounterexample cex;
    cex.message = best->message;
    cex.pattern = pats.at(BigInt(best->pattern_index));
    cex.decoded = best->decoded;
    result.counterexample = cex;
  }
  return result;
}

UnicastCheckResult check_unicast_zero_error(const NetworkCode& code, const UnicastInstance& inst,
                                            int jobs) {
  auto shape = CodeShape::for_unicast(code, inst);
  if (code.message_bits > 40)
    throw SizeRefusal("exhaustive check too large", BigInt(1) << code.message_bits);
  const std::uint64_t messages = pow2(code.message_bits);

  struct Hit {
    std::uint64_t message;
    std::size_t terminal;
    std::uint64_t decoded;
  };
  std::vector<std::optional<Hit>> hits(std::max(jobs, 1));
  const std::vector<std::uint64_t> no_error;

  parallel_ranges_impl(messages, jobs, [&](int w, std::uint64_t lo, std::uint64_t hi) {
    CompiledCode cc(shape);
    for (std::uint64_t m = lo; m < hi; ++m) {
      const auto slots = shape.unpack_message(m);
      cc.run(slots, no_error);
      for (std::size_t t = 0; t < shape.terminals().size(); ++t) {
        if (cc.decoded()[t] != slots[shape.terminals()[t].second]) {
          hits[w] = Hit{m, t, cc.decoded()[t]};
          return;
        }
      }
    }
  });

  UnicastCheckResult result;
  result.evaluations = BigInt(messages);
  std::optional<Hit> best;
  for (const auto& h : hits)
    if (h && (!best || h->message < best->message)) best = h;
  if (best) {
    UnicastCounterexample cex;
    cex.message = best->message;
    cex.message_tuple = shape.unpack_message(best->message);
    cex.failed_terminal = shape.terminals()[best->terminal].first;
    cex.decoded = best->decoded;
    result.counterexample = cex;
  }
  return result;
}

Rational empirical_error_prob(const NetworkCode& code, const NECInstance& inst, int jobs) {
  auto shape = CodeShape::for_nec(code, inst);
  PatternEnumerator pats(inst, code.n);
  if (code.message_bits > 62)
    throw SizeRefusal("exhaustive check too large", BigInt(1) << code.message_bits);
  const std::uint64_t messages = pow2(code.message_bits);
  BigInt evals = BigInt(messages) * pats.count();
  if (evals > kMaxExhaustiveEvals) throw SizeRefusal("exhaustive check too large", evals);

  std::vector<std::uint64_t> bad_counts(std::max(jobs, 1), 0);
  parallel_ranges_impl(messages, jobs, [&](int w, std::uint64_t lo, std::uint64_t hi) {
    CompiledCode cc(shape);
    auto cur = pats.cursor();
    for (std::uint64_t m = lo; m < hi; ++m) {
      const auto slots = shape.unpack_message(m);
      cur.reset();
      while (cur.next()) {
        cc.run(slots, cur.values());
        if (cc.decoded()[0] != m) {
          ++bad_counts[w];
          break;
        }
      }
    }
  });

  std::uint64_t bad = 0;
  for (auto c : bad_counts) bad += c;
  return Rational(BigInt(bad), BigInt(messages));
}

}  // namespace necred
