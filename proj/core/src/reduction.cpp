#include "necred/reduction.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

namespace necred {

namespace {

std::string branch_edge_name(BranchRole role, int i) {
  return std::string(to_string(role)) + "_" + std::to_string(i);
}

}  // namespace

BranchWiring BranchWiring::from_instance(const NECInstance& inst) {
  auto rep = validate_instance(inst);
  if (!rep.ok())
    throw std::invalid_argument("invalid reduced instance: " + rep.violations.front());
  if (inst.roles.empty()) throw std::invalid_argument("instance carries no branch roles");

  int k = 0;
  for (const auto& [id, tag] : inst.roles)
    if (tag.role != BranchRole::internal) k = std::max(k, tag.branch);
  if (k == 0) throw std::invalid_argument("roles contain no branch edges");

  std::map<EdgeId, const Edge*> by_id;
  for (const auto& e : inst.graph.edges) by_id.emplace(e.id, &e);

  BranchWiring w;
  w.source = inst.source;
  w.terminal = inst.terminal;
  w.branches.resize(k);
  std::vector<std::map<BranchRole, EdgeId>> roles(k + 1);
  for (const auto& [id, tag] : inst.roles)
    if (tag.role != BranchRole::internal) roles[tag.branch][tag.role] = id;
  for (int i = 1; i <= k; ++i) {
    auto& r = roles[i];
    for (BranchRole role : {BranchRole::a, BranchRole::x, BranchRole::y, BranchRole::z,
                            BranchRole::zp, BranchRole::b})
      if (!r.count(role))
        throw std::invalid_argument("branch " + std::to_string(i) + " is missing role " +
                                    to_string(role));
    Branch& br = w.branches[i - 1];
    br.a = r.at(BranchRole::a);
    br.x = r.at(BranchRole::x);
    br.y = r.at(BranchRole::y);
    br.z = r.at(BranchRole::z);
    br.zp = r.at(BranchRole::zp);
    br.b = r.at(BranchRole::b);
    br.fanout = by_id.at(br.a)->to;
    br.combiner = by_id.at(br.x)->to;
    br.pair_source = by_id.at(br.z)->to;
    br.pair_terminal = by_id.at(br.zp)->from;
  }
  return w;
}

ReduceResult reduce(const UnicastInstance& inst) {
  auto rep = validate_instance(inst);
  if (!rep.ok()) throw std::invalid_argument("invalid unicast instance: " + rep.violations.front());

  const int k = static_cast<int>(inst.pairs.size());
  NECInstance out;
  out.graph = inst.graph;

  std::set<NodeId> node_taken(inst.graph.nodes.begin(), inst.graph.nodes.end());
  std::set<EdgeId> edge_taken;
  for (const auto& e : inst.graph.edges) edge_taken.insert(e.id);

  auto fresh_node = [&](std::string base) {
    while (node_taken.count(base)) base.insert(base.begin(), '_');
    node_taken.insert(base);
    return base;
  };
  auto fresh_edge = [&](std::string base) {
    while (edge_taken.count(base)) base.insert(base.begin(), '_');
    edge_taken.insert(base);
    return base;
  };

  BranchWiring wiring;
  wiring.source = fresh_node("s");
  wiring.terminal = fresh_node("t");
  out.source = wiring.source;
  out.terminal = wiring.terminal;
  out.graph.nodes.push_back(wiring.source);
  out.graph.nodes.push_back(wiring.terminal);

  for (const auto& e : inst.graph.edges) out.roles[e.id] = {BranchRole::internal, 0};

  auto add_edge = [&](EdgeId id, const NodeId& from, const NodeId& to, BranchRole role, int i) {
    out.graph.edges.push_back(Edge{id, from, to, 1});
    out.roles[id] = {role, i};
    return id;
  };

  wiring.branches.resize(k);
  for (int i = 1; i <= k; ++i) {
    BranchWiring::Branch& br = wiring.branches[i - 1];
    br.pair_source = inst.pairs[i - 1].source;
    br.pair_terminal = inst.pairs[i - 1].terminal;
    br.fanout = fresh_node("u_" + std::to_string(i));
    br.combiner = fresh_node("B_" + std::to_string(i));
    out.graph.nodes.push_back(br.fanout);
    out.graph.nodes.push_back(br.combiner);
    br.a = add_edge(fresh_edge(branch_edge_name(BranchRole::a, i)), wiring.source, br.fanout,
                    BranchRole::a, i);
    br.x = add_edge(fresh_edge(branch_edge_name(BranchRole::x, i)), br.fanout, br.combiner,
                    BranchRole::x, i);
    br.y = add_edge(fresh_edge(branch_edge_name(BranchRole::y, i)), br.fanout, br.combiner,
                    BranchRole::y, i);
    br.z = add_edge(fresh_edge(branch_edge_name(BranchRole::z, i)), br.fanout, br.pair_source,
                    BranchRole::z, i);
    br.zp = add_edge(fresh_edge(branch_edge_name(BranchRole::zp, i)), br.pair_terminal,
                     br.combiner, BranchRole::zp, i);
    br.b = add_edge(fresh_edge(branch_edge_name(BranchRole::b, i)), br.combiner, wiring.terminal,
                    BranchRole::b, i);
  }

  // Every edge is jammable except the a and b edges.
  for (const auto& e : out.graph.edges) {
    const RoleTag tag = out.roles.at(e.id);
    if (tag.role == BranchRole::a || tag.role == BranchRole::b) continue;
    out.adversary.push_back({e.id});
  }

  return {std::move(out), std::move(wiring)};
}

UnicastInstance embedded_unicast(const NECInstance& reduced) {
  BranchWiring wiring = BranchWiring::from_instance(reduced);
  std::set<NodeId> gadget_nodes{wiring.source, wiring.terminal};
  std::set<EdgeId> gadget_edges;
  for (const auto& br : wiring.branches) {
    gadget_nodes.insert(br.fanout);
    gadget_nodes.insert(br.combiner);
    for (const auto& e : {br.a, br.x, br.y, br.z, br.zp, br.b}) gadget_edges.insert(e);
  }

  UnicastInstance inst;
  for (const auto& n : reduced.graph.nodes)
    if (!gadget_nodes.count(n)) inst.graph.nodes.push_back(n);
  for (const auto& e : reduced.graph.edges)
    if (!gadget_edges.count(e.id)) inst.graph.edges.push_back(e);
  for (const auto& br : wiring.branches)
    inst.pairs.push_back({br.pair_source, br.pair_terminal});
  return inst;
}

std::vector<std::string> reduced_instance_diagnostics(const NECInstance& inst) {
  std::vector<std::string> out;
  auto rep = validate_instance(inst);
  if (!rep.ok()) return rep.violations;

  BranchWiring wiring;
  try {
    wiring = BranchWiring::from_instance(inst);
  } catch (const std::invalid_argument& e) {
    out.push_back(e.what());
    return out;
  }

  GraphIndex ix(inst.graph);
  std::set<NodeId> gadget_nodes{wiring.source, wiring.terminal};
  std::set<EdgeId> role_edges;
  std::set<EdgeId> unjammable;
  for (const auto& br : wiring.branches) {
    gadget_nodes.insert(br.fanout);
    gadget_nodes.insert(br.combiner);
    for (const auto& e : {br.a, br.x, br.y, br.z, br.zp, br.b}) role_edges.insert(e);
    unjammable.insert(br.a);
    unjammable.insert(br.b);
  }

  auto degree_check = [&](const NodeId& node, std::set<EdgeId> want_in, std::set<EdgeId> want_out) {
    std::set<EdgeId> got_in, got_out;
    int v = ix.node_index(node);
    for (int e : ix.incoming(v)) got_in.insert(inst.graph.edges[e].id);
    for (int e : ix.outgoing(v)) got_out.insert(inst.graph.edges[e].id);
    if (got_in != want_in) out.push_back("node " + node + " has unexpected incoming edges");
    if (got_out != want_out) out.push_back("node " + node + " has unexpected outgoing edges");
  };

  std::set<EdgeId> a_edges, b_edges;
  for (const auto& br : wiring.branches) {
    a_edges.insert(br.a);
    b_edges.insert(br.b);
    degree_check(br.fanout, {br.a}, {br.x, br.y, br.z});
    degree_check(br.combiner, {br.x, br.y, br.zp}, {br.b});
  }
  degree_check(wiring.source, {}, a_edges);
  degree_check(wiring.terminal, b_edges, {});

  for (const auto& e : inst.graph.edges) {
    if (role_edges.count(e.id)) continue;
    if (gadget_nodes.count(e.from) || gadget_nodes.count(e.to))
      out.push_back("non-gadget edge " + e.id + " touches a gadget node");
  }

  auto emb = embedded_unicast(inst);
  auto emb_rep = validate_instance(emb);
  for (const auto& v : emb_rep.violations) out.push_back("embedded instance: " + v);

  // The adversary must be exactly the singletons over everything but a/b.
  std::set<std::vector<EdgeId>> want, got;
  for (const auto& e : inst.graph.edges)
    if (!unjammable.count(e.id)) want.insert({e.id});
  AdversaryClass adv(inst.graph, inst.adversary);
  for (auto& set : adv.to_edge_ids(inst.graph)) got.insert(set);
  if (want != got)
    out.push_back("adversary is not the singleton collection over non-a/b edges");

  return out;
}

namespace {

// Value map of one edge function whose only permitted input is `input_edge`
// (or nothing, for constant tables), as a function of that input.
std::vector<std::uint64_t> unary_edge_map(const FunctionTable& fn, const EdgeId& input_edge,
                                          std::uint64_t domain) {
  std::vector<std::uint64_t> g(domain, 0);
  if (fn.inputs.empty()) {
    std::fill(g.begin(), g.end(), fn.table.at(0));
    return g;
  }
  if (fn.inputs.size() != 1 || fn.inputs[0].kind != CodeInput::Kind::edge ||
      fn.inputs[0].edge != input_edge)
    throw std::invalid_argument("gadget edge function has unexpected inputs");
  for (std::uint64_t v = 0; v < domain; ++v) g[v] = fn.table.at(v);
  return g;
}

std::vector<std::uint64_t> identity_table(std::uint64_t domain) {
  std::vector<std::uint64_t> t(domain);
  std::iota(t.begin(), t.end(), 0);
  return t;
}

// Re-indexes `fn` so that the input at position `pos` is read through `g`:
// new_table[..., v, ...] = old_table[..., g(v), ...].
FunctionTable precompose_input(const FunctionTable& fn, std::size_t pos,
                               const std::vector<std::uint64_t>& g,
                               const std::vector<std::uint64_t>& alphabets) {
  FunctionTable out = fn;
  std::vector<std::uint64_t> digits(alphabets.size(), 0);
  const std::size_t rows = fn.table.size();
  for (std::size_t row = 0; row < rows; ++row) {
    std::size_t r = row;
    for (std::size_t j = alphabets.size(); j-- > 0;) {
      digits[j] = r % alphabets[j];
      r /= alphabets[j];
    }
    digits[pos] = g[digits[pos]];
    std::size_t mapped = 0;
    for (std::size_t j = 0; j < alphabets.size(); ++j)
      mapped = mapped * alphabets[j] + digits[j];
    out.table[row] = fn.table[mapped];
  }
  return out;
}

std::vector<std::uint64_t> input_alphabets(const FunctionTable& fn, const GraphIndex& ix, int n,
                                           const std::vector<int>& slot_bits) {
  std::vector<std::uint64_t> alphas;
  for (const auto& in : fn.inputs) {
    if (in.kind == CodeInput::Kind::message) alphas.push_back(pow2(slot_bits.at(in.slot)));
    else alphas.push_back(pow2(ix.graph().edges[ix.edge_index(in.edge)].capacity * n));
  }
  return alphas;
}

}  // namespace

LiftResult lift_code(const NetworkCode& ucode, const UnicastInstance& uinst,
                     const NECInstance& reduced) {
  BranchWiring wiring = BranchWiring::from_instance(reduced);
  const int k = wiring.k();
  if (k != static_cast<int>(uinst.pairs.size()))
    throw std::invalid_argument("branch count does not match pair count");
  for (int i = 0; i < k; ++i)
    if (wiring.branches[i].pair_source != uinst.pairs[i].source ||
        wiring.branches[i].pair_terminal != uinst.pairs[i].terminal)
      throw std::invalid_argument("reduced instance does not embed the given unicast instance");
  (void)CodeShape::for_unicast(ucode, uinst);

  const int n = ucode.n;
  if (k * n > 24) throw SizeRefusal("lifted source tables too large", BigInt(1) << (k * n));
  const std::uint64_t branch_alpha = pow2(n);
  const std::uint64_t msgs = pow2(k * n);

  LiftResult result;
  auto check = check_unicast_zero_error(ucode, uinst);
  result.premise_ok = check.ok();
  result.premise_counterexample = check.counterexample;

  NetworkCode& code = result.code;
  code.n = n;
  code.message_bits = k * n;

  for (int i = 0; i < k; ++i) {
    const auto& br = wiring.branches[i];
    FunctionTable a;
    a.inputs = {CodeInput::for_message(0)};
    a.table.resize(msgs);
    for (std::uint64_t m = 0; m < msgs; ++m)
      a.table[m] = (m >> (i * n)) & (branch_alpha - 1);
    code.edge_functions[br.a] = std::move(a);

    for (const EdgeId* relay : {&br.x, &br.y, &br.z})
      code.edge_functions[*relay] =
          FunctionTable{{CodeInput::for_edge(br.a)}, identity_table(branch_alpha)};

    // z' applies the pair terminal's unicast decoder.
    code.edge_functions[br.zp] = ucode.decoders.at(br.pair_terminal);

    FunctionTable b;
    b.inputs = {CodeInput::for_edge(br.x), CodeInput::for_edge(br.y), CodeInput::for_edge(br.zp)};
    b.table.resize(branch_alpha * branch_alpha * branch_alpha);
    for (std::uint64_t vx = 0; vx < branch_alpha; ++vx)
      for (std::uint64_t vy = 0; vy < branch_alpha; ++vy)
        for (std::uint64_t vz = 0; vz < branch_alpha; ++vz)
          b.table[(vx * branch_alpha + vy) * branch_alpha + vz] =
              (vx & vy) | (vx & vz) | (vy & vz);  // bitwise majority
    code.edge_functions[br.b] = std::move(b);
  }

  // Embedded network functions, with each pair source's message slot rebound
  // to its incoming z edge.
  std::map<NodeId, EdgeId> z_of_source;
  for (const auto& br : wiring.branches) z_of_source.emplace(br.pair_source, br.z);
  for (const auto& [id, fn] : ucode.edge_functions) {
    FunctionTable lifted = fn;
    for (auto& in : lifted.inputs)
      if (in.kind == CodeInput::Kind::message)
        in = CodeInput::for_edge(z_of_source.at(uinst.pairs[in.slot].source));
    code.edge_functions[id] = std::move(lifted);
  }

  // Terminal decoder: identity on the (b_1, ..., b_k) tuple.
  FunctionTable dec;
  for (const auto& br : wiring.branches) dec.inputs.push_back(CodeInput::for_edge(br.b));
  dec.table.resize(msgs);
  for (std::uint64_t row = 0; row < msgs; ++row) {
    std::uint64_t packed = 0;
    std::uint64_t r = row;
    for (int i = k - 1; i >= 0; --i) {
      packed |= (r % branch_alpha) << (i * n);
      r /= branch_alpha;
    }
    dec.table[row] = packed;
  }
  code.decoders[wiring.terminal] = std::move(dec);

  (void)CodeShape::for_nec(code, reduced);
  return result;
}

bool is_permutation(const std::vector<std::uint64_t>& map) {
  std::vector<char> seen(map.size(), 0);
  for (auto v : map) {
    if (v >= map.size() || seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

std::variant<BijectionChain, BijectionViolation> build_bijection_chain(
    const NetworkCode& ncode, const NECInstance& reduced) {
  BranchWiring wiring = BranchWiring::from_instance(reduced);
  const int k = wiring.k();
  auto shape = CodeShape::for_nec(ncode, reduced);
  if (ncode.message_bits != k * ncode.n)
    throw std::invalid_argument("chain requires a rate-k code (message_bits = k*n)");
  if (ncode.message_bits > 24)
    throw SizeRefusal("exhaustive simulation too large", BigInt(1) << ncode.message_bits);

  const int n = ncode.n;
  const std::uint64_t alpha = pow2(n);
  const std::uint64_t msgs = pow2(ncode.message_bits);
  constexpr std::uint64_t unset = UINT64_MAX;

  GraphIndex ix(reduced.graph);
  struct EdgeSet {
    int a, x, y, z, zp, b;
  };
  std::vector<EdgeSet> eix(k);
  for (int i = 0; i < k; ++i) {
    const auto& br = wiring.branches[i];
    eix[i] = {ix.edge_index(br.a), ix.edge_index(br.x), ix.edge_index(br.y),
              ix.edge_index(br.z), ix.edge_index(br.zp), ix.edge_index(br.b)};
  }

  // Relations checked per branch, in order. fwd/rev give the partial map and
  // its inverse; reps remember a witness message per assigned value.
  struct Relation {
    const char* src;
    const char* dst;
    int src_edge, dst_edge;
    std::vector<std::uint64_t> fwd, rev, rep_src, rep_dst;
  };
  std::vector<std::vector<Relation>> rels(k);
  for (int i = 0; i < k; ++i) {
    auto make = [&](const char* s, const char* d, int se, int de) {
      return Relation{s,
                      d,
                      se,
                      de,
                      std::vector<std::uint64_t>(alpha, unset),
                      std::vector<std::uint64_t>(alpha, unset),
                      std::vector<std::uint64_t>(alpha, 0),
                      std::vector<std::uint64_t>(alpha, 0)};
    };
    rels[i].push_back(make("a", "x", eix[i].a, eix[i].x));
    rels[i].push_back(make("a", "y", eix[i].a, eix[i].y));
    rels[i].push_back(make("a", "z", eix[i].a, eix[i].z));
    rels[i].push_back(make("x", "b", eix[i].x, eix[i].b));
    rels[i].push_back(make("b", "zp", eix[i].b, eix[i].zp));
  }

  // Cut-signal tuples a(m) and b(m) must be injective across messages.
  std::vector<std::uint64_t> a_tuple_rep(msgs, unset), b_tuple_rep(msgs, unset);

  CompiledCode cc(shape);
  const std::vector<std::uint64_t> no_error;
  for (std::uint64_t m = 0; m < msgs; ++m) {
    cc.run(shape.unpack_message(m), no_error);
    const auto& val = cc.transmitted();
    std::uint64_t a_packed = 0, b_packed = 0;
    for (int i = 0; i < k; ++i) {
      a_packed |= val[eix[i].a] << (i * n);
      b_packed |= val[eix[i].b] << (i * n);
    }
    if (a_tuple_rep[a_packed] != unset)
      return BijectionViolation{0, "a tuple repeats across messages", a_tuple_rep[a_packed], m};
    if (b_tuple_rep[b_packed] != unset)
      return BijectionViolation{0, "b tuple repeats across messages", b_tuple_rep[b_packed], m};
    a_tuple_rep[a_packed] = m;
    b_tuple_rep[b_packed] = m;
    for (int i = 0; i < k; ++i) {
      for (auto& rel : rels[i]) {
        const std::uint64_t v = val[rel.src_edge];
        const std::uint64_t w = val[rel.dst_edge];
        if (rel.fwd[v] == unset) {
          if (rel.rev[w] != unset && rel.rev[w] != v)
            return BijectionViolation{
                i + 1,
                std::string(rel.dst) + "_" + std::to_string(i + 1) + " not injective in " +
                    rel.src + "_" + std::to_string(i + 1),
                rel.rep_dst[w], m};
          rel.fwd[v] = w;
          rel.rev[w] = v;
          rel.rep_src[v] = m;
          rel.rep_dst[w] = m;
        } else if (rel.fwd[v] != w) {
          return BijectionViolation{
              i + 1,
              std::string(rel.dst) + "_" + std::to_string(i + 1) + " not a function of " +
                  rel.src + "_" + std::to_string(i + 1),
              rel.rep_src[v], m};
        }
      }
    }
  }

  for (int i = 0; i < k; ++i)
    for (auto& rel : rels[i])
      for (std::uint64_t v = 0; v < alpha; ++v)
        if (rel.fwd[v] == unset)
          return BijectionViolation{
              i + 1,
              std::string(rel.src) + "_" + std::to_string(i + 1) + " never takes value " +
                  std::to_string(v),
              0, 0};

  BijectionChain chain;
  chain.branches.resize(k);
  for (int i = 0; i < k; ++i) {
    chain.branches[i].a_to_x = std::move(rels[i][0].fwd);
    chain.branches[i].a_to_z = std::move(rels[i][2].fwd);
    chain.branches[i].x_to_b = std::move(rels[i][3].fwd);
    chain.branches[i].b_to_zp = std::move(rels[i][4].fwd);
  }
  return chain;
}

NetworkCode normalize_z_to_identity(const NetworkCode& ncode, const NECInstance& reduced) {
  BranchWiring wiring = BranchWiring::from_instance(reduced);
  GraphIndex ix(reduced.graph);
  const std::uint64_t alpha = pow2(ncode.n);

  NetworkCode out = ncode;
  std::vector<int> slot_bits{ncode.message_bits};
  for (const auto& br : wiring.branches) {
    const FunctionTable& old_z = ncode.edge_functions.at(br.z);
    auto g = unary_edge_map(old_z, br.a, alpha);
    out.edge_functions[br.z] = FunctionTable{{CodeInput::for_edge(br.a)}, identity_table(alpha)};

    for (auto& [id, fn] : out.edge_functions) {
      if (id == br.z) continue;
      for (std::size_t pos = 0; pos < fn.inputs.size(); ++pos)
        if (fn.inputs[pos].kind == CodeInput::Kind::edge && fn.inputs[pos].edge == br.z)
          fn = precompose_input(fn, pos, g, input_alphabets(fn, ix, ncode.n, slot_bits));
    }
  }
  return out;
}

ExtractOutcome extract_code(const NetworkCode& ncode, const NECInstance& reduced, int jobs) {
  BranchWiring wiring = BranchWiring::from_instance(reduced);
  const int k = wiring.k();
  if (ncode.message_bits != k * ncode.n)
    throw std::invalid_argument("extract_code requires a rate-k code (message_bits = k*n)");

  auto premise = check_zero_error(ncode, reduced, jobs);
  if (!premise.ok()) return ExtractPremiseFailure{*premise.counterexample};

  // Step-4 rewrite: if some z table is non-injective while the code is still
  // zero-error, replace z with a relay of a and push the old table into z's
  // consumers. Verified by re-running the zero-error check.
  NetworkCode working = ncode;
  bool normalized = false;
  const std::uint64_t alpha = pow2(ncode.n);
  for (const auto& br : wiring.branches) {
    auto g = unary_edge_map(working.edge_functions.at(br.z), br.a, alpha);
    if (!is_permutation(g)) {
      working = normalize_z_to_identity(working, reduced);
      normalized = true;
      auto recheck = check_zero_error(working, reduced, jobs);
      if (!recheck.ok()) return ExtractPremiseFailure{*recheck.counterexample};
      break;
    }
  }

  auto chain_or = build_bijection_chain(working, reduced);
  if (std::holds_alternative<BijectionViolation>(chain_or))
    return std::get<BijectionViolation>(chain_or);
  BijectionChain chain = std::get<BijectionChain>(std::move(chain_or));

  UnicastInstance uinst = embedded_unicast(reduced);
  GraphIndex ix(reduced.graph);

  NetworkCode ucode;
  ucode.n = ncode.n;
  ucode.message_bits = k * ncode.n;

  std::set<EdgeId> gadget_edges;
  std::map<EdgeId, int> z_slot;  // z edge -> pair index
  for (int i = 0; i < k; ++i) {
    const auto& br = wiring.branches[i];
    for (const auto& e : {br.a, br.x, br.y, br.z, br.zp, br.b}) gadget_edges.insert(e);
    z_slot.emplace(br.z, i);
  }

  std::vector<int> slot_bits(k, ncode.n);
  for (const auto& [id, fn] : working.edge_functions) {
    if (gadget_edges.count(id)) continue;
    FunctionTable copied = fn;
    for (std::size_t pos = 0; pos < copied.inputs.size(); ++pos) {
      const auto& in = copied.inputs[pos];
      if (in.kind != CodeInput::Kind::edge || !z_slot.count(in.edge)) continue;
      const int slot = z_slot.at(in.edge);
      // The message value stands for the a value; route it through sigma =
      // (a -> z) before the copied table sees it.
      auto alphas = input_alphabets(copied, ix, ncode.n, slot_bits);
      copied = precompose_input(copied, pos, chain.branches[slot].a_to_z, alphas);
      copied.inputs[pos] = CodeInput::for_message(slot);
    }
    ucode.edge_functions[id] = std::move(copied);
  }

  for (int i = 0; i < k; ++i) {
    const auto& br = wiring.branches[i];
    const auto& ch = chain.branches[i];
    std::vector<std::uint64_t> inv_ax(alpha), inv_xb(alpha), inv_bzp(alpha);
    for (std::uint64_t v = 0; v < alpha; ++v) {
      inv_ax[ch.a_to_x[v]] = v;
      inv_xb[ch.x_to_b[v]] = v;
      inv_bzp[ch.b_to_zp[v]] = v;
    }
    FunctionTable dec = working.edge_functions.at(br.zp);
    for (auto& v : dec.table) v = inv_ax[inv_xb[inv_bzp[v]]];
    ucode.decoders[br.pair_terminal] = std::move(dec);
  }

  (void)CodeShape::for_unicast(ucode, uinst);
  return ExtractResult{std::move(ucode), std::move(chain), normalized};
}

}  // namespace necred
