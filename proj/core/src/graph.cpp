#include "necred/graph.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <queue>
#include <set>
#include <stdexcept>

namespace necred {

GraphIndex::GraphIndex(const NetworkGraph& g) : g_(&g) {
  for (int i = 0; i < static_cast<int>(g.nodes.size()); ++i)
    node_ix_.emplace(g.nodes[i], i);
  in_.resize(g.nodes.size());
  out_.resize(g.nodes.size());
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
    edge_ix_.emplace(g.edges[e].id, e);
    auto ti = node_ix_.find(g.edges[e].from);
    auto hi = node_ix_.find(g.edges[e].to);
    if (ti == node_ix_.end() || hi == node_ix_.end()) continue;  // validator reports it
    out_[ti->second].push_back(e);
    in_[hi->second].push_back(e);
  }

  // Kahn's algorithm, always picking the lowest-index ready node.
  std::vector<int> indegree(g.nodes.size(), 0);
  for (std::size_t v = 0; v < g.nodes.size(); ++v) indegree[v] = static_cast<int>(in_[v].size());
  std::priority_queue<int, std::vector<int>, std::greater<int>> ready;
  for (std::size_t v = 0; v < g.nodes.size(); ++v)
    if (indegree[v] == 0) ready.push(static_cast<int>(v));
  while (!ready.empty()) {
    int v = ready.top();
    ready.pop();
    topo_.push_back(v);
    for (int e : out_[v]) {
      int h = node_index(g.edges[e].to);
      if (--indegree[h] == 0) ready.push(h);
    }
  }
}

int GraphIndex::node_index(const NodeId& id) const {
  auto it = node_ix_.find(id);
  return it == node_ix_.end() ? -1 : it->second;
}

int GraphIndex::edge_index(const EdgeId& id) const {
  auto it = edge_ix_.find(id);
  return it == edge_ix_.end() ? -1 : it->second;
}

std::vector<int> GraphIndex::edge_eval_order() const {
  std::vector<int> pos(g_->nodes.size(), -1);
  for (std::size_t i = 0; i < topo_.size(); ++i) pos[topo_[i]] = static_cast<int>(i);
  std::vector<int> order;
  order.reserve(g_->edges.size());
  for (int v : topo_)
    for (int e : out_[v]) order.push_back(e);
  return order;
}

namespace {

void validate_graph(const NetworkGraph& g, ValidationReport& rep) {
  std::set<NodeId> nodes;
  for (const auto& n : g.nodes)
    if (!nodes.insert(n).second) rep.violations.push_back("duplicate node id: " + n);
  std::set<EdgeId> edges;
  for (const auto& e : g.edges) {
    if (!edges.insert(e.id).second) rep.violations.push_back("duplicate edge id: " + e.id);
    if (!nodes.count(e.from))
      rep.violations.push_back("edge " + e.id + " references unknown node " + e.from);
    if (!nodes.count(e.to))
      rep.violations.push_back("edge " + e.id + " references unknown node " + e.to);
    if (e.capacity < 1)
      rep.violations.push_back("edge " + e.id + " has non-positive capacity");
  }
  if (rep.ok()) {
    GraphIndex ix(g);
    if (!ix.acyclic()) rep.violations.push_back("cycle detected");
  }
}

}  // namespace

ValidationReport validate_instance(const UnicastInstance& inst) {
  ValidationReport rep;
  validate_graph(inst.graph, rep);
  if (inst.pairs.empty()) rep.violations.push_back("instance has no source/terminal pairs");
  std::set<NodeId> declared(inst.graph.nodes.begin(), inst.graph.nodes.end());
  std::set<NodeId> endpoints;
  for (const auto& p : inst.pairs) {
    if (!declared.count(p.source))
      rep.violations.push_back("pair source is not a graph node: " + p.source);
    if (!declared.count(p.terminal))
      rep.violations.push_back("pair terminal is not a graph node: " + p.terminal);
    if (!endpoints.insert(p.source).second)
      rep.violations.push_back("pair endpoint used twice: " + p.source);
    if (!endpoints.insert(p.terminal).second)
      rep.violations.push_back("pair endpoint used twice: " + p.terminal);
  }
  return rep;
}

namespace {

struct RoleSlot {
  int edge = -1;  // declaration index, -1 = unset
};

}  // namespace

ValidationReport validate_instance(const NECInstance& inst) {
  ValidationReport rep;
  validate_graph(inst.graph, rep);
  std::set<NodeId> declared(inst.graph.nodes.begin(), inst.graph.nodes.end());
  if (!declared.count(inst.source))
    rep.violations.push_back("source is not a graph node: " + inst.source);
  if (!declared.count(inst.terminal))
    rep.violations.push_back("terminal is not a graph node: " + inst.terminal);
  if (inst.source == inst.terminal)
    rep.violations.push_back("source equals terminal");

  std::set<EdgeId> edge_ids;
  for (const auto& e : inst.graph.edges) edge_ids.insert(e.id);
  for (const auto& set : inst.adversary)
    for (const auto& id : set)
      if (!edge_ids.count(id))
        rep.violations.push_back("unknown edge in adversary: " + id);

  if (inst.roles.empty()) return rep;

  // Branch wiring checks: one edge per role per branch, forming the gadget
  // topology a: source->u, x/y: u->B, z: u->s_i, z': t_i->B, b: B->terminal,
  // all of unit capacity.
  std::map<EdgeId, const Edge*> by_id;
  for (const auto& e : inst.graph.edges) by_id.emplace(e.id, &e);
  int max_branch = 0;
  for (const auto& [id, tag] : inst.roles) {
    if (!edge_ids.count(id)) {
      rep.violations.push_back("role attached to unknown edge: " + id);
      continue;
    }
    if (tag.role == BranchRole::internal) continue;
    if (tag.branch < 1) {
      rep.violations.push_back("role edge " + id + " has non-positive branch index");
      continue;
    }
    max_branch = std::max(max_branch, tag.branch);
  }
  if (!rep.ok()) return rep;

  std::vector<std::map<BranchRole, EdgeId>> branches(max_branch + 1);
  for (const auto& [id, tag] : inst.roles) {
    if (tag.role == BranchRole::internal) continue;
    auto [it, fresh] = branches[tag.branch].emplace(tag.role, id);
    if (!fresh)
      rep.violations.push_back("branch " + std::to_string(tag.branch) +
                               " has two edges with role " + to_string(tag.role));
  }
  for (int i = 1; i <= max_branch; ++i) {
    auto& roles = branches[i];
    const BranchRole all[] = {BranchRole::a, BranchRole::x, BranchRole::y,
                              BranchRole::z, BranchRole::zp, BranchRole::b};
    bool complete = true;
    for (BranchRole r : all)
      if (!roles.count(r)) {
        rep.violations.push_back("branch " + std::to_string(i) + " is missing role " +
                                 to_string(r));
        complete = false;
      }
    if (!complete) continue;
    const Edge& a = *by_id.at(roles.at(BranchRole::a));
    const Edge& x = *by_id.at(roles.at(BranchRole::x));
    const Edge& y = *by_id.at(roles.at(BranchRole::y));
    const Edge& z = *by_id.at(roles.at(BranchRole::z));
    const Edge& zp = *by_id.at(roles.at(BranchRole::zp));
    const Edge& b = *by_id.at(roles.at(BranchRole::b));
    const std::string br = "branch " + std::to_string(i);
    for (const Edge* e : {&a, &x, &y, &z, &zp, &b})
      if (e->capacity != 1)
        rep.violations.push_back(br + " role edge " + e->id + " is not unit capacity");
    if (a.from != inst.source) rep.violations.push_back(br + ": a does not leave the source");
    if (x.from != a.to || y.from != a.to)
      rep.violations.push_back(br + ": x/y do not leave the fan-out node");
    if (x.to != y.to) rep.violations.push_back(br + ": x and y reach different nodes");
    if (z.from != a.to) rep.violations.push_back(br + ": z does not leave the fan-out node");
    if (zp.to != x.to) rep.violations.push_back(br + ": z' does not reach the combiner");
    if (b.from != x.to) rep.violations.push_back(br + ": b does not leave the combiner");
    if (b.to != inst.terminal) rep.violations.push_back(br + ": b does not reach the terminal");
  }
  return rep;
}

CutReport min_cut(const NetworkGraph& graph, const NodeId& src, const NodeId& dst) {
  GraphIndex ix(graph);
  int s = ix.node_index(src);
  int t = ix.node_index(dst);
  if (s < 0 || t < 0) throw std::invalid_argument("min_cut: unknown node");
  if (s == t) throw std::invalid_argument("min_cut: src equals dst");

  const int m = static_cast<int>(graph.edges.size());
  std::vector<long long> flow(m, 0);

  // Edmonds-Karp over the residual graph; residual arcs are (edge, forward?).
  auto bfs = [&](std::vector<std::pair<int, bool>>& parent) -> bool {
    parent.assign(graph.nodes.size(), {-1, true});
    std::vector<char> seen(graph.nodes.size(), 0);
    std::deque<int> q{s};
    seen[s] = 1;
    while (!q.empty()) {
      int v = q.front();
      q.pop_front();
      if (v == t) return true;
      for (int e : ix.outgoing(v)) {
        int h = ix.node_index(graph.edges[e].to);
        if (!seen[h] && flow[e] < graph.edges[e].capacity) {
          seen[h] = 1;
          parent[h] = {e, true};
          q.push_back(h);
        }
      }
      for (int e : ix.incoming(v)) {
        int tail = ix.node_index(graph.edges[e].from);
        if (!seen[tail] && flow[e] > 0) {
          seen[tail] = 1;
          parent[tail] = {e, false};
          q.push_back(tail);
        }
      }
    }
    return false;
  };

  long long total = 0;
  std::vector<std::pair<int, bool>> parent;
  while (bfs(parent)) {
    long long aug = std::numeric_limits<long long>::max();
    for (int v = t; v != s;) {
      auto [e, fwd] = parent[v];
      aug = std::min(aug, fwd ? graph.edges[e].capacity - flow[e] : flow[e]);
      v = ix.node_index(fwd ? graph.edges[e].from : graph.edges[e].to);
    }
    for (int v = t; v != s;) {
      auto [e, fwd] = parent[v];
      flow[e] += fwd ? aug : -aug;
      v = ix.node_index(fwd ? graph.edges[e].from : graph.edges[e].to);
    }
    total += aug;
  }

  // Witness cut closest to the sink: nodes that still reach dst in the
  // residual graph; the saturated edges entering that set form a min cut.
  std::vector<char> reach(graph.nodes.size(), 0);
  std::deque<int> q{t};
  reach[t] = 1;
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    for (int e : ix.incoming(v)) {
      int tail = ix.node_index(graph.edges[e].from);
      if (!reach[tail] && flow[e] < graph.edges[e].capacity) {
        reach[tail] = 1;
        q.push_back(tail);
      }
    }
    for (int e : ix.outgoing(v)) {
      int head = ix.node_index(graph.edges[e].to);
      if (!reach[head] && flow[e] > 0) {
        reach[head] = 1;
        q.push_back(head);
      }
    }
  }

  CutReport rep;
  rep.value = total;
  long long crossing = 0;
  for (const auto& e : graph.edges) {
    if (!reach[ix.node_index(e.from)] && reach[ix.node_index(e.to)]) {
      rep.cut_edges.push_back(e.id);
      crossing += e.capacity;
    }
  }
  if (crossing != total)
    throw std::logic_error("min_cut: witness cut does not match flow value");
  return rep;
}

std::vector<long long> unicast_cut_check(const UnicastInstance& inst) {
  auto rep = validate_instance(inst);
  if (!rep.ok())
    throw std::invalid_argument("unicast_cut_check: invalid instance: " + rep.violations.front());
  std::vector<long long> out;
  out.reserve(inst.pairs.size());
  for (const auto& p : inst.pairs)
    out.push_back(min_cut(inst.graph, p.source, p.terminal).value);
  return out;
}

const char* to_string(BranchRole role) {
  switch (role) {
    case BranchRole::a: return "a";
    case BranchRole::x: return "x";
    case BranchRole::y: return "y";
    case BranchRole::z: return "z";
    case BranchRole::zp: return "zp";
    case BranchRole::b: return "b";
    case BranchRole::internal: return "internal";
  }
  return "?";
}

bool branch_role_from_string(const std::string& s, BranchRole& out) {
  if (s == "a") out = BranchRole::a;
  else if (s == "x") out = BranchRole::x;
  else if (s == "y") out = BranchRole::y;
  else if (s == "z") out = BranchRole::z;
  else if (s == "zp") out = BranchRole::zp;
  else if (s == "b") out = BranchRole::b;
  else if (s == "internal") out = BranchRole::internal;
  else return false;
  return true;
}

}  // namespace necred
