#pragma once

#include <map>
#include <string>
#include <vector>

namespace necred {

using NodeId = std::string;
using EdgeId = std::string;

/// A directed channel with an integer capacity in bits per symbol time.
struct Edge {
  EdgeId id;
  NodeId from;
  NodeId to;
  int capacity = 1;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Directed acyclic network. Acyclicity and reference integrity are not
/// enforced by construction; run validate_instance before trusting a value
/// that crossed an API boundary.
struct NetworkGraph {
  std::vector<NodeId> nodes;
  std::vector<Edge> edges;

  friend bool operator==(const NetworkGraph&, const NetworkGraph&) = default;
};

struct UnicastPair {
  NodeId source;
  NodeId terminal;

  friend bool operator==(const UnicastPair&, const UnicastPair&) = default;
};

/// k-pair multiple-unicast problem: every pair wants one message at unit rate.
struct UnicastInstance {
  NetworkGraph graph;
  std::vector<UnicastPair> pairs;

  friend bool operator==(const UnicastInstance&, const UnicastInstance&) = default;
};

/// Branch-role tags attached to the edges of a gadget-built instance.
enum class BranchRole { a, x, y, z, zp, b, internal };

struct RoleTag {
  BranchRole role = BranchRole::internal;
  int branch = 0;  // 1-based; 0 for internal edges

  friend bool operator==(const RoleTag&, const RoleTag&) = default;
};

/// Single-source single-terminal network error correction problem. The
/// adversary may corrupt the channels of (at most) one member set.
struct NECInstance {
  NetworkGraph graph;
  NodeId source;
  NodeId terminal;
  std::vector<std::vector<EdgeId>> adversary;
  std::map<EdgeId, RoleTag> roles;  // populated only for gadget instances

  friend bool operator==(const NECInstance&, const NECInstance&) = default;
};

struct ValidationReport {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

ValidationReport validate_instance(const UnicastInstance& inst);
ValidationReport validate_instance(const NECInstance& inst);

/// An s-t cut witnessing the max-flow value.
struct CutReport {
  long long value = 0;
  std::vector<EdgeId> cut_edges;
};

/// Exact integer max-flow / min-cut. An unreachable dst yields value 0 with an
/// empty cut. Throws std::invalid_argument if src == dst or either is unknown.
CutReport min_cut(const NetworkGraph& graph, const NodeId& src, const NodeId& dst);

/// Per-pair min-cut values; entry i is min_cut(graph, s_i, t_i). A zero entry
/// certifies that unit rate is infeasible for that pair.
std::vector<long long> unicast_cut_check(const UnicastInstance& inst);

/// Adjacency, stable topological order and id lookups for one graph. Holds a
/// pointer to the graph; keep the graph alive while the index is in use.
class GraphIndex {
public:
  explicit GraphIndex(const NetworkGraph& g);

  const NetworkGraph& graph() const { return *g_; }
  int node_index(const NodeId& id) const;
  int edge_index(const EdgeId& id) const;
  const std::vector<int>& incoming(int node) const { return in_[node]; }
  const std::vector<int>& outgoing(int node) const { return out_[node]; }

  /// Every tail precedes its head; ties broken by declaration order. Shorter
  /// than the node count iff the graph has a cycle.
  const std::vector<int>& topo_order() const { return topo_; }
  bool acyclic() const { return topo_.size() == g_->nodes.size(); }

  /// Edges ordered by (topo position of tail, declaration index): the
  /// canonical evaluation order.
  std::vector<int> edge_eval_order() const;

private:
  const NetworkGraph* g_;
  std::map<NodeId, int> node_ix_;
  std::map<EdgeId, int> edge_ix_;
  std::vector<std::vector<int>> in_, out_;
  std::vector<int> topo_;
};

const char* to_string(BranchRole role);
bool branch_role_from_string(const std::string& s, BranchRole& out);

}  // namespace necred
