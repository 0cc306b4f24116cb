#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace consensus {

// Undirected simple graph on nodes 0..n-1 with a mandatory self-loop at every
// node. The self-loop is stored as membership i in N_i (never a doubled
// edge), so degree(i) == |N_i| counts the node itself and an isolated node
// has degree 1. Neighbor lists are kept sorted for deterministic iteration.
class Graph {
 public:
  explicit Graph(int n);
  static Graph with_edges(int n, std::span<const std::pair<int, int>> edges);
  // Adopts adjacency lists verbatim, without enforcing any invariant; pair
  // with validate_graph for data from untrusted sources.
  static Graph from_adjacency(std::vector<std::vector<int>> adjacency);

  int size() const { return static_cast<int>(adjacency_.size()); }
  const std::vector<int>& neighbors(int i) const { return adjacency_[i]; }
  int degree(int i) const { return static_cast<int>(adjacency_[i].size()); }
  std::vector<int> degrees() const;

  bool has_edge(int i, int j) const;
  void add_edge(int i, int j);     // no-op if present; i == j rejected
  void remove_edge(int i, int j);  // self-loops cannot be removed

  // Non-loop edges as (i, j) with i < j, lexicographically sorted.
  std::vector<std::pair<int, int>> edges() const;
  int edge_count() const;  // non-loop edges

  bool operator==(const Graph&) const = default;

 private:
  std::vector<std::vector<int>> adjacency_;
};

struct GraphViolation {
  int node_a = -1;
  int node_b = -1;
  std::string rule;  // human-readable, names node(s) and rule
};

// Empty result iff the self-loop and symmetry invariants hold. Violations are
// data, not failures.
std::vector<GraphViolation> validate_graph(const Graph& g);

// Reachability from node 0 over non-loop edges; self-loops never affect
// connectivity. A single node is connected.
bool is_connected(const Graph& g);

// Edge-set union; all inputs must share the same node count.
Graph union_graph(std::span<const Graph> graphs);

// A finite sequence of graphs on a common node set, with the claimed
// connectivity window B and an optional nominal degree profile d. When the
// profile is set, every step is expected to satisfy degree(i) in {1, d[i]}.
struct GraphSequence {
  int n = 0;
  int B = 1;
  std::vector<Graph> graphs;
  std::optional<std::vector<int>> degree_profile;

  long length() const { return static_cast<long>(graphs.size()); }

  // The profile if set, otherwise per-node max degree over all steps (the
  // nominal degree of any node that is ever non-isolated).
  std::vector<int> profile_or_inferred() const;
};

GraphSequence subsequence(const GraphSequence& seq, long begin, long count);

// True iff the union over every aligned window [kB, (k+1)B) is connected.
// Windows are anchored at 0, not sliding. The length must be a multiple of B.
bool is_b_connected(const GraphSequence& seq, int B);

struct ClassViolation {
  long t = 0;
  int node = -1;
  int observed_degree = 0;
  int nominal_degree = 0;
};

// Checks degree(i, t) in {1, d[i]} for every step and node.
std::vector<ClassViolation> check_class_membership(const GraphSequence& seq,
                                                   const std::vector<int>& d);

}  // namespace consensus
