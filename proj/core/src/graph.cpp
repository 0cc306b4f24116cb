#include "consensus/graph.hpp"

#include <algorithm>
#include <stdexcept>

namespace consensus {

Graph::Graph(int n) {
  if (n < 1) throw std::invalid_argument("graph needs at least one node");
  adjacency_.resize(n);
  for (int i = 0; i < n; ++i) adjacency_[i].push_back(i);
}

Graph Graph::with_edges(int n, std::span<const std::pair<int, int>> edges) {
  Graph g(n);
  for (auto [i, j] : edges) g.add_edge(i, j);
  return g;
}

Graph Graph::from_adjacency(std::vector<std::vector<int>> adjacency) {
  if (adjacency.empty()) throw std::invalid_argument("graph needs at least one node");
  Graph g(static_cast<int>(adjacency.size()));
  g.adjacency_ = std::move(adjacency);
  return g;
}

std::vector<int> Graph::degrees() const {
  std::vector<int> d(adjacency_.size());
  for (std::size_t i = 0; i < adjacency_.size(); ++i)
    d[i] = static_cast<int>(adjacency_[i].size());
  return d;
}

bool Graph::has_edge(int i, int j) const {
  const auto& ni = adjacency_.at(i);
  return std::binary_search(ni.begin(), ni.end(), j);
}

void Graph::add_edge(int i, int j) {
  if (i < 0 || i >= size() || j < 0 || j >= size())
    throw std::out_of_range("edge endpoint out of range");
  if (i == j) throw std::invalid_argument("self-loops are implicit");
  auto insert_sorted = [](std::vector<int>& v, int x) {
    auto it = std::lower_bound(v.begin(), v.end(), x);
    if (it == v.end() || *it != x) v.insert(it, x);
  };
  insert_sorted(adjacency_[i], j);
  insert_sorted(adjacency_[j], i);
}

void Graph::remove_edge(int i, int j) {
  if (i < 0 || i >= size() || j < 0 || j >= size())
    throw std::out_of_range("edge endpoint out of range");
  if (i == j) throw std::invalid_argument("self-loops cannot be removed");
  auto erase_sorted = [](std::vector<int>& v, int x) {
    auto it = std::lower_bound(v.begin(), v.end(), x);
    if (it != v.end() && *it == x) v.erase(it);
  };
  erase_sorted(adjacency_[i], j);
  erase_sorted(adjacency_[j], i);
}

std::vector<std::pair<int, int>> Graph::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < size(); ++i)
    for (int j : adjacency_[i])
      if (j > i) out.emplace_back(i, j);
  return out;
}

int Graph::edge_count() const {
  int total = 0;
  for (const auto& ni : adjacency_) total += static_cast<int>(ni.size());
  return (total - size()) / 2;  // every list holds the node itself
}

std::vector<GraphViolation> validate_graph(const Graph& g) {
  std::vector<GraphViolation> out;
  const int n = g.size();
  // Works on raw adjacency too, so membership tests are linear scans here.
  auto contains = [&](int u, int v) {
    const auto& nu = g.neighbors(u);
    return std::find(nu.begin(), nu.end(), v) != nu.end();
  };
  for (int i = 0; i < n; ++i) {
    const auto& ni = g.neighbors(i);
    if (!std::is_sorted(ni.begin(), ni.end()))
      out.push_back({i, -1, "unsorted neighbor list at " + std::to_string(i)});
    bool has_loop = false;
    for (std::size_t k = 0; k < ni.size(); ++k) {
      int j = ni[k];
      if (j == i) has_loop = true;
      if (j < 0 || j >= n) {
        out.push_back({i, j, "neighbor out of range at " + std::to_string(i)});
        continue;
      }
      if (std::count(ni.begin(), ni.end(), j) > 1 &&
          std::find(ni.begin(), ni.end(), j) == ni.begin() + static_cast<long>(k))
        out.push_back({i, j, "duplicate neighbor " + std::to_string(j) + " at " +
                                 std::to_string(i)});
      if (j != i && !contains(j, i))
        out.push_back({i, j, "asymmetric edge " + std::to_string(i) + "-" +
                                 std::to_string(j)});
    }
    if (!has_loop) out.push_back({i, i, "missing self-loop at " + std::to_string(i)});
  }
  return out;
}

bool is_connected(const Graph& g) {
  const int n = g.size();
  std::vector<char> seen(n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int found = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : g.neighbors(v)) {
      if (!seen[w]) {
        seen[w] = 1;
        ++found;
        stack.push_back(w);
      }
    }
  }
  return found == n;
}

Graph union_graph(std::span<const Graph> graphs) {
  if (graphs.empty()) throw std::invalid_argument("union of no graphs");
  const int n = graphs.front().size();
  for (const Graph& g : graphs)
    if (g.size() != n) throw std::invalid_argument("inconsistent node count");
  Graph u(n);
  for (const Graph& g : graphs)
    for (auto [i, j] : g.edges()) u.add_edge(i, j);
  return u;
}

std::vector<int> GraphSequence::profile_or_inferred() const {
  if (degree_profile) return *degree_profile;
  std::vector<int> d(n, 1);
  for (const Graph& g : graphs)
    for (int i = 0; i < n; ++i) d[i] = std::max(d[i], g.degree(i));
  return d;
}

GraphSequence subsequence(const GraphSequence& seq, long begin, long count) {
  if (begin < 0 || count < 0 || begin + count > seq.length())
    throw std::out_of_range("subsequence out of range");
  GraphSequence out;
  out.n = seq.n;
  out.B = seq.B;
  out.degree_profile = seq.degree_profile;
  out.graphs.assign(seq.graphs.begin() + begin, seq.graphs.begin() + begin + count);
  return out;
}

bool is_b_connected(const GraphSequence& seq, int B) {
  if (B < 1) throw std::invalid_argument("window size must be positive");
  if (seq.length() % B != 0)
    throw std::invalid_argument("ragged window: sequence length " +
                                std::to_string(seq.length()) +
                                " is not a multiple of B=" + std::to_string(B));
  for (long k = 0; k * B < seq.length(); ++k) {
    std::span<const Graph> window(seq.graphs.data() + k * B, static_cast<std::size_t>(B));
    if (!is_connected(union_graph(window))) return false;
  }
  return true;
}

std::vector<ClassViolation> check_class_membership(const GraphSequence& seq,
                                                   const std::vector<int>& d) {
  if (static_cast<int>(d.size()) != seq.n)
    throw std::invalid_argument("degree vector length mismatch");
  std::vector<ClassViolation> out;
  for (long t = 0; t < seq.length(); ++t) {
    const Graph& g = seq.graphs[t];
    for (int i = 0; i < seq.n; ++i) {
      int deg = g.degree(i);
      if (deg != 1 && deg != d[i]) out.push_back({t, i, deg, d[i]});
    }
  }
  return out;
}

}  // namespace consensus
