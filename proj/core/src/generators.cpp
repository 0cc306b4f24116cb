#include "consensus/generators.hpp"

#include <algorithm>
#include <utility>
#include <vector>

#include "consensus/rng.hpp"

namespace consensus {

Graph two_star_graph(int n, int shift) {
  if (n < 4 || n % 2 != 0) throw std::invalid_argument("two-star graph needs even n >= 4");
  const int half = n / 2;
  if (shift < 0 || shift >= half) throw std::invalid_argument("shift out of range");
  Graph g(n);
  const int center_left = shift;
  const int center_right = half + shift;
  for (int j = 0; j < half; ++j)
    if (j != center_left) g.add_edge(center_left, j);
  for (int j = half; j < n; ++j)
    if (j != center_right) g.add_edge(center_right, j);
  g.add_edge(center_left, center_right);
  return g;
}

GraphSequence counterexample_sequence(const CounterexampleSpec& spec) {
  if (spec.n < 4 || spec.n % 2 != 0)
    throw std::invalid_argument("counterexample needs even n >= 4");
  if (spec.repetitions < 1) throw std::invalid_argument("repetitions must be positive");
  const int half = spec.n / 2;
  GraphSequence seq;
  seq.n = spec.n;
  seq.B = 1;
  seq.graphs.reserve(static_cast<std::size_t>(spec.repetitions) * half);
  for (long tau = 0; tau < spec.repetitions * half; ++tau) {
    const int pos = static_cast<int>(tau % half);
    const int shift = spec.orientation == Orientation::Forward ? pos : half - 1 - pos;
    seq.graphs.push_back(two_star_graph(spec.n, shift));
  }
  return seq;
}

GraphSequence reverse_sequence(const GraphSequence& seq) {
  GraphSequence out = seq;
  std::reverse(out.graphs.begin(), out.graphs.end());
  return out;
}

namespace {

// One degree-preserving double edge swap attempt: pick two disjoint non-loop
// edges (a,b),(c,d) and rewire to (a,c),(b,d) when both are absent.
bool try_edge_swap(Graph& g, Engine& eng) {
  const auto edges = g.edges();
  if (edges.size() < 2) return false;
  const auto e1 = edges[draw_below(eng, edges.size())];
  const auto e2 = edges[draw_below(eng, edges.size())];
  int a = e1.first, b = e1.second;
  int c = e2.first, d = e2.second;
  if (a == c || a == d || b == c || b == d) return false;
  if (draw_bernoulli(eng, 0.5)) std::swap(c, d);
  if (g.has_edge(a, c) || g.has_edge(b, d)) return false;
  g.remove_edge(a, b);
  g.remove_edge(c, d);
  g.add_edge(a, c);
  g.add_edge(b, d);
  return true;
}

// Isolates `subset` (drops all their edges) and restores the lost degrees of
// the remaining nodes by randomly re-pairing the freed edge endpoints among
// themselves. Returns false when no legal re-pairing was found.
bool isolate_subset(const Graph& full, const std::vector<char>& isolate, Graph& out,
                    Engine& eng) {
  const int n = full.size();
  Graph stripped(n);
  std::vector<int> stubs;  // one entry per lost edge endpoint on a kept node
  for (auto [i, j] : full.edges()) {
    if (!isolate[i] && !isolate[j]) {
      stripped.add_edge(i, j);
    } else {
      if (!isolate[i]) stubs.push_back(i);
      if (!isolate[j]) stubs.push_back(j);
    }
  }
  if (stubs.size() % 2 != 0) return false;
  for (int attempt = 0; attempt < 30; ++attempt) {
    // Fisher-Yates with our deterministic draws.
    for (std::size_t k = stubs.size(); k > 1; --k)
      std::swap(stubs[k - 1], stubs[draw_below(eng, k)]);
    Graph trial = stripped;
    bool ok = true;
    for (std::size_t k = 0; k + 1 < stubs.size(); k += 2) {
      int a = stubs[k], b = stubs[k + 1];
      if (a == b || trial.has_edge(a, b)) {
        ok = false;
        break;
      }
      trial.add_edge(a, b);
    }
    if (ok) {
      out = std::move(trial);
      return true;
    }
  }
  return false;
}

}  // namespace

GraphSequence fixed_degree_sequence(const Graph& base, const FixedDegreeOptions& opts) {
  const int n = base.size();
  if (!validate_graph(base).empty()) throw std::invalid_argument("invalid base graph");
  if (!is_connected(base)) throw std::invalid_argument("base graph must be connected");
  for (int i = 0; i < n; ++i)
    if (base.degree(i) < 2)
      throw std::invalid_argument("every node needs a non-loop neighbor in the base graph");
  if (opts.B < 1) throw std::invalid_argument("window B must be positive");
  if (opts.steps < 0 || opts.steps % opts.B != 0)
    throw std::invalid_argument("steps must be a nonnegative multiple of B");
  if (opts.isolation_rate < 0.0 || opts.isolation_rate > 1.0)
    throw std::invalid_argument("isolation rate must be in [0,1]");

  const std::vector<int> profile = base.degrees();
  const int swaps = opts.swap_attempts_per_step < 0 ? n : opts.swap_attempts_per_step;
  Engine eng = make_engine(opts.seed);

  GraphSequence seq;
  seq.n = n;
  seq.B = opts.B;
  seq.degree_profile = profile;
  seq.graphs.reserve(opts.steps);

  Graph current = base;  // evolving full-degree topology
  const long windows = opts.steps / opts.B;
  for (long w = 0; w < windows; ++w) {
    bool window_ok = false;
    for (int retry = 0; retry < opts.max_window_retries && !window_ok; ++retry) {
      std::vector<Graph> window;
      Graph topo = current;
      const int anchor = draw_int(eng, 0, opts.B - 1);
      for (int pos = 0; pos < opts.B; ++pos) {
        for (int s = 0; s < swaps; ++s) try_edge_swap(topo, eng);
        if (pos != anchor && draw_bernoulli(eng, opts.isolation_rate)) {
          // Isolation step: all nodes, or a random proper subset with the
          // kept nodes re-wired back to full degree.
          std::vector<char> iso(n, 1);
          if (draw_bernoulli(eng, 0.5)) {
            int chosen = 0;
            for (int i = 0; i < n; ++i) {
              iso[i] = draw_bernoulli(eng, 0.5) ? 1 : 0;
              chosen += iso[i];
            }
            if (chosen == 0 || chosen == n) std::fill(iso.begin(), iso.end(), 1);
          }
          Graph step_graph(n);
          if (std::count(iso.begin(), iso.end(), 1) == n ||
              !isolate_subset(topo, iso, step_graph, eng)) {
            step_graph = Graph(n);  // all-isolated
          }
          window.push_back(std::move(step_graph));
        } else {
          window.push_back(topo);
        }
      }
      if (is_connected(union_graph(std::span<const Graph>(window)))) {
        for (Graph& g : window) seq.graphs.push_back(std::move(g));
        current = std::move(topo);
        window_ok = true;
      }
    }
    if (!window_ok)
      throw GenerationError(
          "could not draw a connected window " + std::to_string(w) + " after " +
          std::to_string(opts.max_window_retries) + " retries (n=" + std::to_string(n) +
          ", B=" + std::to_string(opts.B) +
          ", isolation_rate=" + std::to_string(opts.isolation_rate) + ")");
  }

  if (!check_class_membership(seq, profile).empty())
    throw GenerationError("generated sequence violates its degree profile");
  if (opts.steps > 0 && !is_b_connected(seq, opts.B))
    throw GenerationError("generated sequence is not B-connected");
  return seq;
}

}  // namespace consensus
