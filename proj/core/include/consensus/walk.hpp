#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "consensus/dynamics.hpp"
#include "consensus/graph.hpp"
#include "consensus/rng.hpp"

namespace consensus {

// Random walk that jumps to a uniformly chosen neighbor (self included) of
// its current node in the current graph. Deterministic given the engine
// state; see rng.hpp for the reproducibility contract.
struct WalkState {
  int position = 0;
  long time = 0;
  Engine rng;
};

inline WalkState make_walk(int start, std::uint64_t seed) {
  return {start, 0, make_engine(seed)};
}

WalkState walk_step(WalkState state, const Graph& g);

// Exact push-forward of a probability row vector through t steps of the
// sequence: mu(t) = mu(0) A(0) ... A(t-1). Equals the corresponding row
// combination of the forward matrix product.
template <class S>
std::vector<S> evolve_distribution(std::vector<S> mu, const GraphSequence& seq, long t) {
  if (static_cast<int>(mu.size()) != seq.n)
    throw std::invalid_argument("distribution/sequence dimension mismatch");
  if (t < 0 || t > seq.length()) throw std::out_of_range("t exceeds sequence length");
  S total = ScalarOps<S>::zero();
  for (const S& m : mu) {
    if (m < ScalarOps<S>::zero()) throw std::invalid_argument("negative probability mass");
    total += m;
  }
  if (!Tolerance<S>::approx_equal(total, ScalarOps<S>::one()))
    throw std::invalid_argument("distribution does not sum to one");

  const S zero = ScalarOps<S>::zero();
  for (long k = 0; k < t; ++k) {
    const Graph& g = seq.graphs[k];
    std::vector<S> next(mu.size(), zero);
    for (int i = 0; i < seq.n; ++i) {
      if (mu[i] == zero) continue;
      const S w = mu[i] * ScalarOps<S>::fraction(1, g.degree(i));
      for (int j : g.neighbors(i)) next[j] += w;
    }
    mu = std::move(next);
  }
  return mu;
}

// First-passage statistics for the two-star walk: time for a walk launched at
// the freshly emerged left node (the node that was left center one step
// earlier) to first occupy a right-half node, under the forward periodic
// shift sequence. Samples exceeding max_steps are censored, reported
// separately, and excluded from mean/min/max, which biases the mean low.
struct CrossingStats {
  int n = 0;
  std::vector<long> samples;  // completed crossing times, in sample order
  long censored = 0;
  double mean = 0.0;  // over completed samples; lower-biased when censored > 0
  long min = 0;
  long max = 0;
  std::uint64_t seed = 0;
};

CrossingStats crossing_time_experiment(int n, long max_steps, long num_samples,
                                       std::uint64_t seed);

// {n, samples, mean, min, max, censored, seed} plus a mean_lower_bias flag.
std::string crossing_stats_json(const CrossingStats& stats);

}  // namespace consensus
