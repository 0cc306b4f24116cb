#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "consensus/graph.hpp"

namespace consensus {

// ---------------------------------------------------------------------------
// Degree-swapping two-star family.
// ---------------------------------------------------------------------------

// Two mirrored stars joined by a center-to-center bridge, with self-loops
// everywhere. Left half {0..n/2-1} is a star centered at s; right half
// {n/2..n-1} mirrors it, centered at n/2+s. Both centers have degree n/2+1,
// every leaf degree 2. The sorted degree sequence is the same for every
// shift s; which node carries the high degree rotates with s.
Graph two_star_graph(int n, int shift);

enum class Orientation { Forward, Reversed };

struct CounterexampleSpec {
  int n = 0;  // even, >= 4
  Orientation orientation = Orientation::Forward;
  long repetitions = 1;  // total length is repetitions * n/2
};

// Periodic repetitions of the length-n/2 two-star shift cycle. Forward emits
// shifts 0, 1, ..., n/2-1 per period; Reversed emits n/2-1, ..., 1, 0. Every
// step is connected, so the sequence is B-connected with B = 1.
GraphSequence counterexample_sequence(const CounterexampleSpec& spec);

// Reverses the order of the graphs; metadata is preserved.
GraphSequence reverse_sequence(const GraphSequence& seq);

// ---------------------------------------------------------------------------
// Fixed-degree (constant-profile) random sequences.
// ---------------------------------------------------------------------------

struct FixedDegreeOptions {
  long steps = 0;        // total length; must be a multiple of B
  int B = 1;             // connectivity window to guarantee
  double isolation_rate = 0.0;  // per-step probability of an isolation step
  std::uint64_t seed = 0;
  int swap_attempts_per_step = -1;  // default: n attempts
  int max_window_retries = 100;
};

class GenerationError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Random sequence with the degree profile of `base`: every step either keeps
// each node at its base degree (topology evolved by degree-preserving double
// edge swaps) or sets the degree of an isolated subset to 1. Every aligned
// B-window keeps at least one full-degree step and is re-drawn until its
// union is connected. The result is validated against the profile and the
// window property before being returned; deterministic for a fixed seed.
//
// `base` must be connected, and every node needs a non-loop neighbor (profile
// degrees >= 2), otherwise no connected window can exist.
GraphSequence fixed_degree_sequence(const Graph& base, const FixedDegreeOptions& opts);

}  // namespace consensus
