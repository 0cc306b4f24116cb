#pragma once

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "consensus/graph.hpp"
#include "consensus/matrix.hpp"
#include "consensus/scalar.hpp"

namespace consensus {

// Equal-neighbor update matrix: entry (i,j) is 1/degree(i) when j is a
// neighbor of i (self included), 0 otherwise. Rows sum to one exactly in the
// rational backend. Keeps the graph it was built from.
template <class S>
struct UpdateMatrix {
  Matrix<S> entries;
  Graph source;
};

template <class S>
UpdateMatrix<S> build_update_matrix(const Graph& g) {
  if (!validate_graph(g).empty())
    throw std::invalid_argument("update matrix of an invalid graph");
  const int n = g.size();
  Matrix<S> m(n);
  for (int i = 0; i < n; ++i) {
    const S w = ScalarOps<S>::fraction(1, g.degree(i));
    for (int j : g.neighbors(i)) m.at(i, j) = w;
  }
  return {std::move(m), g};
}

// Agent values plus the degree vector d used for weighting in the conserved
// average and the Lyapunov functions. d is the sequence's nominal profile,
// not the per-step degrees, so isolated steps keep their full weight.
template <class S>
struct StateVector {
  std::vector<S> x;
  std::vector<int> d;

  int size() const { return static_cast<int>(x.size()); }
};

template <class S>
StateVector<S> make_state(std::vector<S> x, std::vector<int> d) {
  if (x.size() != d.size()) throw std::invalid_argument("state/degree length mismatch");
  for (int di : d)
    if (di < 1) throw std::invalid_argument("degree weights must be >= 1");
  return {std::move(x), std::move(d)};
}

// One synchronous update: x'_i = (1/degree(i)) * sum of x_j over neighbors.
template <class S>
StateVector<S> step(const StateVector<S>& state, const Graph& g) {
  const int n = state.size();
  if (g.size() != n) throw std::invalid_argument("state/graph dimension mismatch");
  std::vector<S> next(n, ScalarOps<S>::zero());
  for (int i = 0; i < n; ++i) {
    S acc = ScalarOps<S>::zero();
    for (int j : g.neighbors(i)) acc += state.x[j];
    next[i] = acc * ScalarOps<S>::fraction(1, g.degree(i));
  }
  return {std::move(next), state.d};
}

// Spread S(x) = max x - min x; zero iff all components equal.
template <class S>
S spread(const std::vector<S>& x) {
  if (x.empty()) throw std::invalid_argument("spread of empty vector");
  auto [mn, mx] = std::minmax_element(x.begin(), x.end());
  return *mx - *mn;
}

template <class S>
S spread(const StateVector<S>& state) {
  return spread(state.x);
}

// d-weighted average, the quantity every equal-neighbor update conserves.
template <class S>
S weighted_average(const StateVector<S>& state) {
  S num = ScalarOps<S>::zero();
  long den = 0;
  for (int i = 0; i < state.size(); ++i) {
    num += ScalarOps<S>::from_int(state.d[i]) * state.x[i];
    den += state.d[i];
  }
  return num * ScalarOps<S>::fraction(1, den);
}

// V(x) = sum d_i x_i^2.
template <class S>
S lyapunov_v(const StateVector<S>& state) {
  S acc = ScalarOps<S>::zero();
  for (int i = 0; i < state.size(); ++i)
    acc += ScalarOps<S>::from_int(state.d[i]) * state.x[i] * state.x[i];
  return acc;
}

// V'(x) = sum d_i (x_i - xbar)^2; zero iff consensus.
template <class S>
S lyapunov_v_prime(const StateVector<S>& state) {
  const S xbar = weighted_average(state);
  S acc = ScalarOps<S>::zero();
  for (int i = 0; i < state.size(); ++i) {
    const S diff = state.x[i] - xbar;
    acc += ScalarOps<S>::from_int(state.d[i]) * diff * diff;
  }
  return acc;
}

// Per-step instrumentation record for a trajectory.
template <class S>
struct InstrumentationRow {
  long t = 0;
  std::vector<S> x;
  S spread;
  S v;
  S v_prime;
  S weighted_avg;
};

// Streams the iteration x(t+1) = A(t) x(t) through `sink(row)` for
// t = 0..length, keeping only the current state in memory. The sink sees the
// initial state first (t = 0).
template <class S, class Sink>
StateVector<S> run_stream(const GraphSequence& seq, StateVector<S> state, Sink&& sink,
                          long horizon = -1) {
  if (seq.n != state.size()) throw std::invalid_argument("state/sequence dimension mismatch");
  const long steps = horizon < 0 ? seq.length() : horizon;
  if (steps > seq.length()) throw std::out_of_range("horizon exceeds sequence length");
  auto emit = [&](long t) {
    InstrumentationRow<S> row{t, state.x, spread(state), lyapunov_v(state),
                              lyapunov_v_prime(state), weighted_average(state)};
    if constexpr (!ScalarOps<S>::exact) {
      if (!ScalarOps<S>::finite(row.spread) || !ScalarOps<S>::finite(row.v) ||
          !ScalarOps<S>::finite(row.v_prime) || !ScalarOps<S>::finite(row.weighted_avg))
        throw std::runtime_error("non-finite value in trajectory at t=" + std::to_string(t));
    }
    sink(std::move(row));
  };
  emit(0);
  for (long t = 0; t < steps; ++t) {
    state = step(state, seq.graphs[t]);
    emit(t + 1);
  }
  return state;
}

template <class S>
struct RunResult {
  std::vector<InstrumentationRow<S>> log;  // length horizon+1, t = 0..horizon
  StateVector<S> final_state;

  const std::vector<S>& state_at(long t) const { return log.at(t).x; }
};

// Materialized trajectory with instrumentation; use run_stream for long
// horizons where storing every state is wasteful.
template <class S>
RunResult<S> run(const GraphSequence& seq, const StateVector<S>& x0, long horizon = -1) {
  RunResult<S> out;
  out.final_state = run_stream(
      seq, x0, [&](InstrumentationRow<S> row) { out.log.push_back(std::move(row)); }, horizon);
  return out;
}

}  // namespace consensus
