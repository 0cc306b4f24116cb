#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "consensus/dynamics.hpp"
#include "consensus/graph.hpp"
#include "consensus/matrix.hpp"
#include "consensus/scalar.hpp"

namespace consensus {

// ---------------------------------------------------------------------------
// Convergence-time bound for fixed-degree B-connected sequences.
// ---------------------------------------------------------------------------

// B + 4 n^3 B ln(2n/epsilon). Defined for 0 < epsilon <= 2n (where the bound
// is at least B); the consensus regime of interest is epsilon < 1.
inline double theoretical_bound(int n, int B, double epsilon) {
  if (n < 2) throw std::invalid_argument("bound needs n >= 2");
  if (B < 1) throw std::invalid_argument("bound needs B >= 1");
  if (!(epsilon > 0.0) || !(epsilon <= 2.0 * n))
    throw std::invalid_argument("bound needs 0 < epsilon <= 2n");
  const double n3 = static_cast<double>(n) * n * n;
  return B + 4.0 * n3 * B * std::log(2.0 * n / epsilon);
}

struct BoundReport {
  int n = 0;
  int B = 0;
  double epsilon = 0.0;
  double bound = 0.0;
  // Smallest certified epsilon-consensus time, when measured.
  std::optional<long> measured_time;
  std::optional<double> slack;  // bound - measured_time
};

// ---------------------------------------------------------------------------
// Matrix products and the two coefficient routes.
// ---------------------------------------------------------------------------

// Forward:  A(0) A(1) ... A(t-1)   (the t-step transition matrix of the
//           inhomogeneous chain, rows = start states).
// Applied:  A(t-1) ... A(1) A(0)   (the matrix the consensus iteration
//           actually applies to x(0) when A(0) acts first).
enum class ProductOrder { Forward, Applied };

template <class S>
Matrix<S> matrix_product(const GraphSequence& seq, long t, ProductOrder order) {
  if (t < 0 || t > seq.length()) throw std::out_of_range("t exceeds sequence length");
  Matrix<S> p = Matrix<S>::identity(seq.n);
  for (long k = 0; k < t; ++k) {
    const Matrix<S> a = build_update_matrix<S>(seq.graphs[k]).entries;
    p = order == ProductOrder::Forward ? p * a : a * p;
  }
  return p;
}

template <class S>
struct CoefficientResult {
  S value;
  int row_i = 0;
  int row_j = 0;
};

// Coefficient of ergodicity: half the largest L1 distance between two rows of
// a row-stochastic matrix, with the maximizing pair.
template <class S>
CoefficientResult<S> ergodicity_coefficient(const Matrix<S>& p) {
  if (!is_row_stochastic(p)) throw std::invalid_argument("matrix is not row-stochastic");
  const int n = p.size();
  CoefficientResult<S> best{ScalarOps<S>::zero(), 0, 0};
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      S l1 = ScalarOps<S>::zero();
      for (int k = 0; k < n; ++k) l1 += ScalarOps<S>::abs(p.at(i, k) - p.at(j, k));
      S half = l1 * ScalarOps<S>::fraction(1, 2);
      if (half > best.value) best = {std::move(half), i, j};
    }
  }
  return best;
}

// Worst-case one-step spread contraction of P, computed independently of
// ergodicity_coefficient: for each row pair (i,j) build the sign vector
// x_k = +1/2 if p_ik >= p_jk else -1/2 (so S(x) <= 1), apply P, and take the
// largest [Px]_i - [Px]_j. For row-stochastic P this equals the coefficient
// of ergodicity; the two routes cross-check each other.
template <class S>
CoefficientResult<S> contraction_factor(const Matrix<S>& p) {
  const int n = p.size();
  const S half = ScalarOps<S>::fraction(1, 2);
  const S minus_half = ScalarOps<S>::fraction(-1, 2);
  CoefficientResult<S> best{ScalarOps<S>::zero(), 0, 0};
  std::vector<S> x(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = 0; k < n; ++k) x[k] = p.at(i, k) >= p.at(j, k) ? half : minus_half;
      S pi = ScalarOps<S>::zero();
      S pj = ScalarOps<S>::zero();
      for (int k = 0; k < n; ++k) {
        pi += p.at(i, k) * x[k];
        pj += p.at(j, k) * x[k];
      }
      S gap = pi - pj;
      if (gap > best.value) best = {std::move(gap), i, j};
    }
  }
  return best;
}

// t-step transition analysis of the forward product.
template <class S>
struct ErgodicityReport {
  long t = 0;
  Matrix<S> product;                   // A(0) ... A(t-1)
  S coefficient;                       // half max row-pair L1 distance
  std::pair<int, int> argmax_pair;     // attaining rows
  std::vector<S> pair_gaps;            // half L1 gap per pair (i<j), row-major
  S contraction;                       // sign-vector route, equals coefficient
};

template <class S>
ErgodicityReport<S> ergodicity_report(const GraphSequence& seq, long t) {
  ErgodicityReport<S> rep;
  rep.t = t;
  rep.product = matrix_product<S>(seq, t, ProductOrder::Forward);
  auto coeff = ergodicity_coefficient(rep.product);
  rep.coefficient = coeff.value;
  rep.argmax_pair = {coeff.row_i, coeff.row_j};
  const int n = rep.product.size();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      S l1 = ScalarOps<S>::zero();
      for (int k = 0; k < n; ++k)
        l1 += ScalarOps<S>::abs(rep.product.at(i, k) - rep.product.at(j, k));
      rep.pair_gaps.push_back(l1 * ScalarOps<S>::fraction(1, 2));
    }
  rep.contraction = contraction_factor(rep.product).value;
  return rep;
}

struct ConsensusTime {
  bool reached = false;
  long t = 0;        // smallest certified time when reached, else horizon scanned
  double factor_at_t = 0.0;
};

// Smallest t with contraction_factor(A(t-1)...A(0)) <= epsilon, certifying
// epsilon-consensus for every initial vector. Scans t upward (monotonicity of
// the coefficient under further factors is not assumed).
template <class S>
ConsensusTime epsilon_consensus_time(const GraphSequence& seq, double epsilon,
                                     long max_t = -1) {
  if (!(epsilon > 0.0) || !(epsilon < 1.0))
    throw std::invalid_argument("epsilon must be in (0,1)");
  const long horizon = max_t < 0 ? seq.length() : std::min(max_t, seq.length());
  const S eps = [&] {
    if constexpr (ScalarOps<S>::exact) {
      // Exact threshold: the binary64 value of epsilon, as a rational.
      Rational q(epsilon);
      q.canonicalize();
      return q;
    } else {
      return epsilon;
    }
  }();
  Matrix<S> p = Matrix<S>::identity(seq.n);
  for (long t = 0; t <= horizon; ++t) {
    auto c = contraction_factor(p);
    if (c.value <= eps)
      return {true, t, ScalarOps<S>::to_double(c.value)};
    if (t < horizon) p = build_update_matrix<S>(seq.graphs[t]).entries * p;
  }
  return {false, horizon, 0.0};
}

// ---------------------------------------------------------------------------
// Executable decrease statements for the Lyapunov machinery.
// ---------------------------------------------------------------------------

// Values sorted nondecreasing, ties broken by node index; returns the n-1
// consecutive gaps of the sorted order.
template <class S>
std::vector<S> sorted_gaps(const std::vector<S>& x) {
  std::vector<int> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return x[a] < x[b]; });
  std::vector<S> gaps;
  for (std::size_t l = 0; l + 1 < idx.size(); ++l)
    gaps.push_back(x[idx[l + 1]] - x[idx[l]]);
  return gaps;
}

template <class S>
S sum_squared_gaps(const std::vector<S>& x) {
  S acc = ScalarOps<S>::zero();
  for (const S& g : sorted_gaps(x)) acc += g * g;
  return acc;
}

// Identity check: with D the diagonal of the source graph's degrees and
// w_ij the (i,j) entry of A^T D A,
//   A^T D A = D - sum_{i<j} w_ij (e_i - e_j)(e_i - e_j)^T.
// Returns the largest entrywise deviation; exactly zero in rationals for
// every connected self-looped graph.
template <class S>
S check_decomposition(const UpdateMatrix<S>& a) {
  const int n = a.entries.size();
  const std::vector<int> deg = a.source.degrees();

  // lhs = A^T D A
  Matrix<S> lhs(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      S acc = ScalarOps<S>::zero();
      for (int k = 0; k < n; ++k)
        acc += a.entries.at(k, i) * ScalarOps<S>::from_int(deg[k]) * a.entries.at(k, j);
      lhs.at(i, j) = std::move(acc);
    }

  Matrix<S> rhs(n);
  for (int i = 0; i < n; ++i) rhs.at(i, i) = ScalarOps<S>::from_int(deg[i]);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const S& w = lhs.at(i, j);
      rhs.at(i, i) -= w;
      rhs.at(j, j) -= w;
      rhs.at(i, j) += w;
      rhs.at(j, i) += w;
    }

  S worst = ScalarOps<S>::zero();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      S dev = ScalarOps<S>::abs(lhs.at(i, j) - rhs.at(i, j));
      if (dev > worst) worst = std::move(dev);
    }
  return worst;
}

// Margin of V(Ax) <= V(x) - (1/2) sum of squared sorted gaps, for an update
// matrix whose graph is connected. The weighting degrees are taken from the
// source graph (under connectivity every node is at its nominal degree).
template <class S>
S check_v_decrease(const std::vector<S>& x, const UpdateMatrix<S>& a) {
  const StateVector<S> state = make_state(x, a.source.degrees());
  const S v_before = lyapunov_v(state);
  const S v_after = lyapunov_v(step(state, a.source));
  return v_before - sum_squared_gaps(x) * ScalarOps<S>::fraction(1, 2) - v_after;
}

namespace detail {
template <class S>
StateVector<S> window_end_state(const GraphSequence& window, const StateVector<S>& x0) {
  if (!is_connected(union_graph(std::span<const Graph>(window.graphs))))
    throw std::invalid_argument("window union is disconnected");
  StateVector<S> state = x0;
  for (const Graph& g : window.graphs) state = step(state, g);
  return state;
}
}  // namespace detail

// Margin of V(x(end)) <= V(x(start)) - (1/2) sum of squared sorted gaps at the
// window start, over one aligned window whose union is connected.
template <class S>
S check_window_v_decrease(const GraphSequence& window, const StateVector<S>& x0) {
  const StateVector<S> end = detail::window_end_state(window, x0);
  return lyapunov_v(x0) - sum_squared_gaps(x0.x) * ScalarOps<S>::fraction(1, 2) -
         lyapunov_v(end);
}

// Same decrease with V' in place of V.
template <class S>
S check_window_v_prime_decrease(const GraphSequence& window, const StateVector<S>& x0) {
  const StateVector<S> end = detail::window_end_state(window, x0);
  return lyapunov_v_prime(x0) - sum_squared_gaps(x0.x) * ScalarOps<S>::fraction(1, 2) -
         lyapunov_v_prime(end);
}

template <class S>
struct GapRatio {
  S ratio;  // sum of squared sorted gaps / V'(x)
  S bound;  // 1 / (n^2 d_max)
};

// The squared-gap sum covers at least a 1/(n^2 d_max) share of V'(x).
// Undefined for constant x (V' = 0).
template <class S>
GapRatio<S> check_gap_ratio(const std::vector<S>& x, const std::vector<int>& d) {
  const StateVector<S> state = make_state(x, d);
  const S vp = lyapunov_v_prime(state);
  if (vp == ScalarOps<S>::zero())
    throw std::invalid_argument("undefined ratio: constant state has V' = 0");
  const int n = state.size();
  const long d_max = *std::max_element(d.begin(), d.end());
  return {sum_squared_gaps(x) / vp,
          ScalarOps<S>::fraction(1, static_cast<long>(n) * n * d_max)};
}

// Deviation of the quantity  sum d_i (u_i - z)^2 - sum d_i (w_i - z)^2  from
// its value at z = 0, maximized over the supplied z values. Zero whenever the
// d-weighted sums of u and w agree.
template <class S>
S check_shift_invariance(const std::vector<S>& u, const std::vector<S>& w,
                         const std::vector<int>& d, const std::vector<S>& zs) {
  if (u.size() != w.size() || u.size() != d.size())
    throw std::invalid_argument("dimension mismatch");
  auto value_at = [&](const S& z) {
    S acc = ScalarOps<S>::zero();
    for (std::size_t i = 0; i < u.size(); ++i) {
      const S du = u[i] - z;
      const S dw = w[i] - z;
      acc += ScalarOps<S>::from_int(d[i]) * (du * du - dw * dw);
    }
    return acc;
  };
  const S base = value_at(ScalarOps<S>::zero());
  S worst = ScalarOps<S>::zero();
  for (const S& z : zs) {
    S dev = ScalarOps<S>::abs(value_at(z) - base);
    if (dev > worst) worst = std::move(dev);
  }
  return worst;
}

template <class S>
struct BlockContraction {
  std::vector<S> ratios;  // V'((k+1)B) / V'(kB) per completed block
  S threshold;            // 1 - 1/(2 n^3)
  bool hit_zero = false;  // V' reached zero; series truncated cleanly
};

// Per-window V' ratios of a run, truncated when V' reaches zero (never
// reported as 0/0). For B-connected sequences in the fixed-degree class every
// ratio is at most 1 - 1/(2 n^3).
//
// Zero for the float backend means V' <= 1e-18 * max(1, V'(0)): the state is
// then within ~1e-9 of consensus (the backend's standing tolerance, squared
// through the quadratic functional), and rounding can pin the iteration to a
// fixed point slightly off consensus, so ratios below this level carry no
// contraction information.
template <class S>
BlockContraction<S> per_block_contraction(const GraphSequence& seq, const StateVector<S>& x0,
                                          long horizon = -1) {
  const int B = seq.B;
  const long steps = horizon < 0 ? seq.length() : horizon;
  if (steps > seq.length()) throw std::out_of_range("horizon exceeds sequence length");
  const long blocks = steps / B;
  const int n = seq.n;

  BlockContraction<S> out;
  out.threshold = ScalarOps<S>::one() -
                  ScalarOps<S>::fraction(1, 2L * n * n * n);

  StateVector<S> state = x0;
  S vp = lyapunov_v_prime(state);
  [[maybe_unused]] const double float_floor =
      1e-18 * std::max(1.0, ScalarOps<S>::to_double(vp));
  auto effectively_zero = [&](const S& v) {
    if constexpr (ScalarOps<S>::exact)
      return v == ScalarOps<S>::zero();
    else
      return static_cast<double>(v) < float_floor;
  };
  for (long k = 0; k < blocks; ++k) {
    if (effectively_zero(vp)) {
      out.hit_zero = true;
      break;
    }
    for (long t = k * B; t < (k + 1) * B; ++t) state = step(state, seq.graphs[t]);
    S vp_next = lyapunov_v_prime(state);
    out.ratios.push_back(vp_next / vp);
    vp = std::move(vp_next);
  }
  if (!out.hit_zero && blocks > 0 && effectively_zero(vp)) out.hit_zero = true;
  return out;
}

template <class S>
struct DualityReport {
  S coefficient;  // ergodicity coefficient of the forward product
  S contraction;  // sign-vector contraction of the applied matrix of the
                  // reversed sequence, obtained by running the iteration
  bool equal = false;
};

// Forgetfulness/consensus duality: the forward t-step product's ergodicity
// coefficient equals the contraction factor of the matrix applied by running
// the reversed sequence as a consensus iteration. The applied matrix is
// reconstructed column-by-column from actual iteration runs, so the two sides
// follow fully independent routes.
template <class S>
DualityReport<S> check_forgetfulness_duality(const GraphSequence& seq, long t) {
  if (t < 0 || t > seq.length()) throw std::out_of_range("t exceeds sequence length");
  const int n = seq.n;

  const Matrix<S> forward = matrix_product<S>(seq, t, ProductOrder::Forward);
  const S coeff = ergodicity_coefficient(forward).value;

  // Reversed sequence applied as an iteration: x(k+1) = A(t-1-k) x(k).
  Matrix<S> applied(n);
  std::vector<int> ones(n, 1);
  for (int col = 0; col < n; ++col) {
    std::vector<S> e(n, ScalarOps<S>::zero());
    e[col] = ScalarOps<S>::one();
    StateVector<S> state = make_state(std::move(e), ones);
    for (long k = 0; k < t; ++k) state = step(state, seq.graphs[t - 1 - k]);
    for (int row = 0; row < n; ++row) applied.at(row, col) = state.x[row];
  }
  const S contraction = contraction_factor(applied).value;

  DualityReport<S> rep{coeff, contraction, false};
  rep.equal = Tolerance<S>::approx_equal(rep.coefficient, rep.contraction);
  return rep;
}

}  // namespace consensus
