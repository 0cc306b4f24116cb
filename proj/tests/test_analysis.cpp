#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "consensus/analysis.hpp"
#include "consensus/generators.hpp"
#include "support/test_support.hpp"

using namespace consensus;
using R = Rational;

namespace {

Graph k2() {
  Graph g(2);
  g.add_edge(0, 1);
  return g;
}

Graph path3() {
  Graph g(3);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  return g;
}

GraphSequence constant_seq(const Graph& g, long len, int B = 1) {
  GraphSequence s;
  s.n = g.size();
  s.B = B;
  s.graphs.assign(len, g);
  return s;
}

}  // namespace

TEST_CASE("convergence-time bound values") {
  // Frozen from high-precision evaluation of B + 4 n^3 B ln(2n/eps).
  CHECK(theoretical_bound(2, 1, 0.01) ==
        doctest::Approx(192.72686550745542).epsilon(1e-12));
  CHECK(theoretical_bound(8, 2, 0.001) ==
        doctest::Approx(39652.689029004977).epsilon(1e-12));
  // ln(2n/eps) vanishes at eps = 2n, leaving exactly B.
  CHECK(theoretical_bound(2, 1, 4.0) == 1.0);

  CHECK_THROWS_AS(static_cast<void>(theoretical_bound(1, 1, 0.1)), std::invalid_argument);
  CHECK_THROWS_AS(static_cast<void>(theoretical_bound(4, 0, 0.1)), std::invalid_argument);
  CHECK_THROWS_AS(static_cast<void>(theoretical_bound(4, 1, 0.0)), std::invalid_argument);
  CHECK_THROWS_AS(static_cast<void>(theoretical_bound(4, 1, 9.0)), std::invalid_argument);
}

TEST_CASE("bound is monotone in n and B, antitone in epsilon") {
  Engine eng = make_engine(5);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = draw_int(eng, 2, 12);
    const int B = draw_int(eng, 1, 5);
    const double eps = 0.001 + 0.9 * draw_unit(eng);
    CHECK(theoretical_bound(n + 1, B, eps) > theoretical_bound(n, B, eps));
    CHECK(theoretical_bound(n, B + 1, eps) > theoretical_bound(n, B, eps));
    CHECK(theoretical_bound(n, B, eps * 0.5) > theoretical_bound(n, B, eps));
  }
}

TEST_CASE("matrix products: identity at t=0, single factor, both orders") {
  GraphSequence seq = constant_seq(k2(), 2);
  CHECK(matrix_product<R>(seq, 0, ProductOrder::Forward) == Matrix<R>::identity(2));
  CHECK(matrix_product<R>(seq, 1, ProductOrder::Forward) ==
        build_update_matrix<R>(k2()).entries);
  CHECK(matrix_product<R>(seq, 1, ProductOrder::Applied) ==
        build_update_matrix<R>(k2()).entries);
  // K2 averaging is idempotent.
  CHECK(matrix_product<R>(seq, 2, ProductOrder::Forward) ==
        build_update_matrix<R>(k2()).entries);
  CHECK_THROWS_AS(static_cast<void>(matrix_product<R>(seq, 3, ProductOrder::Forward)),
                  std::out_of_range);
}

TEST_CASE("product orders differ and transpose-relate on an asymmetric sequence") {
  // A(0) = path, A(1) = star at 0; the two orders disagree entrywise.
  Graph star(3);
  star.add_edge(0, 1);
  star.add_edge(0, 2);
  GraphSequence seq;
  seq.n = 3;
  seq.graphs = {path3(), star};
  auto fwd = matrix_product<R>(seq, 2, ProductOrder::Forward);
  auto app = matrix_product<R>(seq, 2, ProductOrder::Applied);
  CHECK(fwd != app);
  // Forward = A(0) A(1); applied = A(1) A(0).
  auto a0 = build_update_matrix<R>(path3()).entries;
  auto a1 = build_update_matrix<R>(star).entries;
  CHECK(fwd == a0 * a1);
  CHECK(app == a1 * a0);
}

TEST_CASE("ergodicity coefficient examples") {
  auto ident = Matrix<R>::identity(2);
  auto c = ergodicity_coefficient(ident);
  CHECK(c.value == R(1));
  CHECK(c.row_i == 0);
  CHECK(c.row_j == 1);

  Matrix<R> flat(3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) flat.at(i, j) = make_rational(1, 3);
  CHECK(ergodicity_coefficient(flat).value == R(0));

  Matrix<R> p(2);
  p.at(0, 0) = make_rational(1, 2);
  p.at(0, 1) = make_rational(1, 2);
  p.at(1, 0) = make_rational(1, 4);
  p.at(1, 1) = make_rational(3, 4);
  CHECK(ergodicity_coefficient(p).value == make_rational(1, 4));

  Matrix<R> bad(2);
  bad.at(0, 0) = R(2);
  CHECK_THROWS_AS(static_cast<void>(ergodicity_coefficient(bad)), std::invalid_argument);
}

TEST_CASE("contraction factor equals the coefficient on random stochastic matrices") {
  CHECK(contraction_factor(Matrix<R>::identity(4)).value == R(1));
  Matrix<R> flat(3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) flat.at(i, j) = make_rational(1, 3);
  CHECK(contraction_factor(flat).value == R(0));

  Engine eng = make_engine(17);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = draw_int(eng, 2, 6);
    Matrix<R> p(n);
    for (int i = 0; i < n; ++i) {
      // Random positive integer weights normalized by the row sum.
      long total = 0;
      std::vector<long> w(n);
      for (int j = 0; j < n; ++j) {
        w[j] = draw_int(eng, 0, 6);
        total += w[j];
      }
      if (total == 0) {
        w[draw_int(eng, 0, n - 1)] = 1;
        total = 1;
      }
      for (int j = 0; j < n; ++j) p.at(i, j) = make_rational(w[j], total);
    }
    CHECK(contraction_factor(p).value == ergodicity_coefficient(p).value);
  }
}

TEST_CASE("epsilon-consensus times") {
  SUBCASE("K2 reaches any epsilon in one step") {
    auto r = epsilon_consensus_time<R>(constant_seq(k2(), 3), 0.1);
    CHECK(r.reached);
    CHECK(r.t == 1);
  }
  SUBCASE("all-isolated never gets below one") {
    auto r = epsilon_consensus_time<R>(constant_seq(Graph(3), 5), 0.5);
    CHECK_FALSE(r.reached);
    CHECK(r.t == 5);
  }
  SUBCASE("path on three nodes at epsilon 1/4") {
    // Exact product scan: coefficient is 1/2 at t=1 and 1/4 at t=2.
    auto r = epsilon_consensus_time<R>(constant_seq(path3(), 6), 0.25);
    CHECK(r.reached);
    CHECK(r.t == 2);
  }
  SUBCASE("epsilon outside (0,1) is rejected") {
    CHECK_THROWS_AS(static_cast<void>(epsilon_consensus_time<R>(constant_seq(k2(), 1), 1.0)),
                    std::invalid_argument);
  }
}

TEST_CASE("weighted-gram decomposition identity, exhaustively for n <= 4") {
  CHECK(check_decomposition(build_update_matrix<R>(k2())) == R(0));
  CHECK(check_decomposition(build_update_matrix<R>(path3())) == R(0));
  for (int n = 1; n <= 4; ++n) {
    for (const Graph& g : testsup::all_connected_loopy_graphs(n)) {
      CAPTURE(n);
      CHECK(check_decomposition(build_update_matrix<R>(g)) == R(0));
    }
  }
}

TEST_CASE("V-decrease margin") {
  SUBCASE("constant state has zero margin") {
    std::vector<R> x(4, R(3));
    Engine eng = make_engine(3);
    Graph g = testsup::random_connected_graph(4, 0.5, eng);
    CHECK(check_v_decrease(x, build_update_matrix<R>(g)) == R(0));
  }
  SUBCASE("hand-computed K2 margin is 1/2") {
    std::vector<R> x{R(0), R(1)};
    CHECK(check_v_decrease(x, build_update_matrix<R>(k2())) == make_rational(1, 2));
  }
  SUBCASE("nonnegative on random connected graphs, exactly") {
    Engine eng = make_engine(29);
    for (int trial = 0; trial < 200; ++trial) {
      const int n = draw_int(eng, 2, 8);
      Graph g = testsup::random_connected_graph(n, 0.4, eng);
      auto x = testsup::random_rational_vector(n, eng);
      CHECK(check_v_decrease(x, build_update_matrix<R>(g)) >= R(0));
    }
  }
}

TEST_CASE("windowed decrease margins") {
  SUBCASE("B=1 window reduces to the single-step statement") {
    Engine eng = make_engine(53);
    for (int trial = 0; trial < 40; ++trial) {
      const int n = draw_int(eng, 2, 6);
      Graph g = testsup::random_connected_graph(n, 0.4, eng);
      auto x = testsup::random_rational_vector(n, eng);
      GraphSequence w = constant_seq(g, 1);
      w.degree_profile = g.degrees();
      auto x0 = make_state<R>(x, g.degrees());
      CHECK(check_window_v_decrease(w, x0) ==
            check_v_decrease(x, build_update_matrix<R>(g)));
    }
  }
  SUBCASE("alternating cycle/isolated window") {
    Graph cyc(4);
    cyc.add_edge(0, 1);
    cyc.add_edge(1, 2);
    cyc.add_edge(2, 3);
    cyc.add_edge(0, 3);
    GraphSequence w;
    w.n = 4;
    w.B = 2;
    w.graphs = {cyc, Graph(4)};
    w.degree_profile = cyc.degrees();
    Engine eng = make_engine(59);
    for (int trial = 0; trial < 50; ++trial) {
      auto x0 = make_state<R>(testsup::random_rational_vector(4, eng), cyc.degrees());
      CHECK(check_window_v_decrease(w, x0) >= R(0));
      CHECK(check_window_v_prime_decrease(w, x0) >= R(0));
    }
  }
  SUBCASE("disconnected window union is a precondition error") {
    GraphSequence w;
    w.n = 3;
    w.B = 2;
    w.graphs = {Graph(3), Graph(3)};
    auto x0 = make_state<R>(std::vector<R>{R(0), R(1), R(2)}, {2, 2, 2});
    CHECK_THROWS_AS(static_cast<void>(check_window_v_decrease(w, x0)),
                    std::invalid_argument);
  }
  SUBCASE("V' margin is invariant under shifting the state by a constant") {
    Engine eng = make_engine(61);
    Graph g = testsup::random_connected_graph(5, 0.4, eng);
    GraphSequence w = constant_seq(g, 1);
    auto x = testsup::random_rational_vector(5, eng);
    auto shifted = x;
    for (auto& v : shifted) v += make_rational(13, 3);
    auto m0 = check_window_v_prime_decrease(w, make_state<R>(x, g.degrees()));
    auto m1 = check_window_v_prime_decrease(w, make_state<R>(shifted, g.degrees()));
    CHECK(m0 == m1);
  }
}

TEST_CASE("squared-gap share of V'") {
  SUBCASE("two-node example") {
    auto r = check_gap_ratio<R>({R(0), R(1)}, {2, 2});
    CHECK(r.ratio == R(1));
    CHECK(r.bound == make_rational(1, 8));
    CHECK(r.ratio >= r.bound);
  }
  SUBCASE("constant state is rejected") {
    CHECK_THROWS_AS(static_cast<void>(check_gap_ratio<R>({R(2), R(2)}, {2, 2})),
                    std::invalid_argument);
  }
  SUBCASE("scaling the state leaves the ratio unchanged") {
    Engine eng = make_engine(67);
    for (int trial = 0; trial < 30; ++trial) {
      const int n = draw_int(eng, 2, 8);
      std::vector<int> d(n);
      for (auto& di : d) di = draw_int(eng, 2, 6);
      auto x = testsup::random_rational_vector(n, eng);
      if (spread(x) == R(0)) x[0] += R(1);
      auto scaled = x;
      for (auto& v : scaled) v *= R(10);
      CHECK(check_gap_ratio(x, d).ratio == check_gap_ratio(scaled, d).ratio);
    }
  }
  SUBCASE("one outlier among eight nodes stays above the bound") {
    std::vector<R> x(8, R(0));
    x[5] = R(1);
    std::vector<int> d(8, 4);
    auto r = check_gap_ratio(x, d);
    CHECK(r.ratio >= r.bound);
  }
  SUBCASE("random states respect the bound, exactly") {
    Engine eng = make_engine(71);
    for (int trial = 0; trial < 200; ++trial) {
      const int n = draw_int(eng, 2, 8);
      std::vector<int> d(n);
      for (auto& di : d) di = draw_int(eng, 1, n);
      auto x = testsup::random_rational_vector(n, eng);
      if (spread(x) == R(0)) x[0] += R(1);
      auto r = check_gap_ratio(x, d);
      CHECK(r.ratio >= r.bound);
    }
  }
}

TEST_CASE("per-block V' contraction") {
  SUBCASE("complete graph collapses in one block") {
    Graph k3(3);
    k3.add_edge(0, 1);
    k3.add_edge(0, 2);
    k3.add_edge(1, 2);
    GraphSequence seq = constant_seq(k3, 4);
    seq.degree_profile = k3.degrees();
    auto x0 = make_state<R>(std::vector<R>{R(0), R(1), R(5)}, k3.degrees());
    auto bc = per_block_contraction(seq, x0);
    REQUIRE(!bc.ratios.empty());
    CHECK(bc.ratios[0] == R(0));
    CHECK(bc.hit_zero);
  }
  SUBCASE("consensus start yields an empty series") {
    GraphSequence seq = constant_seq(path3(), 3);
    auto x0 = make_state<R>(std::vector<R>(3, R(2)), path3().degrees());
    auto bc = per_block_contraction(seq, x0);
    CHECK(bc.ratios.empty());
    CHECK(bc.hit_zero);
  }
  SUBCASE("every ratio stays under 1 - 1/(2 n^3) on random fixed-degree runs") {
    Engine eng = make_engine(73);
    for (int trial = 0; trial < 10; ++trial) {
      Graph base = testsup::random_connected_graph(4, 0.5, eng);
      FixedDegreeOptions opts;
      opts.steps = 12;
      opts.B = 2;
      opts.isolation_rate = 0.3;
      opts.seed = 1000 + trial;
      GraphSequence seq = fixed_degree_sequence(base, opts);
      auto x0 = make_state<R>(testsup::random_rational_vector(4, eng), base.degrees());
      auto bc = per_block_contraction(seq, x0);
      const R threshold = R(1) - make_rational(1, 128);
      CHECK(bc.threshold == threshold);
      for (const R& ratio : bc.ratios) CHECK(ratio <= threshold);
    }
  }
}

TEST_CASE("forgetfulness/consensus duality") {
  SUBCASE("one factor: both sides are the coefficient of A(0)") {
    GraphSequence seq = constant_seq(path3(), 1);
    auto rep = check_forgetfulness_duality<R>(seq, 1);
    CHECK(rep.equal);
    CHECK(rep.coefficient ==
          ergodicity_coefficient(build_update_matrix<R>(path3()).entries).value);
  }
  SUBCASE("exact equality on random degree-compliant sequences") {
    Engine eng = make_engine(79);
    for (int trial = 0; trial < 30; ++trial) {
      const int n = draw_int(eng, 2, 6);
      Graph base = testsup::random_connected_graph(n, 0.4, eng);
      FixedDegreeOptions opts;
      opts.steps = draw_int(eng, 1, 8);
      opts.B = 1;
      opts.seed = 2000 + trial;
      GraphSequence seq = fixed_degree_sequence(base, opts);
      auto rep = check_forgetfulness_duality<R>(seq, seq.length());
      CHECK(rep.equal);
      CHECK(rep.coefficient == rep.contraction);
    }
  }
  SUBCASE("exact equality on the two-star sequence") {
    GraphSequence seq = counterexample_sequence({8, Orientation::Forward, 2});
    auto rep = check_forgetfulness_duality<R>(seq, 8);
    CHECK(rep.equal);
  }
}

TEST_CASE("full-horizon products of bound-length fixed-degree sequences contract below epsilon") {
  // A sequence at least as long as the bound forgets its start: both the
  // forward product's coefficient and the applied product's contraction end
  // up below epsilon at the full horizon.
  const int n = 4, B = 2;
  const double eps = 0.05;
  const double bound = theoretical_bound(n, B, eps);
  const long raw = static_cast<long>(std::ceil(bound));
  const long steps = raw + (B - raw % B) % B;
  Engine eng = make_engine(83);
  for (int trial = 0; trial < 3; ++trial) {
    Graph base = testsup::random_connected_graph(n, 0.4, eng);
    FixedDegreeOptions opts;
    opts.steps = steps;
    opts.B = B;
    opts.isolation_rate = 0.4;
    opts.seed = 9000 + trial;
    GraphSequence seq = fixed_degree_sequence(base, opts);
    auto fwd = matrix_product<double>(seq, steps, ProductOrder::Forward);
    auto app = matrix_product<double>(seq, steps, ProductOrder::Applied);
    CHECK(ergodicity_coefficient(fwd).value <= eps);
    CHECK(contraction_factor(app).value <= eps);
  }
}

TEST_CASE("windowed margins hold on every aligned block of a longer run") {
  Engine eng = make_engine(89);
  Graph base = testsup::random_connected_graph(5, 0.4, eng);
  FixedDegreeOptions opts;
  opts.steps = 9;
  opts.B = 3;
  opts.isolation_rate = 0.4;
  opts.seed = 17;
  GraphSequence seq = fixed_degree_sequence(base, opts);
  auto state = make_state<R>(testsup::random_rational_vector(5, eng), base.degrees());
  for (long k = 0; k * 3 < seq.length(); ++k) {
    GraphSequence window = subsequence(seq, k * 3, 3);
    CHECK(check_window_v_decrease(window, state) >= R(0));
    CHECK(check_window_v_prime_decrease(window, state) >= R(0));
    for (const Graph& g : window.graphs) state = step(state, g);
  }
}

TEST_CASE("ergodicity report carries the product, coefficient, pair gaps, and contraction") {
  GraphSequence seq = constant_seq(path3(), 2);
  auto rep = ergodicity_report<R>(seq, 2);
  CHECK(rep.t == 2);
  CHECK(is_row_stochastic(rep.product));
  CHECK(rep.coefficient == make_rational(1, 4));
  CHECK(rep.contraction == rep.coefficient);
  CHECK(rep.pair_gaps.size() == 3);
  // The (0,2) pair attains the maximum.
  CHECK(rep.argmax_pair == std::pair<int, int>{0, 2});
}
