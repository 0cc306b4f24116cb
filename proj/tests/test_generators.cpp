#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <span>

#include "consensus/generators.hpp"
#include "consensus/graph.hpp"
#include "support/test_support.hpp"

using namespace consensus;

TEST_CASE("two-star construction at n=4") {
  Graph g0 = two_star_graph(4, 0);
  CHECK(g0.has_edge(0, 1));  // left star
  CHECK(g0.has_edge(2, 3));  // right star
  CHECK(g0.has_edge(0, 2));  // bridge between centers
  CHECK(g0.edge_count() == 3);
  CHECK(g0.degrees() == std::vector<int>{3, 2, 3, 2});

  Graph g1 = two_star_graph(4, 1);
  CHECK(g1.has_edge(1, 0));
  CHECK(g1.has_edge(3, 2));
  CHECK(g1.has_edge(1, 3));
  CHECK(g1.degrees() == std::vector<int>{2, 3, 2, 3});

  CHECK_THROWS_AS(static_cast<void>(two_star_graph(5, 0)), std::invalid_argument);
  CHECK_THROWS_AS(static_cast<void>(two_star_graph(8, 4)), std::invalid_argument);
}

TEST_CASE("two-star sorted degree sequence is shift-independent") {
  for (int s = 0; s < 4; ++s) {
    auto d = two_star_graph(8, s).degrees();
    std::sort(d.begin(), d.end(), std::greater<>());
    CHECK(d == std::vector<int>{5, 5, 2, 2, 2, 2, 2, 2});
  }
}

TEST_CASE("two-star graphs are connected and mirror-symmetric") {
  for (int n : {4, 6, 8, 10}) {
    for (int s = 0; s < n / 2; ++s) {
      Graph g = two_star_graph(n, s);
      CHECK(is_connected(g));
      CHECK(validate_graph(g).empty());
      // Swapping the halves (i <-> i + n/2 mod n) maps the graph to itself.
      Graph swapped(n);
      for (auto [i, j] : g.edges())
        swapped.add_edge((i + n / 2) % n, (j + n / 2) % n);
      CHECK(swapped == g);
    }
  }
}

TEST_CASE("periodic counterexample sequences in both orientations") {
  GraphSequence fwd = counterexample_sequence({4, Orientation::Forward, 1});
  REQUIRE(fwd.length() == 2);
  CHECK(fwd.graphs[0] == two_star_graph(4, 0));
  CHECK(fwd.graphs[1] == two_star_graph(4, 1));

  GraphSequence rev = counterexample_sequence({4, Orientation::Reversed, 1});
  CHECK(rev.graphs[0] == two_star_graph(4, 1));
  CHECK(rev.graphs[1] == two_star_graph(4, 0));

  GraphSequence fwd3 = counterexample_sequence({6, Orientation::Forward, 4});
  CHECK(fwd3.length() == 12);
  for (long t = 0; t < fwd3.length(); ++t) {
    CHECK(fwd3.graphs[t] == two_star_graph(6, static_cast<int>(t % 3)));
    CHECK(is_connected(fwd3.graphs[t]));
  }
  CHECK(is_b_connected(fwd3, 1));
  CHECK(fwd3.B == 1);
}

TEST_CASE("per-node degrees move while the sorted profile stays fixed") {
  GraphSequence seq = counterexample_sequence({8, Orientation::Forward, 1});
  std::vector<std::vector<int>> per_step;
  for (const Graph& g : seq.graphs) per_step.push_back(g.degrees());
  // Sorted profile constant across time.
  for (auto d : per_step) {
    std::sort(d.begin(), d.end());
    std::vector<int> want{2, 2, 2, 2, 2, 2, 5, 5};
    CHECK(d == want);
  }
  // Individual nodes swap degrees between steps.
  bool some_node_changes = false;
  for (int i = 0; i < 8; ++i)
    if (per_step[0][i] != per_step[1][i]) some_node_changes = true;
  CHECK(some_node_changes);
  // Hence no constant profile admits the whole sequence.
  CHECK_FALSE(check_class_membership(seq, per_step[0]).empty());
}

TEST_CASE("union of one counterexample period is connected") {
  GraphSequence seq = counterexample_sequence({8, Orientation::Forward, 1});
  CHECK(is_connected(union_graph(std::span<const Graph>(seq.graphs))));
}

TEST_CASE("reverse_sequence is an involution preserving metadata") {
  GraphSequence fwd = counterexample_sequence({6, Orientation::Forward, 2});
  fwd.degree_profile = std::vector<int>{4, 2, 2, 4, 2, 2};
  GraphSequence rev = reverse_sequence(fwd);
  CHECK(rev.n == fwd.n);
  CHECK(rev.B == fwd.B);
  CHECK(rev.degree_profile == fwd.degree_profile);
  CHECK(reverse_sequence(rev).graphs == fwd.graphs);

  GraphSequence single = counterexample_sequence({4, Orientation::Forward, 1});
  single.graphs.erase(single.graphs.begin() + 1, single.graphs.end());
  CHECK(reverse_sequence(single).graphs == single.graphs);

  // The reversal of a forward period is the reversed-orientation period.
  GraphSequence f1 = counterexample_sequence({8, Orientation::Forward, 1});
  GraphSequence r1 = counterexample_sequence({8, Orientation::Reversed, 1});
  CHECK(reverse_sequence(f1).graphs == r1.graphs);
}

TEST_CASE("fixed-degree sequences keep the profile and the window property") {
  Engine eng = make_engine(123);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = draw_int(eng, 4, 8);
    Graph base = testsup::random_connected_graph(n, 0.35, eng);
    FixedDegreeOptions opts;
    opts.steps = 24;
    opts.B = draw_int(eng, 1, 3);
    opts.steps = 24 - 24 % opts.B;
    opts.isolation_rate = trial % 2 == 0 ? 0.0 : 0.4;
    opts.seed = 4000 + trial;
    GraphSequence seq = fixed_degree_sequence(base, opts);
    CHECK(seq.length() == opts.steps);
    CHECK(seq.degree_profile == base.degrees());
    CHECK(check_class_membership(seq, base.degrees()).empty());
    CHECK(is_b_connected(seq, opts.B));
    for (const Graph& g : seq.graphs) CHECK(validate_graph(g).empty());
  }
}

TEST_CASE("zero swaps and no isolation reproduce the base graph") {
  Graph ring(6);
  for (int i = 0; i < 6; ++i) ring.add_edge(i, (i + 1) % 6);
  FixedDegreeOptions opts;
  opts.steps = 5;
  opts.B = 1;
  opts.swap_attempts_per_step = 0;
  opts.seed = 9;
  GraphSequence seq = fixed_degree_sequence(ring, opts);
  for (const Graph& g : seq.graphs) CHECK(g == ring);
}

TEST_CASE("ring base keeps profile (3,...,3) with isolated steps allowed") {
  Graph ring(8);
  for (int i = 0; i < 8; ++i) ring.add_edge(i, (i + 1) % 8);
  FixedDegreeOptions opts;
  opts.steps = 30;
  opts.B = 3;
  opts.isolation_rate = 0.5;
  opts.seed = 77;
  GraphSequence seq = fixed_degree_sequence(ring, opts);
  for (const Graph& g : seq.graphs)
    for (int i = 0; i < 8; ++i) CHECK((g.degree(i) == 3 || g.degree(i) == 1));
}

TEST_CASE("generation is deterministic in the seed") {
  Engine eng = make_engine(321);
  Graph base = testsup::random_connected_graph(6, 0.4, eng);
  FixedDegreeOptions opts;
  opts.steps = 20;
  opts.B = 2;
  opts.isolation_rate = 0.3;
  opts.seed = 555;
  GraphSequence a = fixed_degree_sequence(base, opts);
  GraphSequence b = fixed_degree_sequence(base, opts);
  CHECK(a.graphs == b.graphs);
  opts.seed = 556;
  GraphSequence c = fixed_degree_sequence(base, opts);
  CHECK(a.graphs != c.graphs);
}

TEST_CASE("invalid bases are rejected") {
  FixedDegreeOptions opts;
  opts.steps = 4;
  Graph disconnected(4);
  disconnected.add_edge(0, 1);
  disconnected.add_edge(2, 3);
  CHECK_THROWS_AS(static_cast<void>(fixed_degree_sequence(disconnected, opts)),
                  std::invalid_argument);
  CHECK_THROWS_AS(static_cast<void>(fixed_degree_sequence(Graph(1), opts)),
                  std::invalid_argument);
  Graph base(4);
  base.add_edge(0, 1);
  base.add_edge(1, 2);
  base.add_edge(2, 3);
  opts.steps = 5;
  opts.B = 2;
  CHECK_THROWS_AS(static_cast<void>(fixed_degree_sequence(base, opts)),
                  std::invalid_argument);
}
