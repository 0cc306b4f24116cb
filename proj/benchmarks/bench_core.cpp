#include <benchmark/benchmark.h>

#include "consensus/analysis.hpp"
#include "consensus/generators.hpp"
#include "consensus/walk.hpp"

using namespace consensus;

namespace {

Graph ring(int n) {
  Graph g(n);
  for (int i = 0; i < n; ++i)
    if (!g.has_edge(i, (i + 1) % n)) g.add_edge(i, (i + 1) % n);
  return g;
}

GraphSequence swapped_ring_sequence(int n, long steps, int B) {
  FixedDegreeOptions opts;
  opts.steps = steps;
  opts.B = B;
  opts.isolation_rate = 0.2;
  opts.seed = 1;
  return fixed_degree_sequence(ring(n), opts);
}

void BM_BuildUpdateMatrixFloat(benchmark::State& state) {
  Graph g = ring(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_update_matrix<double>(g));
}
BENCHMARK(BM_BuildUpdateMatrixFloat)->Arg(8)->Arg(64);

void BM_StepFloat(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Graph g = ring(n);
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = i;
  auto s = make_state<double>(x, g.degrees());
  for (auto _ : state) {
    s = step(s, g);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_StepFloat)->Arg(8)->Arg(256);

void BM_MatrixProductFloat(benchmark::State& state) {
  GraphSequence seq = swapped_ring_sequence(static_cast<int>(state.range(0)), 64, 2);
  for (auto _ : state)
    benchmark::DoNotOptimize(matrix_product<double>(seq, 64, ProductOrder::Applied));
}
BENCHMARK(BM_MatrixProductFloat)->Arg(8)->Arg(16);

void BM_MatrixProductExact(benchmark::State& state) {
  GraphSequence seq = swapped_ring_sequence(6, 8, 1);
  for (auto _ : state)
    benchmark::DoNotOptimize(matrix_product<Rational>(seq, 8, ProductOrder::Forward));
}
BENCHMARK(BM_MatrixProductExact);

void BM_ContractionFactor(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  GraphSequence seq = swapped_ring_sequence(n, 16, 1);
  auto p = matrix_product<double>(seq, 16, ProductOrder::Applied);
  for (auto _ : state) benchmark::DoNotOptimize(contraction_factor(p));
}
BENCHMARK(BM_ContractionFactor)->Arg(8)->Arg(16);

void BM_EpsilonConsensusTime(benchmark::State& state) {
  GraphSequence seq = swapped_ring_sequence(8, 256, 2);
  for (auto _ : state)
    benchmark::DoNotOptimize(epsilon_consensus_time<double>(seq, 1e-3));
}
BENCHMARK(BM_EpsilonConsensusTime);

void BM_FixedDegreeGeneration(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(
        swapped_ring_sequence(static_cast<int>(state.range(0)), 256, 2));
}
BENCHMARK(BM_FixedDegreeGeneration)->Arg(8)->Arg(16);

void BM_CrossingExperiment(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(crossing_time_experiment(8, 100000, 100, 3));
}
BENCHMARK(BM_CrossingExperiment);

void BM_TwoStarPeriodCoefficient(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  GraphSequence seq = counterexample_sequence({n, Orientation::Forward, 4});
  for (auto _ : state)
    benchmark::DoNotOptimize(ergodicity_report<double>(seq, seq.length()));
}
BENCHMARK(BM_TwoStarPeriodCoefficient)->Arg(8)->Arg(12);

}  // namespace

BENCHMARK_MAIN();
