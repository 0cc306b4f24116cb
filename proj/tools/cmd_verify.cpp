#include "cmd_verify.hpp"

#include <functional>
#include <vector>

#include <json.hpp>

#include "cli_helpers.hpp"
#include "consensus/analysis.hpp"
#include "consensus/generators.hpp"
#include "consensus/walk.hpp"

namespace cli {

namespace {

using consensus::Engine;
using consensus::Graph;
using consensus::GraphSequence;
using consensus::Rational;
using json = nlohmann::ordered_json;
using R = Rational;

std::string rat(const R& v) { return consensus::ScalarOps<R>::str(v); }

R random_rational(Engine& eng) {
  return consensus::make_rational(consensus::draw_int(eng, -24, 24),
                                  consensus::draw_int(eng, 1, 8));
}

std::vector<R> random_rational_vector(int n, Engine& eng) {
  std::vector<R> v(n);
  for (auto& e : v) e = random_rational(eng);
  return v;
}

// All connected graphs with self-loops on n nodes, by edge-mask enumeration.
std::vector<Graph> connected_loopy_graphs(int n) {
  std::vector<std::pair<int, int>> slots;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) slots.emplace_back(i, j);
  std::vector<Graph> out;
  for (std::uint32_t mask = 0; mask < (1u << slots.size()); ++mask) {
    std::vector<std::pair<int, int>> edges;
    for (std::size_t k = 0; k < slots.size(); ++k)
      if (mask >> k & 1u) edges.push_back(slots[k]);
    Graph g = Graph::with_edges(n, edges);
    if (consensus::is_connected(g)) out.push_back(std::move(g));
  }
  return out;
}

GraphSequence random_profile_sequence(int n, int B, long steps, double isolation,
                                      std::uint64_t seed) {
  Engine base_eng = consensus::make_engine(seed);
  Graph base = random_base_graph(n, base_eng);
  consensus::FixedDegreeOptions opts;
  opts.steps = steps;
  opts.B = B;
  opts.isolation_rate = isolation;
  opts.seed = seed;
  return consensus::fixed_degree_sequence(base, opts);
}

struct SuiteContext {
  const VerifyOptions& options;
  std::vector<json>& records;
  bool& all_pass;

  void emit(json record) {
    all_pass &= record.at("pass").get<bool>();
    records.push_back(std::move(record));
  }
};

void suite_lemma_decomp(SuiteContext& ctx) {
  const int max_n = ctx.options.n < 0 ? 5 : std::min(ctx.options.n, 6);
  for (int n = 1; n <= max_n; ++n) {
    R worst(0);
    long count = 0;
    for (const Graph& g : connected_loopy_graphs(n)) {
      R dev = consensus::check_decomposition(consensus::build_update_matrix<R>(g));
      if (dev > worst) worst = dev;
      ++count;
    }
    ctx.emit({{"check", "lemma-decomp"},
              {"params", {{"n", n}, {"graphs", count}}},
              {"deviation", rat(worst)},
              {"pass", worst == R(0)}});
  }
}

void suite_vdecrease(SuiteContext& ctx) {
  const int max_n = ctx.options.n < 0 ? 8 : ctx.options.n;
  Engine eng = consensus::make_engine(ctx.options.seed);
  R worst = R(1);  // margins are nonnegative; track the minimum
  bool ok = true;
  for (int trial = 0; trial < ctx.options.trials; ++trial) {
    const int n = consensus::draw_int(eng, 2, max_n);
    Graph g = random_base_graph(n, eng);
    auto x = random_rational_vector(n, eng);
    R margin = consensus::check_v_decrease(x, consensus::build_update_matrix<R>(g));
    ok &= margin >= R(0);
    if (margin < worst) worst = margin;
  }
  ctx.emit({{"check", "vdecrease"},
            {"params",
             {{"trials", ctx.options.trials}, {"max_n", max_n}, {"seed", ctx.options.seed}}},
            {"margin", rat(worst)},
            {"pass", ok}});
}

void suite_window(SuiteContext& ctx, const std::string& name, bool use_v_prime) {
  const int max_n = ctx.options.n < 0 ? 8 : ctx.options.n;
  Engine eng = consensus::make_engine(ctx.options.seed + (use_v_prime ? 1 : 0));
  R worst = R(1);
  bool ok = true;
  for (int trial = 0; trial < ctx.options.trials; ++trial) {
    const int n = consensus::draw_int(eng, 2, max_n);
    const int B = consensus::draw_int(eng, 1, 3);
    GraphSequence window =
        random_profile_sequence(n, B, B, 0.5, consensus::substream_seed(ctx.options.seed, trial));
    auto x0 = consensus::make_state<R>(random_rational_vector(n, eng),
                                       window.profile_or_inferred());
    R margin = use_v_prime ? consensus::check_window_v_prime_decrease(window, x0)
                           : consensus::check_window_v_decrease(window, x0);
    ok &= margin >= R(0);
    if (margin < worst) worst = margin;
  }
  ctx.emit({{"check", name},
            {"params",
             {{"trials", ctx.options.trials},
              {"max_n", max_n},
              {"max_B", 3},
              {"seed", ctx.options.seed}}},
            {"margin", rat(worst)},
            {"pass", ok}});
}

void suite_diff(SuiteContext& ctx) {
  const int max_n = ctx.options.n < 0 ? 8 : ctx.options.n;
  Engine eng = consensus::make_engine(ctx.options.seed);
  R worst = R(1);
  bool ok = true;
  for (int trial = 0; trial < ctx.options.trials; ++trial) {
    const int n = consensus::draw_int(eng, 2, max_n);
    std::vector<int> d(n);
    for (auto& di : d) di = consensus::draw_int(eng, 1, n);
    auto x = random_rational_vector(n, eng);
    if (consensus::spread(x) == R(0)) x[0] += R(1);
    auto r = consensus::check_gap_ratio(x, d);
    R margin = r.ratio - r.bound;
    ok &= margin >= R(0);
    if (margin < worst) worst = margin;
  }
  ctx.emit({{"check", "diff"},
            {"params",
             {{"trials", ctx.options.trials}, {"max_n", max_n}, {"seed", ctx.options.seed}}},
            {"margin", rat(worst)},
            {"pass", ok}});
}

void suite_zchange(SuiteContext& ctx) {
  const int max_n = ctx.options.n < 0 ? 8 : ctx.options.n;
  Engine eng = consensus::make_engine(ctx.options.seed);
  const std::vector<R> zs{R(0), R(1), R(-7), consensus::make_rational(27, 2)};
  R worst(0);
  for (int trial = 0; trial < ctx.options.trials; ++trial) {
    const int n = consensus::draw_int(eng, 2, max_n);
    std::vector<int> d(n);
    for (auto& di : d) di = consensus::draw_int(eng, 1, 6);
    auto u = random_rational_vector(n, eng);
    auto w = random_rational_vector(n, eng);
    R su(0), sw(0);
    for (int i = 0; i < n; ++i) {
      su += R(d[i]) * u[i];
      sw += R(d[i]) * w[i];
    }
    w[n - 1] += (su - sw) / R(d[n - 1]);
    R dev = consensus::check_shift_invariance(u, w, d, zs);
    if (dev > worst) worst = dev;
  }
  ctx.emit({{"check", "zchange"},
            {"params",
             {{"trials", ctx.options.trials}, {"max_n", max_n}, {"seed", ctx.options.seed}}},
            {"deviation", rat(worst)},
            {"pass", worst == R(0)}});
}

void suite_weight_invariance(SuiteContext& ctx) {
  const int max_n = ctx.options.n < 0 ? 8 : ctx.options.n;
  Engine eng = consensus::make_engine(ctx.options.seed);
  R worst(0);
  for (int trial = 0; trial < ctx.options.trials; ++trial) {
    const int n = consensus::draw_int(eng, 2, max_n);
    GraphSequence seq =
        random_profile_sequence(n, 2, 4, 0.6, consensus::substream_seed(ctx.options.seed, trial));
    const std::vector<int> d = seq.profile_or_inferred();
    for (const Graph& g : seq.graphs) {
      auto a = consensus::build_update_matrix<R>(g);
      for (int j = 0; j < n; ++j) {
        R acc(0);
        for (int i = 0; i < n; ++i) acc += R(d[i]) * a.entries.at(i, j);
        R dev = consensus::ScalarOps<R>::abs(acc - R(d[j]));
        if (dev > worst) worst = dev;
      }
    }
  }
  ctx.emit({{"check", "weight-invariance"},
            {"params",
             {{"trials", ctx.options.trials}, {"max_n", max_n}, {"seed", ctx.options.seed}}},
            {"deviation", rat(worst)},
            {"pass", worst == R(0)}});
}

void suite_conservation(SuiteContext& ctx) {
  const int max_n = ctx.options.n < 0 ? 6 : ctx.options.n;
  Engine eng = consensus::make_engine(ctx.options.seed);
  R worst(0);
  bool monotone = true;
  for (int trial = 0; trial < ctx.options.trials; ++trial) {
    const int n = consensus::draw_int(eng, 2, max_n);
    const int B = consensus::draw_int(eng, 1, 3);
    GraphSequence seq = random_profile_sequence(
        n, B, 12 - 12 % B, 0.3, consensus::substream_seed(ctx.options.seed, trial));
    auto x0 = consensus::make_state<R>(random_rational_vector(n, eng),
                                       seq.profile_or_inferred());
    auto result = consensus::run(seq, x0);
    const R expected = result.log.front().weighted_avg;
    for (std::size_t t = 0; t < result.log.size(); ++t) {
      R dev = consensus::ScalarOps<R>::abs(result.log[t].weighted_avg - expected);
      if (dev > worst) worst = dev;
      if (t > 0) {
        monotone &= result.log[t].spread <= result.log[t - 1].spread;
        monotone &= result.log[t].v_prime <= result.log[t - 1].v_prime;
        monotone &= result.log[t].v <= result.log[t - 1].v;
      }
    }
  }
  ctx.emit({{"check", "conservation"},
            {"params",
             {{"trials", ctx.options.trials},
              {"max_n", max_n},
              {"horizon", 12},
              {"seed", ctx.options.seed}}},
            {"deviation", rat(worst)},
            {"pass", worst == R(0) && monotone}});
}

void suite_duality(SuiteContext& ctx) {
  const int max_n = ctx.options.n < 0 ? 6 : ctx.options.n;
  const int max_t = ctx.options.t < 0 ? 8 : ctx.options.t;
  Engine eng = consensus::make_engine(ctx.options.seed);
  R worst(0);
  for (int trial = 0; trial < ctx.options.trials; ++trial) {
    const int n = consensus::draw_int(eng, 2, max_n);
    const long t = consensus::draw_int(eng, 1, max_t);
    GraphSequence seq =
        random_profile_sequence(n, 1, t, 0.0, consensus::substream_seed(ctx.options.seed, trial));
    auto rep = consensus::check_forgetfulness_duality<R>(seq, t);
    R dev = consensus::ScalarOps<R>::abs(rep.coefficient - rep.contraction);
    if (dev > worst) worst = dev;
  }
  ctx.emit({{"check", "duality"},
            {"params",
             {{"trials", ctx.options.trials},
              {"max_n", max_n},
              {"max_t", max_t},
              {"seed", ctx.options.seed}}},
            {"deviation", rat(worst)},
            {"pass", worst == R(0)}});

  // The degree-swapping sequence itself, one full period pair.
  GraphSequence cx = consensus::counterexample_sequence(
      {8, consensus::Orientation::Forward, 2});
  auto rep = consensus::check_forgetfulness_duality<R>(cx, 8);
  R dev = consensus::ScalarOps<R>::abs(rep.coefficient - rep.contraction);
  ctx.emit({{"check", "duality-two-star"},
            {"params", {{"n", 8}, {"t", 8}}},
            {"deviation", rat(dev)},
            {"pass", dev == R(0)}});
}

}  // namespace

int run_verify(const VerifyOptions& options) {
  std::vector<std::pair<std::string, std::function<void(SuiteContext&)>>> registry{
      {"lemma-decomp", suite_lemma_decomp},
      {"vdecrease", suite_vdecrease},
      {"bconndec", [](SuiteContext& c) { suite_window(c, "bconndec", false); }},
      {"vprime", [](SuiteContext& c) { suite_window(c, "vprime", true); }},
      {"diff", suite_diff},
      {"zchange", suite_zchange},
      {"weight-invariance", suite_weight_invariance},
      {"conservation", suite_conservation},
      {"duality", suite_duality},
  };

  std::vector<json> records;
  bool all_pass = true;
  SuiteContext ctx{options, records, all_pass};

  bool matched = false;
  for (auto& [name, fn] : registry) {
    if (options.suite == "all" || options.suite == name) {
      fn(ctx);
      matched = true;
    }
  }
  if (!matched) throw UsageError("unknown suite '" + options.suite + "'");

  const std::map<std::string, std::string> config{
      {"command", "verify"},
      {"suite", options.suite},
      {"trials", std::to_string(options.trials)},
      {"n", std::to_string(options.n)},
      {"t", std::to_string(options.t)}};
  json header;
  header["toolkit"] = std::string("equal-neighbor-consensus/") + consensus::toolkit_version();
  header["seed"] = options.seed;
  header["config"] = config_string(config);

  OutputTarget target(options.output);
  target.stream() << header.dump() << "\n";
  for (const json& record : records) target.stream() << record.dump() << "\n";
  return all_pass ? kOk : kCheckFailure;
}

}  // namespace cli
