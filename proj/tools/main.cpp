#include <cmath>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cli_helpers.hpp"
#include "cmd_verify.hpp"
#include "consensus/analysis.hpp"
#include "consensus/generators.hpp"
#include "consensus/sequence_io.hpp"
#include "consensus/trajectory_io.hpp"
#include "consensus/version.hpp"
#include "consensus/walk.hpp"

namespace cli {
namespace {

using consensus::Graph;
using consensus::GraphSequence;
using consensus::Orientation;
using consensus::Rational;
using json = nlohmann::ordered_json;

Orientation parse_orientation(const std::string& s) {
  if (s == "forward") return Orientation::Forward;
  if (s == "reversed") return Orientation::Reversed;
  throw UsageError("orientation must be forward or reversed");
}

// Options describing where a sequence comes from: a file or a generator.
struct SequenceSource {
  std::string input;
  std::string gen;  // counterexample | fixed-degree
  int n = 8;
  long periods = 1;
  std::string orientation = "forward";
  long steps = 0;
  int B = 1;
  double isolation_rate = 0.0;
  std::string base = "ring";

  void add_options(CLI::App* cmd) {
    cmd->add_option("--input", input, "sequence file to load");
    cmd->add_option("--gen", gen, "generate instead: counterexample | fixed-degree");
    cmd->add_option("--n", n, "node count for generated sequences");
    cmd->add_option("--periods", periods, "counterexample: number of n/2-step periods");
    cmd->add_option("--orientation", orientation, "counterexample: forward | reversed");
    cmd->add_option("--steps", steps, "fixed-degree: sequence length");
    cmd->add_option("--B", B, "fixed-degree: connectivity window");
    cmd->add_option("--isolation-rate", isolation_rate,
                    "fixed-degree: per-step isolation probability");
    cmd->add_option("--base", base, "fixed-degree base graph: ring | complete | random");
  }

  GraphSequence load(std::uint64_t seed) const {
    if (!input.empty()) return consensus::read_sequence_file(input);
    if (gen == "counterexample")
      return consensus::counterexample_sequence({n, parse_orientation(orientation), periods});
    if (gen == "fixed-degree") {
      consensus::FixedDegreeOptions opts;
      opts.steps = steps;
      opts.B = B;
      opts.isolation_rate = isolation_rate;
      opts.seed = seed;
      return consensus::fixed_degree_sequence(base_graph(base, n, seed), opts);
    }
    if (gen.empty()) throw UsageError("need --input FILE or --gen KIND");
    throw UsageError("unknown generator '" + gen + "' (counterexample, fixed-degree)");
  }

  void describe(std::map<std::string, std::string>& config) const {
    if (!input.empty()) {
      config["input"] = input;
      return;
    }
    config["gen"] = gen;
    config["n"] = std::to_string(n);
    if (gen == "counterexample") {
      config["periods"] = std::to_string(periods);
      config["orientation"] = orientation;
    } else {
      config["steps"] = std::to_string(steps);
      config["B"] = std::to_string(B);
      config["isolation_rate"] = consensus::format_double_17(isolation_rate);
      config["base"] = base;
    }
  }
};

// --- run ---------------------------------------------------------------------

struct RunOptions {
  SequenceSource source;
  std::string x0 = "ramp";
  std::string backend = "float";
  long horizon = -1;
  std::string output;
  std::uint64_t seed = 0;
};

template <class S>
void write_run_csv(const RunOptions& opt, const GraphSequence& seq, long horizon,
                   std::map<std::string, std::string> config) {
  auto x0 = consensus::make_state<S>(parse_initial_state<S>(opt.x0, seq.n),
                                     seq.profile_or_inferred());
  OutputTarget target(opt.output);
  consensus::write_trajectory_csv(target.stream(), seq, x0,
                                  standard_metadata(config, opt.seed), horizon);
}

int cmd_run(const RunOptions& opt) {
  GraphSequence seq = opt.source.load(opt.seed);
  const long horizon = opt.horizon < 0 ? seq.length() : opt.horizon;
  if (horizon > seq.length())
    throw UsageError("horizon " + std::to_string(horizon) + " exceeds sequence length " +
                     std::to_string(seq.length()));
  std::map<std::string, std::string> config{{"command", "run"},
                                            {"x0", opt.x0},
                                            {"backend", opt.backend},
                                            {"horizon", std::to_string(horizon)}};
  opt.source.describe(config);
  if (opt.backend == "exact")
    write_run_csv<Rational>(opt, seq, horizon, std::move(config));
  else if (opt.backend == "float")
    write_run_csv<double>(opt, seq, horizon, std::move(config));
  else
    throw UsageError("backend must be exact or float");
  return kOk;
}

// --- bound -------------------------------------------------------------------

struct BoundOptions {
  int n = 0;
  int B = 1;
  double epsilon = 0.0;
  bool measure = false;
  std::string base = "ring";
  double isolation_rate = 0.0;
  std::uint64_t seed = 0;
  std::string format = "text";
  std::string output;
};

int cmd_bound(const BoundOptions& opt) {
  if (!(opt.epsilon > 0.0 && opt.epsilon < 1.0))
    throw UsageError("epsilon must be in (0,1)");
  consensus::BoundReport report;
  report.n = opt.n;
  report.B = opt.B;
  report.epsilon = opt.epsilon;
  report.bound = consensus::theoretical_bound(opt.n, opt.B, opt.epsilon);

  if (opt.measure) {
    consensus::FixedDegreeOptions gopts;
    gopts.B = opt.B;
    gopts.isolation_rate = opt.isolation_rate;
    gopts.seed = opt.seed;
    const long raw = static_cast<long>(std::ceil(report.bound));
    gopts.steps = raw + (opt.B - raw % opt.B) % opt.B;
    GraphSequence seq =
        consensus::fixed_degree_sequence(base_graph(opt.base, opt.n, opt.seed), gopts);
    auto result = consensus::epsilon_consensus_time<double>(seq, opt.epsilon);
    if (result.reached) {
      report.measured_time = result.t;
      report.slack = report.bound - static_cast<double>(result.t);
    }
  }

  OutputTarget target(opt.output);
  std::map<std::string, std::string> config{
      {"command", "bound"},         {"n", std::to_string(opt.n)},
      {"B", std::to_string(opt.B)}, {"epsilon", consensus::format_double_17(opt.epsilon)},
      {"base", opt.base},           {"measure", opt.measure ? "1" : "0"}};
  if (opt.format == "json") {
    json j;
    j["toolkit"] = std::string("equal-neighbor-consensus/") + consensus::toolkit_version();
    j["seed"] = opt.seed;
    j["config"] = config_string(config);
    j["n"] = report.n;
    j["B"] = report.B;
    j["epsilon"] = report.epsilon;
    j["bound"] = report.bound;
    if (report.measured_time) {
      j["measured_time"] = *report.measured_time;
      j["slack"] = *report.slack;
    } else if (opt.measure) {
      j["measured_time"] = nullptr;
    }
    target.stream() << j.dump() << "\n";
  } else {
    auto& os = target.stream();
    for (const auto& [k, v] : standard_metadata(config, opt.seed))
      os << "# " << k << "=" << v << "\n";
    os << "bound = " << consensus::format_double_17(report.bound) << "\n";
    if (opt.measure) {
      if (report.measured_time) {
        os << "measured_time = " << *report.measured_time << "\n";
        os << "slack = " << consensus::format_double_17(*report.slack) << "\n";
      } else {
        os << "measured_time = not reached\n";
      }
    }
  }
  if (opt.measure && !report.measured_time) return kCheckFailure;
  return kOk;
}

// --- counterexample ----------------------------------------------------------

struct CounterexampleOptions {
  int n = 8;
  double epsilon = 0.25;
  long max_t = -1;
  std::string backend = "float";
  std::string format = "text";
  std::string output;
};

template <class S>
int scan_counterexample(const CounterexampleOptions& opt) {
  const int half = opt.n / 2;
  const double lower_bound = std::pow(2.0, half) / 8.0;
  const long max_t =
      opt.max_t > 0 ? opt.max_t : std::min<long>(1000000, 64L * (1L << std::min(half, 40)));

  // Applied product of the reversed periodic sequence, advanced one period at
  // a time; contraction is evaluated at each multiple of n/2.
  GraphSequence period = consensus::counterexample_sequence(
      {opt.n, Orientation::Reversed, 1});
  consensus::Matrix<S> product = consensus::Matrix<S>::identity(opt.n);
  std::vector<std::pair<long, double>> series;
  long first_t = -1;
  for (long t = 0; t + half <= max_t;) {
    for (int k = 0; k < half; ++k)
      product = consensus::build_update_matrix<S>(period.graphs[k]).entries * product;
    t += half;
    const double factor =
        consensus::ScalarOps<S>::to_double(consensus::contraction_factor(product).value);
    series.emplace_back(t, factor);
    if (factor <= opt.epsilon) {
      first_t = t;
      break;
    }
  }

  OutputTarget target(opt.output);
  std::map<std::string, std::string> config{
      {"command", "counterexample"},
      {"n", std::to_string(opt.n)},
      {"epsilon", consensus::format_double_17(opt.epsilon)},
      {"backend", opt.backend},
      {"max_t", std::to_string(max_t)}};
  if (opt.format == "json") {
    json j;
    j["toolkit"] = std::string("equal-neighbor-consensus/") + consensus::toolkit_version();
    j["seed"] = 0;
    j["config"] = config_string(config);
    j["n"] = opt.n;
    j["epsilon"] = opt.epsilon;
    j["lower_bound"] = lower_bound;
    j["first_t"] = first_t < 0 ? json(nullptr) : json(first_t);
    json s = json::array();
    for (auto [t, factor] : series) s.push_back({{"t", t}, {"contraction", factor}});
    j["series"] = std::move(s);
    target.stream() << j.dump() << "\n";
  } else {
    auto& os = target.stream();
    for (const auto& [k, v] : standard_metadata(config, 0)) os << "# " << k << "=" << v << "\n";
    os << "lower_bound = " << consensus::format_double_17(lower_bound) << "\n";
    for (auto [t, factor] : series)
      os << "t=" << t << " contraction=" << consensus::format_double_17(factor) << "\n";
    if (first_t >= 0)
      os << "first_t = " << first_t << "\n";
    else
      os << "first_t = not reached within " << max_t << "\n";
  }
  return kOk;
}

int cmd_counterexample(const CounterexampleOptions& opt) {
  if (opt.n < 4 || opt.n % 2 != 0) throw UsageError("n must be even and at least 4");
  if (!(opt.epsilon > 0.0 && opt.epsilon < 1.0)) throw UsageError("epsilon must be in (0,1)");
  if (opt.backend == "exact") return scan_counterexample<Rational>(opt);
  if (opt.backend == "float") return scan_counterexample<double>(opt);
  throw UsageError("backend must be exact or float");
}

// --- generate ----------------------------------------------------------------

struct GenerateOptions {
  SequenceSource source;  // input ignored; gen drives everything
  std::uint64_t seed = 0;
  std::string output;
};

int cmd_generate(const GenerateOptions& opt) {
  if (opt.source.gen.empty()) throw UsageError("generate needs --gen KIND");
  GraphSequence seq = opt.source.load(opt.seed);
  std::map<std::string, std::string> config{{"command", "generate"}};
  opt.source.describe(config);
  OutputTarget target(opt.output);
  for (const auto& [k, v] : standard_metadata(config, opt.seed))
    target.stream() << "# " << k << "=" << v << "\n";
  consensus::write_sequence(target.stream(), seq);
  return kOk;
}

// --- crossing ----------------------------------------------------------------

struct CrossingOptions {
  int n = 8;
  long trials = 10000;
  long max_steps = 100000;
  std::uint64_t seed = 0;
  std::string output;
};

int cmd_crossing(const CrossingOptions& opt) {
  if (opt.n < 4 || opt.n % 2 != 0) throw UsageError("n must be even and at least 4");
  auto stats = consensus::crossing_time_experiment(opt.n, opt.max_steps, opt.trials, opt.seed);
  std::map<std::string, std::string> config{{"command", "crossing"},
                                            {"n", std::to_string(opt.n)},
                                            {"trials", std::to_string(opt.trials)},
                                            {"max_steps", std::to_string(opt.max_steps)}};
  json j = json::parse(consensus::crossing_stats_json(stats));
  j["toolkit"] = std::string("equal-neighbor-consensus/") + consensus::toolkit_version();
  j["config"] = config_string(config);
  OutputTarget target(opt.output);
  target.stream() << j.dump() << "\n";
  return kOk;
}

}  // namespace
}  // namespace cli

int main(int argc, char** argv) {
  CLI::App app{"equal-neighbor consensus toolkit: simulate averaging dynamics over "
               "time-varying graphs and verify their contraction properties"};
  app.require_subcommand(1);
  app.set_version_flag("--version", consensus::toolkit_version());

  cli::RunOptions run_opt;
  auto* run = app.add_subcommand("run", "simulate the iteration, write trajectory CSV");
  run_opt.source.add_options(run);
  run->add_option("--x0", run_opt.x0, "initial state: list, ramp, split, ones, indicator:<i>");
  run->add_option("--backend", run_opt.backend, "exact | float");
  run->add_option("--horizon", run_opt.horizon, "number of steps (default: full sequence)");
  run->add_option("--output", run_opt.output, "output path (default: stdout)");
  run->add_option("--seed", run_opt.seed, "seed for generated sequences");

  cli::BoundOptions bound_opt;
  auto* bound = app.add_subcommand("bound", "polynomial convergence-time bound, optionally "
                                            "measured against a generated sequence");
  bound->add_option("--n", bound_opt.n, "node count")->required();
  bound->add_option("--B", bound_opt.B, "connectivity window");
  bound->add_option("--epsilon", bound_opt.epsilon, "target contraction, in (0,1)")->required();
  bound->add_flag("--measure", bound_opt.measure, "certify the consensus time of an instance");
  bound->add_option("--base", bound_opt.base, "instance base graph: ring | complete | random");
  bound->add_option("--isolation-rate", bound_opt.isolation_rate,
                    "instance per-step isolation probability");
  bound->add_option("--seed", bound_opt.seed, "instance seed");
  bound->add_option("--format", bound_opt.format, "text | json");
  bound->add_option("--output", bound_opt.output, "output path (default: stdout)");

  cli::CounterexampleOptions cx_opt;
  auto* cx = app.add_subcommand("counterexample", "contraction scan of the degree-swapping "
                                                  "two-star sequence");
  cx->add_option("--n", cx_opt.n, "even node count >= 4")->required();
  cx->add_option("--epsilon", cx_opt.epsilon, "target contraction (default 1/4)");
  cx->add_option("--max-t,--max-steps", cx_opt.max_t, "scan horizon in steps");
  cx->add_option("--backend", cx_opt.backend, "exact | float");
  cx->add_option("--format", cx_opt.format, "text | json");
  cx->add_option("--output", cx_opt.output, "output path (default: stdout)");

  cli::VerifyOptions verify_opt;
  auto* verify = app.add_subcommand("verify", "run invariant suites, emit JSON records");
  verify->add_option("suite", verify_opt.suite,
                     "all, lemma-decomp, vdecrease, bconndec, vprime, diff, zchange, "
                     "weight-invariance, conservation, duality");
  verify->add_option("--seed", verify_opt.seed, "suite seed");
  verify->add_option("--trials", verify_opt.trials, "instances per suite");
  verify->add_option("--n", verify_opt.n, "max node count override");
  verify->add_option("--t", verify_opt.t, "max horizon override (duality)");
  verify->add_option("--output", verify_opt.output, "output path (default: stdout)");

  cli::GenerateOptions gen_opt;
  auto* gen = app.add_subcommand("generate", "emit a graph-sequence file");
  gen_opt.source.add_options(gen);
  gen->add_option("--seed", gen_opt.seed, "generator seed");
  gen->add_option("--output", gen_opt.output, "output path (default: stdout)");

  cli::CrossingOptions cross_opt;
  auto* cross = app.add_subcommand("crossing", "first-passage statistics of the two-star walk");
  cross->add_option("--n", cross_opt.n, "even node count >= 4")->required();
  cross->add_option("--trials", cross_opt.trials, "number of sampled walks");
  cross->add_option("--max-steps", cross_opt.max_steps, "censoring horizon per walk");
  cross->add_option("--seed", cross_opt.seed, "master seed (per-walk substreams)");
  cross->add_option("--output", cross_opt.output, "output path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kUsageError;
  }

  try {
    if (*run) return cli::cmd_run(run_opt);
    if (*bound) return cli::cmd_bound(bound_opt);
    if (*cx) return cli::cmd_counterexample(cx_opt);
    if (*verify) return cli::run_verify(verify_opt);
    if (*gen) return cli::cmd_generate(gen_opt);
    if (*cross) return cli::cmd_crossing(cross_opt);
  } catch (const cli::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kUsageError;
  } catch (const consensus::SequenceParseError& e) {
    std::cerr << "error: malformed sequence file, " << e.what() << "\n";
    return cli::kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kUsageError;
  }
  return cli::kUsageError;
}
