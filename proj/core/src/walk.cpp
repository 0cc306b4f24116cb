#include "consensus/walk.hpp"

#include <algorithm>

#include <json.hpp>

#include "consensus/generators.hpp"

namespace consensus {

WalkState walk_step(WalkState state, const Graph& g) {
  const auto& nb = g.neighbors(state.position);
  state.position = nb[draw_below(state.rng, nb.size())];
  state.time += 1;
  return state;
}

CrossingStats crossing_time_experiment(int n, long max_steps, long num_samples,
                                       std::uint64_t seed) {
  if (n < 4 || n % 2 != 0) throw std::invalid_argument("crossing experiment needs even n >= 4");
  if (max_steps < 1 || num_samples < 1)
    throw std::invalid_argument("max_steps and num_samples must be positive");
  const int half = n / 2;

  // One period of the forward shift cycle; the walk runs it periodically.
  std::vector<Graph> period;
  period.reserve(half);
  for (int s = 0; s < half; ++s) period.push_back(two_star_graph(n, s));

  CrossingStats stats;
  stats.n = n;
  stats.seed = seed;

  // At time 0 the emerged node is half-1: it was the center one step earlier
  // (shift wraps to half-1 at position -1 of the cycle).
  const int start = half - 1;
  long long total = 0;
  for (long sample = 0; sample < num_samples; ++sample) {
    WalkState w = make_walk(start, substream_seed(seed, static_cast<std::uint64_t>(sample)));
    long crossed_at = -1;
    while (w.time < max_steps) {
      w = walk_step(w, period[w.time % half]);
      if (w.position >= half) {
        crossed_at = w.time;
        break;
      }
    }
    if (crossed_at < 0) {
      stats.censored += 1;
    } else {
      if (stats.samples.empty()) {
        stats.min = stats.max = crossed_at;
      } else {
        stats.min = std::min(stats.min, crossed_at);
        stats.max = std::max(stats.max, crossed_at);
      }
      stats.samples.push_back(crossed_at);
      total += crossed_at;
    }
  }
  if (!stats.samples.empty())
    stats.mean = static_cast<double>(total) / static_cast<double>(stats.samples.size());
  return stats;
}

std::string crossing_stats_json(const CrossingStats& stats) {
  nlohmann::ordered_json j;
  j["n"] = stats.n;
  j["samples"] = stats.samples;
  if (stats.samples.empty()) {
    j["mean"] = nullptr;
    j["min"] = nullptr;
    j["max"] = nullptr;
  } else {
    j["mean"] = stats.mean;
    j["min"] = stats.min;
    j["max"] = stats.max;
  }
  j["censored"] = stats.censored;
  j["seed"] = stats.seed;
  j["mean_lower_bias"] = stats.censored > 0;
  return j.dump();
}

}  // namespace consensus
