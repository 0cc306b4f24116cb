#pragma once

#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "consensus/generators.hpp"
#include "consensus/graph.hpp"
#include "consensus/rng.hpp"
#include "consensus/scalar.hpp"
#include "consensus/version.hpp"

namespace cli {

enum ExitCode { kOk = 0, kCheckFailure = 1, kUsageError = 2 };

// Thrown for bad inputs/arguments discovered after parsing; mapped to exit 2.
class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Writes to a file when a path is given, else to stdout.
class OutputTarget {
 public:
  explicit OutputTarget(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw UsageError("cannot open for writing: " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

// Canonical `key=value ...` rendering of the resolved options; embedded in
// output metadata so identical configurations are recognizable and reruns
// are byte-identical.
inline std::string config_string(const std::map<std::string, std::string>& options) {
  std::string out;
  for (const auto& [k, v] : options) {
    if (!out.empty()) out += " ";
    out += k + "=" + v;
  }
  return out;
}

inline std::map<std::string, std::string> standard_metadata(
    const std::map<std::string, std::string>& options, std::uint64_t seed) {
  return {{"toolkit", std::string("equal-neighbor-consensus/") + consensus::toolkit_version()},
          {"seed", std::to_string(seed)},
          {"config", config_string(options)}};
}

// --- initial state parsing ---------------------------------------------------

inline consensus::Rational parse_rational(const std::string& tok) {
  try {
    if (tok.find('/') != std::string::npos) {
      consensus::Rational q(tok);
      q.canonicalize();
      return q;
    }
    return consensus::Rational(std::stol(tok));
  } catch (const std::exception&) {
    throw UsageError("exact backend expects integers or num/den fractions, got '" + tok + "'");
  }
}

inline double parse_double(const std::string& tok) {
  try {
    if (auto slash = tok.find('/'); slash != std::string::npos)
      return std::stod(tok.substr(0, slash)) / std::stod(tok.substr(slash + 1));
    return std::stod(tok);
  } catch (const std::exception&) {
    throw UsageError("cannot parse number '" + tok + "'");
  }
}

// Accepts a named pattern (ramp, split, ones, indicator:<i>) or a comma list.
template <class S>
std::vector<S> parse_initial_state(const std::string& desc, int n) {
  std::vector<S> x(n, consensus::ScalarOps<S>::zero());
  if (desc == "ramp") {
    for (int i = 0; i < n; ++i) x[i] = consensus::ScalarOps<S>::from_int(i);
    return x;
  }
  if (desc == "split") {
    for (int i = n / 2; i < n; ++i) x[i] = consensus::ScalarOps<S>::one();
    return x;
  }
  if (desc == "ones") {
    for (int i = 0; i < n; ++i) x[i] = consensus::ScalarOps<S>::one();
    return x;
  }
  if (desc.rfind("indicator:", 0) == 0) {
    int i = -1;
    try {
      i = std::stoi(desc.substr(10));
    } catch (const std::exception&) {
    }
    if (i < 0 || i >= n) throw UsageError("indicator node out of range in '" + desc + "'");
    x[i] = consensus::ScalarOps<S>::one();
    return x;
  }
  std::vector<S> values;
  std::istringstream is(desc);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    if constexpr (consensus::ScalarOps<S>::exact)
      values.push_back(parse_rational(tok));
    else
      values.push_back(parse_double(tok));
  }
  if (static_cast<int>(values.size()) != n)
    throw UsageError("initial state has " + std::to_string(values.size()) +
                     " entries, sequence has n=" + std::to_string(n));
  return values;
}

// --- base graphs for generated sequences -------------------------------------

inline consensus::Graph ring_graph(int n) {
  if (n < 2) throw UsageError("ring base needs n >= 2");
  consensus::Graph g(n);
  for (int i = 0; i < n; ++i)
    if (!g.has_edge(i, (i + 1) % n)) g.add_edge(i, (i + 1) % n);
  return g;
}

inline consensus::Graph complete_graph(int n) {
  if (n < 2) throw UsageError("complete base needs n >= 2");
  consensus::Graph g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g.add_edge(i, j);
  return g;
}

inline consensus::Graph random_base_graph(int n, consensus::Engine& eng,
                                          double extra_prob = 0.35) {
  if (n < 2) throw UsageError("random base needs n >= 2");
  consensus::Graph g(n);
  for (int v = 1; v < n; ++v) g.add_edge(v, consensus::draw_int(eng, 0, v - 1));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (!g.has_edge(i, j) && consensus::draw_bernoulli(eng, extra_prob)) g.add_edge(i, j);
  return g;
}

inline consensus::Graph base_graph(const std::string& kind, int n, std::uint64_t seed) {
  if (kind == "ring") return ring_graph(n);
  if (kind == "complete") return complete_graph(n);
  if (kind == "random") {
    consensus::Engine eng = consensus::make_engine(seed ^ 0x9e3779b97f4a7c15ULL);
    return random_base_graph(n, eng);
  }
  throw UsageError("unknown base graph '" + kind + "' (ring, complete, random)");
}

}  // namespace cli
