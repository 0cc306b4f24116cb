#pragma once

#include <cstdint>
#include <string>

namespace cli {

struct VerifyOptions {
  std::string suite = "all";
  std::uint64_t seed = 42;
  int trials = 100;
  int n = -1;  // suite-specific default when negative
  int t = -1;
  std::string output;
};

// Runs the selected invariant suite(s), emitting one JSON record per check:
// {check, params, margin|deviation, pass}. Returns kOk, or kCheckFailure if
// any record fails.
int run_verify(const VerifyOptions& options);

}  // namespace cli
