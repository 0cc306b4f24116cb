#pragma once

#include <map>
#include <ostream>
#include <string>

#include "consensus/dynamics.hpp"

namespace consensus {

// Trajectory/instrumentation CSV: `# key=value` metadata lines, then a header
// `t,x_0..x_{n-1},spread,V,V_prime,weighted_avg`, one row per time step.
// Doubles are printed with 17 significant digits, rationals as num/den, so
// identical configurations produce byte-identical files.
template <class S>
void write_trajectory_csv(std::ostream& out, const GraphSequence& seq,
                          const StateVector<S>& x0,
                          const std::map<std::string, std::string>& metadata,
                          long horizon = -1) {
  for (const auto& [key, value] : metadata) out << "# " << key << "=" << value << "\n";
  out << "t";
  for (int i = 0; i < x0.size(); ++i) out << ",x_" << i;
  out << ",spread,V,V_prime,weighted_avg\n";
  run_stream(
      seq, x0,
      [&](const InstrumentationRow<S>& row) {
        out << row.t;
        for (const S& v : row.x) out << "," << ScalarOps<S>::str(v);
        out << "," << ScalarOps<S>::str(row.spread) << "," << ScalarOps<S>::str(row.v)
            << "," << ScalarOps<S>::str(row.v_prime) << ","
            << ScalarOps<S>::str(row.weighted_avg) << "\n";
      },
      horizon);
}

}  // namespace consensus
