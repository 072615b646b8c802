#pragma once

#include <vector>

namespace gftpl {

// Minimal dense linear-programming solver for the certification checks.
// Problems here are desk scale (tens of rows/columns), so a two-phase
// tableau simplex with Bland's rule (no cycling) is deliberate: it is
// deterministic and easy to audit, which matters more than speed.
struct LpResult {
  enum class Status { kOptimal, kInfeasible, kUnbounded };
  Status status = Status::kInfeasible;
  double objective = 0.0;
  std::vector<double> x;

  bool optimal() const { return status == Status::kOptimal; }
};

// Minimize c.x subject to A x >= b, x >= 0.
LpResult lp_minimize(const std::vector<std::vector<double>>& a,
                     const std::vector<double>& b,
                     const std::vector<double>& c);

}  // namespace gftpl
