#pragma once

// Dense phase-one simplex for small feasibility problems {x >= 0 : A x = b}.

#include <cstddef>
#include <vector>

namespace hvlab::lp {

struct FeasibilityResult {
  bool feasible = false;
  std::vector<double> x;      // phase-one optimum, restricted to the original columns
  double infeasibility = 0.0; // optimal sum of artificial variables
  std::size_t pivots = 0;
};

/// Minimizes the sum of artificial variables with Bland's rule (smallest-index
/// entering column, smallest basic index among ratio ties), which cannot cycle.
/// `feasible` is set when the phase-one optimum is at most `tol`.
FeasibilityResult find_feasible_point(const std::vector<std::vector<double>>& a,
                                      const std::vector<double>& b, double tol);

}  // namespace hvlab::lp
