#pragma once

#include "rgcg/types.hpp"

namespace rgcg {

/// Result of the conditional-gradient subproblem at a point x:
/// p minimizes <grad f(x), R_x^{-1}(u)> + g(u) - g(x), theta is the optimal
/// value (the Frank-Wolfe gap, always <= 0; 0 exactly at stationarity) and
/// d = R_x^{-1}(p) is the search direction.
struct GapResult {
  Matrix p;
  double theta = 0.0;
  Matrix d;
};

}  // namespace rgcg
