#pragma once

#include <functional>
#include <variant>

namespace rgcg {

/// Backtracking line-search parameters. Step-two contraction picks the
/// midpoint factor (omega1 + omega2)/2, which always lies in the mandated
/// interval [omega1 * lambda, omega2 * lambda].
struct ArmijoParams {
  double zeta = 0.1;
  double omega1 = 0.05;
  double omega2 = 0.95;
  int max_backtracks = 60;
};

/// Closed-form step min{1, -theta / (L dist^2)}. L <= 0 means "use the
/// objective's smoothness estimate".
struct AdaptiveParams {
  double L = 0.0;
};

/// lambda_k = 2 / (k + 2).
struct DiminishingParams {};

using StepSizeStrategy = std::variant<ArmijoParams, AdaptiveParams, DiminishingParams>;

struct ArmijoResult {
  double lambda = 1.0;
  int backtracks = 0;
  bool stalled = false;  // acceptance condition never met within max_backtracks
};

/// Finds lambda with F_at(lambda) <= F_x + zeta * lambda * theta, trying
/// lambda = 1 and contracting by (omega1 + omega2)/2. Requires theta < 0.
/// When the budget runs out, returns the smallest trial with stalled = true.
ArmijoResult armijo_search(const std::function<double(double)>& F_at, double F_x,
                           double theta, const ArmijoParams& params);

/// min(1, -theta / (L * dist2)); requires theta < 0, L > 0, dist2 > 0.
double adaptive_step(double theta, double L, double dist2);

/// 2 / (k + 2) for k >= 0.
double diminishing_step(int k);

}  // namespace rgcg
