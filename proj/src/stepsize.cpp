#include "rgcg/stepsize.hpp"

#include <algorithm>
#include <stdexcept>

namespace rgcg {

ArmijoResult armijo_search(const std::function<double(double)>& F_at, double F_x,
                           double theta, const ArmijoParams& params) {
  if (!(theta < 0.0)) {
    throw std::invalid_argument("armijo_search: theta must be negative");
  }
  if (!(params.zeta > 0.0 && params.zeta < 1.0) ||
      !(params.omega1 > 0.0 && params.omega1 < params.omega2 && params.omega2 < 1.0)) {
    throw std::invalid_argument("armijo_search: parameters out of range");
  }
  const double contraction = 0.5 * (params.omega1 + params.omega2);
  double lambda = 1.0;
  for (int ell = 0; ell <= params.max_backtracks; ++ell) {
    if (F_at(lambda) <= F_x + params.zeta * lambda * theta) {
      return ArmijoResult{lambda, ell, false};
    }
    if (ell < params.max_backtracks) lambda *= contraction;
  }
  return ArmijoResult{lambda, params.max_backtracks, true};
}

double adaptive_step(double theta, double L, double dist2) {
  if (!(theta < 0.0)) throw std::invalid_argument("adaptive_step: theta must be negative");
  if (!(L > 0.0)) throw std::invalid_argument("adaptive_step: L must be positive");
  if (!(dist2 > 0.0)) throw std::invalid_argument("adaptive_step: dist2 must be positive");
  return std::min(1.0, -theta / (L * dist2));
}

double diminishing_step(int k) {
  if (k < 0) throw std::invalid_argument("diminishing_step: k must be >= 0");
  return 2.0 / (static_cast<double>(k) + 2.0);
}

}  // namespace rgcg
