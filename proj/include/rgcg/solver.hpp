#pragma once

#include "rgcg/objective.hpp"
#include "rgcg/solver_types.hpp"
#include "rgcg/sphere.hpp"
#include "rgcg/stepsize.hpp"
#include "rgcg/stiefel.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace rgcg {

struct SolverConfig {
  StepSizeStrategy strategy = ArmijoParams{};
  int max_iters = 2000;
  double tol_theta = 1e-4;   // stop when |theta_k| <= tol_theta
  int fstall_window = 5;     // compare F against this many iterations ago
  double tol_fstall = 1e-4;  // stop when |F_k - F_{k-window}| <= tol_fstall
  SphereSubproblemConfig sphere_sub;    // lam is taken from the objective
  StiefelSubproblemConfig stiefel_sub;  // lam is taken from the objective
};

struct IterationRecord {
  int k = 0;
  double F = 0.0;
  double f = 0.0;
  double g = 0.0;
  double theta = 0.0;
  double lambda = 0.0;  // step leaving this iterate; 0 on the terminal record
  double wall_time = 0.0;
};

enum class SolveStatus {
  ThetaConverged,
  FStalled,
  MaxIters,
  LineSearchStalled,
  SubproblemError,
};

const char* to_string(SolveStatus s);

struct SolverReport {
  std::vector<IterationRecord> records;
  SolveStatus status = SolveStatus::MaxIters;
  Matrix final_point;
  double total_time = 0.0;
  int transport_fallbacks = 0;  // transports replaced by projection
  int anchor_fallbacks = 0;     // accelerated updates re-anchored at y_k
  int momentum_restarts = 0;    // momentum aggregate reset to the gradient
  std::string error_message;

  /// Steps taken (the terminal record's index).
  int iterations() const { return records.empty() ? 0 : records.back().k; }
};

/// Subproblem dispatch: runs the geometry's gap solver at x with
/// grad_f = riem_grad(obj, x) and the objective's own lambda.
GapResult compute_gap(const Matrix& x, const CompositeObjective& obj, const SolverConfig& cfg);

/// Stopping rule, checked in priority order: theta convergence, function
/// stall over the window, iteration budget.
std::optional<SolveStatus> check_stop(const std::vector<IterationRecord>& records,
                                      const SolverConfig& cfg);

using IterateObserver = std::function<void(int k, const Matrix& x)>;

/// Riemannian generalized conditional gradient loop: gap subproblem,
/// strategy-dispatched step size, retraction update, stopping rules.
/// The observer, when set, sees every recorded iterate.
SolverReport rgcg_solve(const Matrix& x0, const CompositeObjective& obj,
                        const SolverConfig& cfg, const IterateObserver& observer = {});

/// Momentum mixing weight tau_k = 2/(k+3) of the accelerated solver.
double accel_momentum_weight(int k);

/// Per-iteration state of the accelerated solver, surfaced for diagnostics:
/// the main iterate x^k, the look-ahead point y_k and the momentum aggregate
/// beta_{k+1} (tangent at y_k).
struct AccelIterate {
  int k;
  const Matrix& x;
  const Matrix& y;
  const Matrix& beta;
};

using AccelObserver = std::function<void(const AccelIterate&)>;

/// Momentum variant: a look-ahead point y_k = R_{x^k}(tau_k d~^k) with
/// tau_k = 2/(k+3), the transported aggregate
/// beta_{k+1} = (1 - tau_k) T(beta_k) + lambda_{k-1} grad f(y_k), and the gap
/// subproblem solved at y_k with beta_{k+1} in place of the gradient. The
/// x-update retracts from x^k along R_{x^k}^{-1}(p_{k+1}), falling back to a
/// y_k-anchored update when that inverse retraction fails.
SolverReport accelerated_solve(const Matrix& x0, const CompositeObjective& obj,
                               const SolverConfig& cfg, const AccelObserver& observer = {});

}  // namespace rgcg
