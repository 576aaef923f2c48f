#include "rgcg/solver.hpp"

#include <chrono>
#include <cmath>

namespace rgcg {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

GapResult dispatch_gap(const Matrix& x, const Matrix& grad, const CompositeObjective& obj,
                       const SolverConfig& cfg, int* transport_fallbacks) {
  switch (obj.manifold->kind()) {
    case Manifold::Kind::Sphere: {
      const auto& m = static_cast<const Sphere&>(*obj.manifold);
      SphereSubproblemConfig sub = cfg.sphere_sub;
      sub.lam = obj.lam;
      return sphere_gap_subproblem(m, x, grad, obj.g, sub);
    }
    case Manifold::Kind::Stiefel: {
      const auto& m = static_cast<const Stiefel&>(*obj.manifold);
      StiefelSubproblemConfig sub = cfg.stiefel_sub;
      sub.lam = obj.lam;
      StiefelSubproblemDiag diag;
      GapResult gap = stiefel_gap_subproblem(m, x, grad, obj.g, sub, &diag);
      if (transport_fallbacks) *transport_fallbacks += diag.transport_fallbacks;
      return gap;
    }
  }
  throw std::logic_error("compute_gap: unknown manifold kind");
}

// Step size for leaving `anchor` along `d` with gap value theta < 0.
// Returns the lambda and whether the Armijo search stalled.
struct StepChoice {
  double lambda = 1.0;
  bool stalled = false;
};

StepChoice choose_step(const StepSizeStrategy& strategy, const Manifold& M,
                       const CompositeObjective& obj, const Matrix& anchor,
                       const Matrix& d, double F_anchor, double theta, int k) {
  StepChoice out;
  if (const auto* armijo = std::get_if<ArmijoParams>(&strategy)) {
    const auto F_at = [&](double lam) {
      return eval_F(obj, M.retract(anchor, lam * d)).F;
    };
    const ArmijoResult res = armijo_search(F_at, F_anchor, theta, *armijo);
    out.lambda = res.lambda;
    out.stalled = res.stalled;
  } else if (const auto* adaptive = std::get_if<AdaptiveParams>(&strategy)) {
    const double L = adaptive->L > 0.0 ? adaptive->L : obj.L_est;
    out.lambda = adaptive_step(theta, L, M.inner(d, d));
  } else {
    out.lambda = diminishing_step(k);
  }
  return out;
}

// Carry a tangent vector at `from` into T_to along the connecting
// geodesic/retraction curve; projection fallback if that path is undefined.
Matrix carry_tangent(const Manifold& M, const Matrix& from, const Matrix& to, const Matrix& v,
                     int* fallbacks) {
  if ((from - to).isZero(0.0)) return v;
  try {
    return M.transport(from, M.inv_retract(from, to), v);
  } catch (const std::runtime_error&) {
    if (fallbacks) ++(*fallbacks);
    return M.project_tangent(to, v);
  }
}

// One-sided directional derivative of F = f + lam*||.||_1 along R_x(t d)
// at t = 0 (this library's composites all carry g = lam*||.||_1).
double composite_dir_slope(const CompositeObjective& obj, const Matrix& x, const Matrix& d) {
  double s = obj.manifold->inner(riem_grad(obj, x), d);
  if (obj.lam > 0.0) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const double xi = x(i, j);
        const double di = d(i, j);
        s += obj.lam * (xi > 0.0 ? di : (xi < 0.0 ? -di : std::abs(di)));
      }
    }
  }
  return s;
}

}  // namespace

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::ThetaConverged: return "theta_converged";
    case SolveStatus::FStalled: return "f_stalled";
    case SolveStatus::MaxIters: return "max_iters";
    case SolveStatus::LineSearchStalled: return "line_search_stalled";
    case SolveStatus::SubproblemError: return "subproblem_error";
  }
  return "unknown";
}

GapResult compute_gap(const Matrix& x, const CompositeObjective& obj, const SolverConfig& cfg) {
  return dispatch_gap(x, riem_grad(obj, x), obj, cfg, nullptr);
}

std::optional<SolveStatus> check_stop(const std::vector<IterationRecord>& records,
                                      const SolverConfig& cfg) {
  if (records.empty()) throw std::invalid_argument("check_stop: empty trace");
  const IterationRecord& last = records.back();
  const int k = last.k;
  if (std::abs(last.theta) <= cfg.tol_theta) return SolveStatus::ThetaConverged;
  if (k >= cfg.fstall_window) {
    const double F_then = records[records.size() - 1 - cfg.fstall_window].F;
    if (std::abs(last.F - F_then) <= cfg.tol_fstall) return SolveStatus::FStalled;
  }
  if (k >= cfg.max_iters) return SolveStatus::MaxIters;
  return std::nullopt;
}

SolverReport rgcg_solve(const Matrix& x0, const CompositeObjective& obj,
                        const SolverConfig& cfg, const IterateObserver& observer) {
  const auto t0 = Clock::now();
  const Manifold& M = *obj.manifold;
  detail::debug_check_point(M, x0, "rgcg_solve");

  SolverReport rep;
  Matrix x = x0;
  for (int k = 0;; ++k) {
    GapResult gap;
    try {
      gap = dispatch_gap(x, riem_grad(obj, x), obj, cfg, &rep.transport_fallbacks);
    } catch (const std::exception& e) {
      rep.status = SolveStatus::SubproblemError;
      rep.error_message = e.what();
      break;
    }
    const FValue fv = eval_F(obj, x);
    rep.records.push_back({k, fv.F, fv.f, fv.g, gap.theta, 0.0, seconds_since(t0)});
    if (observer) observer(k, x);

    if (const auto st = check_stop(rep.records, cfg)) {
      rep.status = *st;
      break;
    }

    const StepChoice step = choose_step(cfg.strategy, M, obj, x, gap.d, fv.F, gap.theta, k);
    if (step.stalled) {
      rep.status = SolveStatus::LineSearchStalled;
      break;
    }
    rep.records.back().lambda = step.lambda;
    x = M.retract(x, step.lambda * gap.d);
    if (M.point_error(x) > 1e-12) x = M.normalize_point(x);
  }
  rep.final_point = x;
  rep.total_time = seconds_since(t0);
  return rep;
}

double accel_momentum_weight(int k) { return 2.0 / (static_cast<double>(k) + 3.0); }

SolverReport accelerated_solve(const Matrix& x0, const CompositeObjective& obj,
                               const SolverConfig& cfg, const AccelObserver& observer) {
  const auto t0 = Clock::now();
  const Manifold& M = *obj.manifold;
  detail::debug_check_point(M, x0, "accelerated_solve");

  SolverReport rep;
  Matrix x = x0;
  Matrix beta, beta_base;  // momentum aggregate and the point it lives at
  Matrix d_mem, d_base;    // previous subproblem direction and its base
  bool have_state = false;
  double prev_lambda = 1.0;  // strategy value at k = 0

  for (int k = 0;; ++k) {
    const double tau = accel_momentum_weight(k);

    Matrix y;
    if (have_state) {
      const Matrix d_at_x = carry_tangent(M, d_base, x, d_mem, &rep.transport_fallbacks);
      y = M.retract(x, tau * d_at_x);
      if (M.point_error(y) > 1e-12) y = M.normalize_point(y);
    } else {
      y = x;
    }

    const Matrix grad_y = riem_grad(obj, y);
    Matrix beta_new;
    if (have_state) {
      const Matrix beta_at_y = carry_tangent(M, beta_base, y, beta, &rep.transport_fallbacks);
      beta_new = (1.0 - tau) * beta_at_y + prev_lambda * grad_y;
    } else {
      beta_new = prev_lambda * grad_y;
    }

    GapResult gap;
    try {
      gap = dispatch_gap(y, beta_new, obj, cfg, &rep.transport_fallbacks);
      // A clamped momentum model is not evidence of stationarity: the
      // aggregate beta may simply have decayed or turned. Restart the
      // momentum from the plain gradient before trusting a zero gap.
      if (gap.theta == 0.0) {
        beta_new = grad_y;
        gap = dispatch_gap(y, beta_new, obj, cfg, &rep.transport_fallbacks);
        ++rep.momentum_restarts;
      }
    } catch (const std::exception& e) {
      rep.status = SolveStatus::SubproblemError;
      rep.error_message = e.what();
      break;
    }

    const FValue fv = eval_F(obj, x);
    rep.records.push_back({k, fv.F, fv.f, fv.g, gap.theta, 0.0, seconds_since(t0)});
    if (observer) observer(AccelIterate{k, x, y, beta_new});

    if (const auto st = check_stop(rep.records, cfg)) {
      rep.status = *st;
      break;
    }

    // Anchor the update at x^k via R_{x^k}^{-1}(p); re-anchor at y_k when
    // that inverse retraction is undefined.
    Matrix anchor = x;
    Matrix d_step = gap.d;
    double F_anchor = fv.F;
    try {
      d_step = M.inv_retract(x, gap.p);
    } catch (const InverseRetractionError&) {
      anchor = y;
      d_step = gap.d;
      F_anchor = eval_F(obj, y).F;
      ++rep.anchor_fallbacks;
    }

    // The momentum gap overstates what F can do along d (beta is not the
    // gradient), so the line search tests against the actual directional
    // slope, which a small enough step always satisfies. A non-descending
    // momentum direction gets replaced by the plain gap direction at x^k.
    const bool needs_slope = std::holds_alternative<ArmijoParams>(cfg.strategy);
    double theta_for_step = gap.theta;
    if (needs_slope) {
      double slope = composite_dir_slope(obj, anchor, d_step);
      if (!(slope < 0.0)) {
        GapResult plain;
        try {
          plain = dispatch_gap(x, riem_grad(obj, x), obj, cfg, &rep.transport_fallbacks);
        } catch (const std::exception& e) {
          rep.status = SolveStatus::SubproblemError;
          rep.error_message = e.what();
          break;
        }
        ++rep.momentum_restarts;
        anchor = x;
        d_step = plain.d;
        F_anchor = fv.F;
        slope = plain.theta < 0.0 ? composite_dir_slope(obj, x, d_step) : 0.0;
        if (!(slope < 0.0)) {
          rep.status = SolveStatus::ThetaConverged;  // nothing descends here
          break;
        }
      }
      theta_for_step = slope;
    }

    StepChoice step;
    try {
      step = choose_step(cfg.strategy, M, obj, anchor, d_step, F_anchor, theta_for_step, k);
    } catch (const std::exception& e) {
      rep.status = SolveStatus::SubproblemError;
      rep.error_message = e.what();
      break;
    }
    if (step.stalled) {
      rep.status = SolveStatus::LineSearchStalled;
      break;
    }
    rep.records.back().lambda = step.lambda;
    x = M.retract(anchor, step.lambda * d_step);
    if (M.point_error(x) > 1e-12) x = M.normalize_point(x);

    beta = beta_new;
    beta_base = y;
    d_mem = gap.d;
    d_base = y;
    have_state = true;
    prev_lambda = step.lambda;
  }
  rep.final_point = x;
  rep.total_time = seconds_since(t0);
  return rep;
}

}  // namespace rgcg
