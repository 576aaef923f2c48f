#pragma once

#include "rgcg/manifold.hpp"
#include "rgcg/solver_types.hpp"

#include <functional>

namespace rgcg {

/// Unit sphere S^{n-1} in R^n with the exponential map as retraction and
/// parallel transport along geodesics. Points are n x 1 matrices.
class Sphere final : public Manifold {
 public:
  explicit Sphere(Eigen::Index n);

  Kind kind() const override { return Kind::Sphere; }
  std::string name() const override;
  Eigen::Index ambient_rows() const override { return n_; }
  Eigen::Index ambient_cols() const override { return 1; }

  /// Exp_x(eta) = x cos||eta|| + eta sin||eta||/||eta||; 2-term series with
  /// renormalization below ||eta|| = 1e-9 to dodge sin(t)/t cancellation.
  Matrix retract(const Matrix& x, const Matrix& eta) const override;

  /// Log map. Throws InverseRetractionError for (near-)antipodal y.
  Matrix inv_retract(const Matrix& x, const Matrix& y) const override;

  /// Parallel transport of xi along the geodesic t -> Exp_x(t eta).
  Matrix transport(const Matrix& x, const Matrix& eta, const Matrix& xi) const override;

  /// Inverse (= adjoint, by isometry) parallel transport: carries w at
  /// Exp_x(eta) back to x along the reversed geodesic.
  Matrix transport_back(const Matrix& x, const Matrix& eta, const Matrix& w) const override;

  Matrix project_tangent(const Matrix& x, const Matrix& v) const override;

  /// arccos(x^T y), clamped before arccos.
  double dist(const Matrix& x, const Matrix& y) const override;

  double point_error(const Matrix& x) const override;
  double tangency_error(const Matrix& x, const Matrix& v) const override;
  Matrix normalize_point(const Matrix& x) const override;
  Matrix random_point(RngStream& rng) const override;

 private:
  Eigen::Index n_;
};

/// Global minimizer of (1/(2 lam))||y - x||^2 + ||y||_1 over the unit
/// sphere: normalize soft_threshold(x, lam) when nonzero, otherwise the
/// signed coordinate axis of the largest-magnitude entry of x (smallest
/// index on ties).
Matrix solve_l1_sphere(const Matrix& x, double lam);

struct SphereSubproblemConfig {
  int max_outer_iters = 10;
  double tol = 1e-10;  // fixed-point tolerance on successive iterates
  double lam = 1.0;    // weight of the L1 term in the objective
  // A candidate direction must realize at least this fraction of its gap as
  // an actual descent rate of F, else it counts as non-improving (the
  // infinitesimal Armijo condition; holds automatically when g is
  // geodesically convex). Must exceed the line search's zeta or accepted
  // steps lose their margin.
  double slope_fraction = 0.5;
};

/// Conditional-gradient subproblem on the sphere for F = f + lam*||.||_1:
/// minimizes <grad_f, Log_x(y)> + g(y) - g(x) over y by iterating the
/// closed-form minimizer of the linearized model (solve_l1_sphere) from
/// y = x, then from the best of a deterministic candidate pool (signed
/// coordinate axes, normalized negative gradient) so a single chain cannot
/// settle in a non-global basin. Returns the best candidate p, its gap
/// theta <= 0 and the direction d = Log_x(p); clamps to (p = x, theta = 0)
/// when no candidate improves.
GapResult sphere_gap_subproblem(const Sphere& M, const Matrix& x, const Matrix& grad_f,
                                const std::function<double(const Matrix&)>& g_eval,
                                const SphereSubproblemConfig& cfg);

namespace detail {
/// Ambient gradient of the linearized model h(y) = (1/scale) <grad_f, Log_x(y)>
/// used inside sphere_gap_subproblem; exposed for finite-difference checks.
Matrix sphere_model_gradient(const Matrix& x, const Matrix& grad_f, double scale,
                             const Matrix& y);
}  // namespace detail

}  // namespace rgcg
