#pragma once

#include "rgcg/manifold.hpp"
#include "rgcg/solver_types.hpp"

#include <functional>

namespace rgcg {

/// Stiefel manifold St(p, n) = { X in R^{n x p} : X^T X = I_p } with the
/// Euclidean (trace) metric, the polar retraction and the differentiated
/// polar retraction as vector transport.
class Stiefel final : public Manifold {
 public:
  Stiefel(Eigen::Index rows, Eigen::Index cols);

  Kind kind() const override { return Kind::Stiefel; }
  std::string name() const override;
  Eigen::Index ambient_rows() const override { return n_; }
  Eigen::Index ambient_cols() const override { return p_; }

  /// Polar retraction (X + eta)(I + eta^T eta)^{-1/2}.
  Matrix retract(const Matrix& x, const Matrix& eta) const override;

  /// Inverse polar retraction: solves the Lyapunov equation
  /// (X^T Y) S + S (Y^T X) = 2 I for the SPD factor S and returns
  /// eta = Y S - X. Throws InverseRetractionError when the Lyapunov system
  /// is singular, S is not SPD, or the round trip fails to reproduce Y.
  Matrix inv_retract(const Matrix& x, const Matrix& y) const override;

  /// Differentiated polar retraction: Y Omega + (I - Y Y^T) xi M^{-1} with
  /// M = Y^T (X + eta) and Omega the solution of the Sylvester equation
  /// M Omega + Omega M = Y^T xi - xi^T Y. Throws SingularOperatorError if
  /// M or the Sylvester operator is singular.
  Matrix transport(const Matrix& x, const Matrix& eta, const Matrix& xi) const override;

  /// Projection surrogate for the adjoint transport: tangent projection of
  /// w onto T_X (projection is a vector transport and is self-adjoint).
  Matrix transport_back(const Matrix& x, const Matrix& eta, const Matrix& w) const override;

  /// eta = V - X sym(X^T V).
  Matrix project_tangent(const Matrix& x, const Matrix& v) const override;

  /// ||R_X^{-1}(Y)||_X, the retraction-based distance surrogate.
  double dist(const Matrix& x, const Matrix& y) const override;

  double point_error(const Matrix& x) const override;
  double tangency_error(const Matrix& x, const Matrix& v) const override;

  /// Polar factor of x (nearest orthonormal matrix).
  Matrix normalize_point(const Matrix& x) const override;

  Matrix random_point(RngStream& rng) const override;

 private:
  Eigen::Index n_, p_;
};

struct StiefelSubproblemConfig {
  int max_alg2_iters = 2;        // outer corrections of the local model
  int inner_subgrad_iters = 50;  // projected-subgradient steps per model
  double inner_step0 = 0.1;      // subgradient step alpha_t = inner_step0/sqrt(t+1)
  double sigma = 1e-4;           // sufficient-decrease constant
  double lam = 1.0;              // weight of the L1 term
  // Transport the gradient into the local model with the differentiated
  // retraction instead of tangent projection (projection is the default:
  // self-adjoint, so it is its own adjoint, and it keeps the inner problem
  // exactly solvable on the tangent space).
  bool use_diff_transport = false;
};

struct StiefelSubproblemDiag {
  int transport_fallbacks = 0;  // diff transport failed, projection used
};

/// Conditional-gradient subproblem on Stiefel for F = f + lam*||.||_1.
/// Refines a tangent direction d by repeatedly linearizing at y = R_X(d):
/// the inner model min <G, xi> + g(y + xi) over xi in T_y is solved by
/// projected subgradient, the correction is pulled back to T_X and accepted
/// under a sufficient-decrease backtracking on
/// l_X(d) = <grad_f, d> + g(R_X(d)). Returns p = R_X(d), the gap theta <= 0
/// and d; clamps to (p = X, theta = 0) when no improvement was found.
GapResult stiefel_gap_subproblem(const Stiefel& M, const Matrix& X, const Matrix& grad_f,
                                 const std::function<double(const Matrix&)>& g_eval,
                                 const StiefelSubproblemConfig& cfg,
                                 StiefelSubproblemDiag* diag = nullptr);

}  // namespace rgcg
