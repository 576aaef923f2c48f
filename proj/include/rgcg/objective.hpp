#pragma once

#include "rgcg/manifold.hpp"
#include "rgcg/types.hpp"

#include <functional>

namespace rgcg {

/// Composite objective F = f + g on a manifold, with f smooth (Euclidean
/// gradient supplied) and g convex, here lam*||.||_1. g is defined on all of
/// ambient space because the subproblem models evaluate it off-manifold.
struct CompositeObjective {
  std::function<double(const Matrix&)> f;
  std::function<Matrix(const Matrix&)> euclid_grad_f;
  std::function<double(const Matrix&)> g;
  double lam = 0.0;
  double L_est = 1.0;  // smoothness-constant estimate for the adaptive step
  ManifoldPtr manifold;
};

struct FValue {
  double F = 0.0;
  double f = 0.0;
  double g = 0.0;
};

/// Sparse-PCA objective -x^T (A^T A) x + lam ||x||_1 on the sphere, or
/// -trace(X^T (A^T A) X) + lam ||X||_1 on Stiefel. The Gram matrix A^T A is
/// precomputed once and shared by every evaluation; L_est = 2 ||A^T A||_2.
CompositeObjective make_sparse_pca(const Matrix& A, double lam, ManifoldPtr manifold);

/// Riemannian gradient of f at x: tangent projection of the Euclidean one.
Matrix riem_grad(const CompositeObjective& obj, const Matrix& x);

FValue eval_F(const CompositeObjective& obj, const Matrix& x);

}  // namespace rgcg
