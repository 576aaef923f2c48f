#include "rgcg/objective.hpp"

#include "rgcg/dense_kernels.hpp"

#include <memory>

namespace rgcg {

CompositeObjective make_sparse_pca(const Matrix& A, double lam, ManifoldPtr manifold) {
  if (A.rows() != A.cols()) {
    throw std::invalid_argument("make_sparse_pca: A must be square");
  }
  if (!manifold || manifold->ambient_rows() != A.rows()) {
    throw std::invalid_argument("make_sparse_pca: manifold dimension does not match A");
  }
  auto gram = std::make_shared<Matrix>(A.transpose() * A);

  CompositeObjective obj;
  obj.lam = lam;
  obj.manifold = std::move(manifold);
  obj.f = [gram](const Matrix& x) { return -(x.transpose() * (*gram) * x).trace(); };
  obj.euclid_grad_f = [gram](const Matrix& x) -> Matrix { return -2.0 * ((*gram) * x); };
  obj.g = [lam](const Matrix& x) { return lam * x.cwiseAbs().sum(); };
  obj.L_est = 2.0 * spectral_norm_sym(*gram);
  return obj;
}

Matrix riem_grad(const CompositeObjective& obj, const Matrix& x) {
  return obj.manifold->project_tangent(x, obj.euclid_grad_f(x));
}

FValue eval_F(const CompositeObjective& obj, const Matrix& x) {
  FValue v;
  v.f = obj.f(x);
  v.g = obj.g(x);
  v.F = v.f + v.g;
  return v;
}

}  // namespace rgcg
