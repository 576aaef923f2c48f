#include "rgcg/dense_kernels.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace rgcg {

namespace {

void require_symmetric(const Matrix& M, const char* who) {
  if (M.rows() != M.cols()) {
    throw std::invalid_argument(std::string(who) + ": matrix not square");
  }
  const double asym = (M - M.transpose()).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  if (asym > 1e-12 * scale) {
    throw std::invalid_argument(std::string(who) + ": matrix not symmetric");
  }
}

}  // namespace

Matrix inv_sqrt_spd(const Matrix& M) {
  require_symmetric(M, "inv_sqrt_spd");
  Eigen::SelfAdjointEigenSolver<Matrix> es(M);
  const Vector& ev = es.eigenvalues();
  if (ev.minCoeff() <= 1e-14) {
    throw SingularOperatorError("inv_sqrt_spd: matrix not positive definite");
  }
  const Vector inv_sqrt = ev.array().rsqrt();
  return es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().transpose();
}

Matrix solve_sylvester(const Matrix& B1, const Matrix& B2, const Matrix& K) {
  const Eigen::Index p = B1.rows();
  if (B1.cols() != p || B2.rows() != p || B2.cols() != p || K.rows() != p || K.cols() != p) {
    throw std::invalid_argument("solve_sylvester: all inputs must be p x p");
  }
  // vec() is column-major, matching Eigen's storage:
  //   vec(B1*X) = (I (x) B1) vec(X),  vec(X*B2) = (B2^T (x) I) vec(X).
  Matrix op = Matrix::Zero(p * p, p * p);
  for (Eigen::Index j = 0; j < p; ++j) {
    op.block(j * p, j * p, p, p) = B1;
  }
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index i = 0; i < p; ++i) {
      for (Eigen::Index r = 0; r < p; ++r) {
        op(r + j * p, r + i * p) += B2(i, j);
      }
    }
  }
  Eigen::FullPivLU<Matrix> lu(op);
  if (!lu.isInvertible()) {
    throw SingularOperatorError("solve_sylvester: Sylvester operator singular");
  }
  const Vector rhs = Eigen::Map<const Vector>(K.data(), p * p);
  Vector sol = lu.solve(rhs);
  return Eigen::Map<Matrix>(sol.data(), p, p);
}

Matrix soft_threshold(const Matrix& v, double lam) {
  if (!(lam > 0.0)) {
    throw std::invalid_argument("soft_threshold: lam must be positive");
  }
  return v.unaryExpr([lam](double x) {
    if (x > lam) return x - lam;
    if (x < -lam) return x + lam;
    return 0.0;
  });
}

double spectral_norm_sym(const Matrix& M) {
  require_symmetric(M, "spectral_norm_sym");
  const Eigen::Index n = M.rows();
  if (n == 1) return std::abs(M(0, 0));

  Vector v = Vector::Ones(n);
  // Deterministic perturbation so v is not orthogonal to the top eigenspace.
  for (Eigen::Index i = 0; i < n; ++i) v(i) += 1e-3 * static_cast<double>(i % 7);
  v.normalize();

  // Power iteration on M^2 (PSD, so no sign oscillation). For symmetric
  // matrices the Rayleigh residual certifies the estimate:
  // |v^T M^2 v - lambda_max^2| <= ||M^2 v - (v^T M^2 v) v||.
  int restarts = 0;
  for (int it = 0; it < 10000; ++it) {
    const Vector w = M * v;
    const Vector w2 = M * w;
    const double rayleigh = w.squaredNorm();  // v^T M^2 v for unit v
    if (rayleigh <= 1e-300) {
      // v landed in the kernel; restart from a basis vector.
      if (restarts < static_cast<int>(n)) {
        v = Vector::Unit(n, restarts++);
        continue;
      }
      return 0.0;  // M is (numerically) zero on every probe
    }
    const double residual = (w2 - rayleigh * v).norm();
    if (residual <= 0.25e-8 * rayleigh) {
      return std::sqrt(rayleigh);
    }
    v = w2 / w2.norm();
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(M, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace rgcg
