#include "rgcg/stiefel.hpp"

#include "rgcg/dense_kernels.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace rgcg {

namespace {

Matrix sym(const Matrix& m) { return 0.5 * (m + m.transpose()); }

// lam * sign(Z), with the minimal-norm subgradient 0 at zero entries.
Matrix l1_subgradient(const Matrix& z, double lam) {
  return z.unaryExpr([lam](double v) {
    if (v > 0.0) return lam;
    if (v < 0.0) return -lam;
    return 0.0;
  });
}

}  // namespace

Stiefel::Stiefel(Eigen::Index rows, Eigen::Index cols) : n_(rows), p_(cols) {
  if (cols < 1 || rows < cols) throw std::invalid_argument("Stiefel: need 1 <= p <= n");
}

std::string Stiefel::name() const {
  return "stiefel(" + std::to_string(p_) + "," + std::to_string(n_) + ")";
}

Matrix Stiefel::retract(const Matrix& x, const Matrix& eta) const {
  detail::debug_check_tangent(*this, x, eta, "Stiefel::retract");
  if (eta.isZero(0.0)) return x;
  const Matrix s = Matrix::Identity(p_, p_) + eta.transpose() * eta;
  return (x + eta) * inv_sqrt_spd(s);
}

Matrix Stiefel::inv_retract(const Matrix& x, const Matrix& y) const {
  detail::debug_check_point(*this, y, "Stiefel::inv_retract");
  // R_X(eta) = Y with S = (I + eta^T eta)^{1/2} forces X + eta = Y S, and
  // tangency of eta forces (X^T Y) S + S (Y^T X) = 2 I.
  const Matrix b1 = x.transpose() * y;
  Matrix s;
  try {
    s = solve_sylvester(b1, b1.transpose(), 2.0 * Matrix::Identity(p_, p_));
  } catch (const SingularOperatorError&) {
    throw InverseRetractionError("stiefel: inverse retraction undefined (Lyapunov singular)");
  }
  const double s_scale = std::max(1.0, s.norm());
  if ((s - s.transpose()).norm() > 1e-8 * s_scale) {
    throw InverseRetractionError("stiefel: inverse retraction undefined (S not symmetric)");
  }
  s = sym(s);
  Eigen::SelfAdjointEigenSolver<Matrix> es(s, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() <= 0.0) {
    throw InverseRetractionError("stiefel: inverse retraction undefined (S not SPD)");
  }
  Matrix eta = y * s - x;
  if ((retract(x, eta) - y).norm() > 1e-6 * std::max(1.0, y.norm())) {
    throw InverseRetractionError("stiefel: inverse retraction undefined (round trip failed)");
  }
  return eta;
}

Matrix Stiefel::transport(const Matrix& x, const Matrix& eta, const Matrix& xi) const {
  const Matrix y = retract(x, eta);
  const Matrix m = y.transpose() * (x + eta);
  const Matrix rhs = y.transpose() * xi - xi.transpose() * y;
  const Matrix omega = solve_sylvester(m, m, rhs);
  Eigen::FullPivLU<Matrix> lu(m);
  if (!lu.isInvertible()) {
    throw SingularOperatorError("stiefel transport: Y^T(X+eta) singular");
  }
  const Matrix xi_minv = lu.solve(xi.transpose()).transpose();  // xi * M^{-1}
  return y * omega + xi_minv - y * (y.transpose() * xi_minv);
}

Matrix Stiefel::transport_back(const Matrix& x, const Matrix& eta, const Matrix& w) const {
  (void)eta;
  return project_tangent(x, w);
}

Matrix Stiefel::project_tangent(const Matrix& x, const Matrix& v) const {
  return v - x * sym(x.transpose() * v);
}

double Stiefel::dist(const Matrix& x, const Matrix& y) const {
  return inv_retract(x, y).norm();
}

double Stiefel::point_error(const Matrix& x) const {
  return (x.transpose() * x - Matrix::Identity(p_, p_)).norm();
}

double Stiefel::tangency_error(const Matrix& x, const Matrix& v) const {
  const Matrix a = x.transpose() * v;
  return (a + a.transpose()).norm() / (1.0 + v.norm());
}

Matrix Stiefel::normalize_point(const Matrix& x) const {
  return x * inv_sqrt_spd(x.transpose() * x);
}

Matrix Stiefel::random_point(RngStream& rng) const {
  Matrix z(n_, p_);
  for (Eigen::Index j = 0; j < p_; ++j) {
    for (Eigen::Index i = 0; i < n_; ++i) z(i, j) = rng.normal();
  }
  return normalize_point(z);
}

GapResult stiefel_gap_subproblem(const Stiefel& M, const Matrix& X, const Matrix& grad_f,
                                 const std::function<double(const Matrix&)>& g_eval,
                                 const StiefelSubproblemConfig& cfg,
                                 StiefelSubproblemDiag* diag) {
  detail::debug_check_tangent(M, X, grad_f, "stiefel_gap_subproblem");
  const double g_at_x = g_eval(X);
  const auto ell = [&](const Matrix& d) {
    return M.inner(grad_f, d) + g_eval(M.retract(X, d));
  };

  Matrix d = Matrix::Zero(X.rows(), X.cols());
  double ell_d = g_at_x;  // ell(0)

  for (int outer = 0; outer < cfg.max_alg2_iters; ++outer) {
    const Matrix y = M.retract(X, d);

    Matrix model_grad;
    if (cfg.use_diff_transport) {
      try {
        model_grad = M.transport(X, d, grad_f);
      } catch (const SingularOperatorError&) {
        model_grad = M.project_tangent(y, grad_f);
        if (diag) ++diag->transport_fallbacks;
      }
    } else {
      model_grad = M.project_tangent(y, grad_f);
    }

    // Inner model: min <G, xi> + g(y + xi) over xi in T_y, by projected
    // subgradient with diminishing steps; keep the best iterate seen.
    Matrix xi = Matrix::Zero(X.rows(), X.cols());
    Matrix best_xi = xi;
    double best_val = g_eval(y);
    for (int t = 0; t < cfg.inner_subgrad_iters; ++t) {
      const Matrix sg = model_grad + l1_subgradient(y + xi, cfg.lam);
      const double step = cfg.inner_step0 / std::sqrt(static_cast<double>(t) + 1.0);
      xi = M.project_tangent(y, xi - step * sg);
      const double val = M.inner(model_grad, xi) + g_eval(y + xi);
      if (val < best_val) {
        best_val = val;
        best_xi = xi;
      }
    }

    const double ns2 = M.inner(best_xi, best_xi);
    if (ns2 <= 1e-300) break;  // model proposes no movement

    const Matrix pulled = M.project_tangent(X, best_xi);
    bool accepted = false;
    for (double alpha = 1.0; alpha >= 1e-8; alpha *= 0.5) {
      const Matrix d_try = d + alpha * pulled;
      const double ell_try = ell(d_try);
      if (ell_try < ell_d - cfg.sigma * alpha * ns2) {
        d = d_try;
        ell_d = ell_try;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }

  const double theta = ell_d - g_at_x;
  if (!(theta < 0.0)) {
    return GapResult{X, 0.0, Matrix::Zero(X.rows(), X.cols())};
  }
  return GapResult{M.retract(X, d), theta, d};
}

}  // namespace rgcg
