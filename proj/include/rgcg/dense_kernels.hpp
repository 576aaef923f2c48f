#pragma once

#include "rgcg/types.hpp"

namespace rgcg {

/// Inverse symmetric square root of an SPD matrix via eigendecomposition:
/// N = Q diag(lambda_i^{-1/2}) Q^T, so N*M*N = I.
/// Throws std::invalid_argument if M is not symmetric (tolerance 1e-12),
/// SingularOperatorError if any eigenvalue is <= 1e-14.
Matrix inv_sqrt_spd(const Matrix& M);

/// Solves the Sylvester equation B1*X + X*B2 = K for square p x p inputs
/// by forming the p^2 x p^2 Kronecker system (I (x) B1 + B2^T (x) I).
/// Intended for small p (the geometries here use p <= 50).
/// Throws SingularOperatorError when the operator X -> B1*X + X*B2 is
/// singular, i.e. some eigenvalue of B1 equals the negative of one of B2.
Matrix solve_sylvester(const Matrix& B1, const Matrix& B2, const Matrix& K);

/// Elementwise soft-threshold, the proximal map of lam*||.||_1:
/// 0 where |v_ij| <= lam, v_ij -+ lam otherwise. Requires lam > 0.
Matrix soft_threshold(const Matrix& v, double lam);

/// Largest absolute eigenvalue of a symmetric matrix. Power iteration with
/// a restart when the iterate lands in the kernel; falls back to a full
/// eigendecomposition if 10000 iterations do not converge to rel. tol 1e-8.
double spectral_norm_sym(const Matrix& M);

}  // namespace rgcg
