#pragma once

#include "rgcg/rng.hpp"
#include "rgcg/types.hpp"

#include <memory>
#include <string>

namespace rgcg {

/// Contract shared by the sphere and Stiefel geometries. Points and tangent
/// vectors are plain ambient-coordinate matrices (the sphere uses n x 1);
/// validity is a property, not a type: point_error / tangency_error report
/// the invariant residuals, and the operations assert them in debug builds
/// while staying check-free on release hot paths.
class Manifold {
 public:
  enum class Kind { Sphere, Stiefel };

  virtual ~Manifold() = default;

  virtual Kind kind() const = 0;
  virtual std::string name() const = 0;
  virtual Eigen::Index ambient_rows() const = 0;
  virtual Eigen::Index ambient_cols() const = 0;

  /// Riemannian metric: both geometries use the ambient Euclidean inner
  /// product (trace(u^T v) for matrices).
  double inner(const Matrix& u, const Matrix& v) const {
    return (u.array() * v.array()).sum();
  }

  double norm(const Matrix& u) const { return std::sqrt(inner(u, u)); }

  /// Retraction R_x(eta). R_x(0) = x exactly; first-order rigid.
  virtual Matrix retract(const Matrix& x, const Matrix& eta) const = 0;

  /// Inverse retraction: the eta with R_x(eta) = y.
  /// Throws InverseRetractionError outside the invertibility domain.
  virtual Matrix inv_retract(const Matrix& x, const Matrix& y) const = 0;

  /// Vector transport of xi from T_x to T_{R_x(eta)}. Identity at eta = 0,
  /// linear in xi.
  virtual Matrix transport(const Matrix& x, const Matrix& eta, const Matrix& xi) const = 0;

  /// Adjoint transport: carries w from T_{R_x(eta)} back to T_x so that
  /// <transport_back(x,eta,w), zeta>_x = <w, transport(x,eta,zeta)>_y.
  /// Exact on the sphere (parallel transport is isometric); realized by
  /// tangent projection on Stiefel.
  virtual Matrix transport_back(const Matrix& x, const Matrix& eta, const Matrix& w) const = 0;

  /// Orthogonal projection of an ambient vector onto T_x. Idempotent and
  /// self-adjoint; turns Euclidean gradients into Riemannian ones.
  virtual Matrix project_tangent(const Matrix& x, const Matrix& v) const = 0;

  /// Geodesic distance on the sphere; ||R_x^{-1}(y)||_x on Stiefel, which
  /// coincides with it whenever the retraction is the exponential map.
  virtual double dist(const Matrix& x, const Matrix& y) const = 0;

  /// Residual of the point invariant (0 on-manifold).
  virtual double point_error(const Matrix& x) const = 0;

  /// Residual of the tangency invariant of v at x (0 if tangent).
  virtual double tangency_error(const Matrix& x, const Matrix& v) const = 0;

  /// Nearest-point style re-normalization used to absorb retraction drift.
  virtual Matrix normalize_point(const Matrix& x) const = 0;

  virtual Matrix random_point(RngStream& rng) const = 0;

  Matrix random_tangent(RngStream& rng, const Matrix& x) const;
};

using ManifoldPtr = std::shared_ptr<const Manifold>;

namespace detail {
void debug_check_point(const Manifold& m, const Matrix& x, const char* who);
void debug_check_tangent(const Manifold& m, const Matrix& x, const Matrix& v, const char* who);
}  // namespace detail

}  // namespace rgcg
