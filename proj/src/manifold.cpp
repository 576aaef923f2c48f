#include "rgcg/manifold.hpp"

#include <cassert>

namespace rgcg {

Matrix Manifold::random_tangent(RngStream& rng, const Matrix& x) const {
  Matrix v(x.rows(), x.cols());
  for (Eigen::Index j = 0; j < v.cols(); ++j) {
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      v(i, j) = rng.normal();
    }
  }
  return project_tangent(x, v);
}

namespace detail {

void debug_check_point(const Manifold& m, const Matrix& x, const char* who) {
#ifndef NDEBUG
  assert(x.rows() == m.ambient_rows() && x.cols() == m.ambient_cols());
  assert(m.point_error(x) <= 1e-8 && "point off manifold");
#else
  (void)m;
  (void)x;
#endif
  (void)who;
}

void debug_check_tangent(const Manifold& m, const Matrix& x, const Matrix& v, const char* who) {
#ifndef NDEBUG
  assert(v.rows() == x.rows() && v.cols() == x.cols());
  assert(m.tangency_error(x, v) <= 1e-7 && "vector not tangent");
#else
  (void)m;
  (void)x;
  (void)v;
#endif
  (void)who;
}

}  // namespace detail

}  // namespace rgcg
