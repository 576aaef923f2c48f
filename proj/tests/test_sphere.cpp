#include "rgcg/experiment.hpp"
#include "rgcg/rng.hpp"
#include "rgcg/sphere.hpp"

#include <doctest.h>

#include <numbers>

using rgcg::Matrix;
using rgcg::RngStream;
using rgcg::Sphere;

namespace {

constexpr double kPi = std::numbers::pi;

Matrix unit(int n, int i) {
  Matrix e = Matrix::Zero(n, 1);
  e(i, 0) = 1.0;
  return e;
}

Matrix random_unit(RngStream& rng, int n) {
  Matrix x(n, 1);
  for (int i = 0; i < n; ++i) x(i, 0) = rng.normal();
  return x / x.norm();
}

}  // namespace

TEST_SUITE_BEGIN("sphere");

TEST_CASE("exponential map known values") {
  Sphere m(3);
  const Matrix e1 = unit(3, 0), e2 = unit(3, 1);

  CHECK((m.retract(e1, Matrix::Zero(3, 1)) - e1).isZero(0.0));
  CHECK((m.retract(e1, (kPi / 2.0) * e2) - e2).norm() < 1e-14);
  CHECK((m.retract(e1, kPi * e2) + e1).norm() < 1e-14);

  RngStream rng(31, "sph-exp");
  for (int trial = 0; trial < 200; ++trial) {
    const Matrix x = random_unit(rng, 3);
    Matrix eta = m.random_tangent(rng, x);
    eta *= 3.0 * rng.uniform() / eta.norm();
    CHECK(std::abs(m.retract(x, eta).norm() - 1.0) <= 1e-12);
  }
}

TEST_CASE("log map known values and exp/log round trip") {
  Sphere m(3);
  const Matrix e1 = unit(3, 0), e2 = unit(3, 1);

  CHECK(m.inv_retract(e1, e1).norm() == 0.0);
  CHECK((m.inv_retract(e1, e2) - (kPi / 2.0) * e2).norm() < 1e-14);
  CHECK(m.dist(e1, e2) == doctest::Approx(kPi / 2.0));
  CHECK(m.dist(e1, -e1) == doctest::Approx(kPi));
  CHECK_THROWS_AS(m.inv_retract(e1, -e1), rgcg::InverseRetractionError);

  RngStream rng(32, "sph-log");
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix x = random_unit(rng, 3);
    Matrix y = random_unit(rng, 3);
    if (x.col(0).dot(y.col(0)) <= -1.0 + 1e-6) continue;
    const Matrix d = m.inv_retract(x, y);
    CHECK(std::abs(d.norm() - m.dist(x, y)) <= 1e-10);
    CHECK((m.retract(x, d) - y).norm() <= 1e-8);
  }
}

TEST_CASE("parallel transport rotates the geodesic plane and fixes its complement") {
  Sphere m(3);
  const Matrix e1 = unit(3, 0), e2 = unit(3, 1), e3 = unit(3, 2);
  const Matrix eta = (kPi / 2.0) * e2;

  CHECK((m.transport(e1, eta, e3) - e3).norm() < 1e-14);
  // e2 is the geodesic direction: after a quarter turn it points at -e1.
  CHECK((m.transport(e1, eta, e2) + e1).norm() < 1e-14);
}

TEST_CASE("parallel transport is isometric") {
  Sphere m(6);
  RngStream rng(33, "sph-iso");
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix x = random_unit(rng, 6);
    Matrix eta = m.random_tangent(rng, x);
    eta *= (0.1 + 2.5 * rng.uniform()) / eta.norm();
    const Matrix xi = m.random_tangent(rng, x);
    const Matrix out = m.transport(x, eta, xi);
    REQUIRE(std::abs(out.norm() - xi.norm()) <= 1e-10 * std::max(1.0, xi.norm()));
    REQUIRE(m.tangency_error(m.retract(x, eta), out) <= 1e-10);
  }
}

TEST_CASE("transport_back is the adjoint of transport") {
  Sphere m(5);
  RngStream rng(34, "sph-adj");
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix x = random_unit(rng, 5);
    Matrix eta = m.random_tangent(rng, x);
    eta *= (0.1 + 2.0 * rng.uniform()) / eta.norm();
    const Matrix y = m.retract(x, eta);
    const Matrix w = m.random_tangent(rng, y);
    const Matrix zeta = m.random_tangent(rng, x);
    const double lhs = m.inner(m.transport_back(x, eta, w), zeta);
    const double rhs = m.inner(w, m.transport(x, eta, zeta));
    REQUIRE(lhs == doctest::Approx(rhs).epsilon(1e-10));
  }
}

TEST_CASE("solve_l1_sphere closed-form values") {
  Matrix x(3, 1);
  x << 2.0, 0.05, -1.5;
  const Matrix y = rgcg::solve_l1_sphere(x, 1.0);
  const double s = std::sqrt(1.25);
  CHECK(y(0, 0) == doctest::Approx(1.0 / s).epsilon(1e-10));  // 0.8944...
  CHECK(y(1, 0) == 0.0);
  CHECK(y(2, 0) == doctest::Approx(-0.5 / s).epsilon(1e-10));  // -0.4472...

  // Everything thresholded away: signed axis of the largest |x_i|.
  Matrix small(2, 1);
  small << 0.3, -0.2;
  const Matrix y2 = rgcg::solve_l1_sphere(small, 0.5);
  CHECK(y2(0, 0) == 1.0);
  CHECK(y2(1, 0) == 0.0);

  // Single surviving coordinate normalizes to itself.
  Matrix spike = Matrix::Zero(4, 1);
  spike(0, 0) = 3.0;
  CHECK((rgcg::solve_l1_sphere(spike, 1.0) - unit(4, 0)).isZero(0.0));

  // Ties in the fallback break to the smallest index.
  Matrix tie(3, 1);
  tie << -0.2, 0.2, 0.2;
  const Matrix y3 = rgcg::solve_l1_sphere(tie, 0.5);
  CHECK(y3(0, 0) == -1.0);
  CHECK(y3(1, 0) == 0.0);
}

TEST_CASE("solve_l1_sphere beats Monte-Carlo probes with local refinement") {
  RngStream rng(35, "l1-mc");
  for (const int n : {2, 4}) {
    for (int trial = 0; trial < 10; ++trial) {
      Matrix x(n, 1);
      for (int i = 0; i < n; ++i) x(i, 0) = 3.0 * rng.normal();
      const double lam = 0.2 + rng.uniform();
      const auto objective = [&](const Matrix& y) {
        return 0.5 / lam * (y - x).squaredNorm() + y.cwiseAbs().sum();
      };
      const Matrix y_star = rgcg::solve_l1_sphere(x, lam);
      CHECK(std::abs(y_star.norm() - 1.0) <= 1e-12);
      const double f_star = objective(y_star);

      Matrix best = random_unit(rng, n);
      double best_val = objective(best);
      for (int probe = 1; probe < 10000; ++probe) {
        const Matrix y = random_unit(rng, n);
        const double v = objective(y);
        if (v < best_val) {
          best_val = v;
          best = y;
        }
        REQUIRE(f_star <= v + 1e-9);
      }
      // Projected-subgradient refinement of the best probe.
      Matrix y = best;
      for (int t = 0; t < 500; ++t) {
        Matrix sg = (y - x) / lam + y.unaryExpr([](double v) {
                      return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
                    });
        y -= (0.05 / std::sqrt(t + 1.0)) * sg;
        y /= y.norm();
        best_val = std::min(best_val, objective(y));
      }
      REQUIRE(f_star <= best_val + 1e-9);
    }
  }
}

TEST_CASE("linearized model gradient matches finite differences") {
  Sphere m(4);
  RngStream rng(36, "sph-fd");
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix x = random_unit(rng, 4);
    const Matrix g = m.random_tangent(rng, x);
    const double lam = 0.3 + rng.uniform();
    // A non-degenerate evaluation point away from x and its antipode.
    Matrix y = random_unit(rng, 4);
    if (std::abs(x.col(0).dot(y.col(0))) > 0.95) continue;

    const auto h = [&](const Matrix& yy) {
      const Matrix yn = yy / yy.norm();
      return m.inner(g, m.inv_retract(x, yn)) / lam;
    };
    const Matrix grad = rgcg::detail::sphere_model_gradient(x, g, lam, y);
    const Matrix v = m.random_tangent(rng, y);
    const double t = 1e-6;
    const double fd = (h(y + t * v) - h(y - t * v)) / (2.0 * t);
    const double an = grad.col(0).dot(v.col(0));
    REQUIRE(std::abs(fd - an) <= 1e-5 * std::max(1.0, std::abs(an)));
  }
}

TEST_CASE("model gradient stays finite near y = x") {
  Sphere m(3);
  RngStream rng(37, "sph-fd-near");
  const Matrix x = random_unit(rng, 3);
  const Matrix g = m.random_tangent(rng, x);
  // At y = x the model gradient reduces to g / lam.
  const Matrix at_x = rgcg::detail::sphere_model_gradient(x, g, 2.0, x);
  CHECK((at_x - g / 2.0).norm() <= 1e-9);
}

TEST_CASE("gap subproblem: stationary pure-g case returns theta = 0") {
  Sphere m(3);
  const Matrix x = unit(3, 0);  // e1 minimizes ||.||_1 on the sphere
  const Matrix grad = Matrix::Zero(3, 1);
  const auto g_eval = [](const Matrix& y) { return 0.5 * y.cwiseAbs().sum(); };
  rgcg::SphereSubproblemConfig cfg;
  cfg.lam = 0.5;
  const rgcg::GapResult gap = rgcg::sphere_gap_subproblem(m, x, grad, g_eval, cfg);
  CHECK(gap.theta == 0.0);
  CHECK((gap.p - x).isZero(0.0));
  CHECK(gap.d.isZero(0.0));
}

TEST_CASE("gap subproblem invariants on random sparse-PCA-like instances") {
  Sphere m(3);
  RngStream rng(38, "sph-gap");
  for (int trial = 0; trial < 40; ++trial) {
    Matrix a(3, 3);
    for (int j = 0; j < 3; ++j)
      for (int i = 0; i < 3; ++i) a(i, j) = rng.normal();
    const Matrix gram = a.transpose() * a;
    const double lam = 0.1 + rng.uniform();
    const Matrix x = random_unit(rng, 3);
    const Matrix grad = m.project_tangent(x, -2.0 * gram * x);
    const auto g_eval = [lam](const Matrix& y) { return lam * y.cwiseAbs().sum(); };

    rgcg::SphereSubproblemConfig cfg;
    cfg.lam = lam;
    const rgcg::GapResult gap = rgcg::sphere_gap_subproblem(m, x, grad, g_eval, cfg);

    REQUIRE(gap.theta <= 0.0);
    REQUIRE((m.retract(x, gap.d) - gap.p).norm() <= 1e-8);
    if (gap.theta == 0.0) REQUIRE((gap.p - x).isZero(0.0));
    if (gap.theta < 0.0) {
      // Returned theta is reproducible from the returned point.
      const double recomputed = m.inner(grad, gap.d) + g_eval(gap.p) - g_eval(x);
      REQUIRE(gap.theta == doctest::Approx(recomputed).epsilon(1e-12));
    }
  }
}

TEST_CASE("gap subproblem dominates Monte-Carlo probes on standardized instances") {
  // Probes live in the open hemisphere around x, the largest geodesically
  // convex domain (over the whole sphere the gap objective has no
  // minimizer: ||Log_x(u)|| saturates at pi while the L1 change vanishes
  // near the antipode), and are held to the subproblem's own admissibility
  // rule: their direction must realize slope_fraction of their gap as an
  // actual descent rate.
  Sphere m(3);
  RngStream prng(99, "sph-gap-probes");
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const auto inst = rgcg::generate_instance(seed, rgcg::Manifold::Kind::Sphere, 3, 1, 0.1);
    const double lam = 0.1;
    const Matrix x = rgcg::initial_point(seed, 1, m);
    const Matrix grad = m.project_tangent(x, -2.0 * inst.gram * x);
    const auto g_eval = [lam](const Matrix& y) { return lam * y.cwiseAbs().sum(); };

    rgcg::SphereSubproblemConfig cfg;
    cfg.lam = lam;
    const rgcg::GapResult gap = rgcg::sphere_gap_subproblem(m, x, grad, g_eval, cfg);
    REQUIRE(gap.theta <= 0.0);

    const auto slope_along = [&](const Matrix& d) {
      double s = m.inner(grad, d);
      for (int i = 0; i < 3; ++i) {
        const double xi = x(i, 0), di = d(i, 0);
        s += lam * (xi > 0.0 ? di : (xi < 0.0 ? -di : std::abs(di)));
      }
      return s;
    };
    for (int probe = 0; probe < 10000; ++probe) {
      const Matrix u = random_unit(prng, 3);
      if (x.col(0).dot(u.col(0)) <= 0.0) continue;
      const Matrix du = m.inv_retract(x, u);
      const double theta_u = m.inner(grad, du) + g_eval(u) - g_eval(x);
      if (slope_along(du) > cfg.slope_fraction * theta_u) continue;
      REQUIRE(gap.theta <= theta_u + 1e-6);
    }
  }
}

TEST_SUITE_END();
