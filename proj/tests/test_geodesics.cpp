#include <gtest/gtest.h>

#include <cmath>

#include "tn/geodesics.hpp"

using namespace tn;

namespace {

Vec pt(std::initializer_list<double> v) {
  Vec x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double d : v) x[i++] = d;
  return x;
}

double gnorm(const RiemannianChart& M, const Vec& x, const Vec& v) { return std::sqrt(v.dot(M.metric(x) * v)); }

}  // namespace

TEST(Geodesics, EuclideanStraightLines) {
  const auto M = euclidean(2);
  const BundlePoint p{pt({0.1, -0.2}), pt({1.0, 0.5})};
  const BundleVector v{p, pt({0.3, 0.4}), pt({-0.2, 0.6})};
  const auto split = integrate_split(M, p, v, 1.0, 100);
  const auto direct = integrate_direct(M, p, v, 1.0, 100);
  for (std::size_t i = 0; i < split.times.size(); ++i) {
    const double t = split.times[i];
    EXPECT_LE((split.points[i].x - (p.x + t * v.xdot)).norm(), 1e-14);
    EXPECT_LE((split.points[i].V - (p.V + t * v.vdot)).norm(), 1e-14);
  }
  EXPECT_LE(path_gap(split, direct), 1e-12);
}

TEST(Geodesics, EquatorJacobiFieldIsSine) {
  const auto M = sphere2();
  const BundlePoint p{pt({M_PI / 2, 0.5}), pt({0.0, 0.0})};
  // W0 = unit normal to the equator; with V0 = 0 the fibre velocity equals W0.
  const BundleVector v{p, pt({0.0, 1.0}), pt({1.0, 0.0})};
  const auto path = integrate_split(M, p, v, 3.0, 3000);
  ASSERT_FALSE(path.truncated);
  for (std::size_t i = 0; i < path.times.size(); ++i)
    EXPECT_NEAR(gnorm(M, path.points[i].x, path.points[i].V), std::abs(std::sin(path.times[i])), 1e-5);
}

TEST(Geodesics, TangentialParallelFieldKeepsLength) {
  const auto M = sphere2();
  const BundlePoint p{pt({M_PI / 2, 0.5}), pt({0.0, 0.7})};
  const BundleVector v{p, pt({0.0, 1.0}), pt({0.0, 0.0})};
  const auto path = integrate_split(M, p, v, 2.0, 2000);
  for (std::size_t i = 0; i < path.times.size(); ++i) {
    const auto& q = path.points[i];
    const Vec xd = path.velocities[i].xdot;
    EXPECT_NEAR(gnorm(M, q.x, q.V), 0.7, 1e-10);
    // V stays parallel to the velocity.
    EXPECT_NEAR(q.V[0] * xd[1] - q.V[1] * xd[0], 0.0, 1e-10);
  }
}

TEST(Geodesics, SplitMatchesDirectOnSphere) {
  const auto M = sphere2();
  for (const auto& d : sample_initial_data(M, 4, 1.0)) EXPECT_LE(compare_geodesics(M, d.p, d.v, 1.0, 1000), 1e-6);
}

TEST(Geodesics, SplitMatchesDirectOnWarped) {
  const auto M = warped3();
  for (const auto& d : sample_initial_data(M, 2, 1.0)) EXPECT_LE(compare_geodesics(M, d.p, d.v, 1.0, 1000), 1e-6);
}

TEST(Geodesics, EnergyConserved) {
  const auto M = hyperbolic2();
  for (const auto& d : sample_initial_data(M, 3, 1.0)) {
    EXPECT_LE(energy_drift(M, integrate_split(M, d.p, d.v, 1.0, 1000)), 1e-5);
    EXPECT_LE(energy_drift(M, integrate_direct(M, d.p, d.v, 1.0, 1000)), 1e-5);
  }
}

TEST(Geodesics, NullDataStaysNull) {
  const auto M = sphere2();
  const BundlePoint p{pt({1.2, 2.0}), pt({0.5, -0.3})};
  // Vertical vectors are null for G.
  const BundleVector v{p, pt({0.0, 0.0}), pt({0.4, 0.8})};
  const auto path = integrate_direct(M, p, v, 1.0, 1000);
  for (const auto& u : path.velocities) {
    const Vec c = u.coords();
    EXPECT_NEAR(c.dot(structures_at(M, u.base).G * c), 0.0, 1e-5);
  }
}

TEST(Geodesics, FourthOrderConvergence) {
  const auto M = sphere2();
  for (const auto& d : sample_initial_data(M, 3, 1.0)) {
    const double r = convergence_ratio(M, d.p, d.v, 1.0, 20);
    EXPECT_GE(r, 12.0);
    EXPECT_LE(r, 20.0);
  }
}

TEST(Geodesics, EquationResidualsAlongPath) {
  const auto M = sphere2();
  for (const auto& d : sample_initial_data(M, 3, 1.0)) {
    const auto r = path_residuals(M, integrate_split(M, d.p, d.v, 1.0, 1000));
    EXPECT_LE(r.base_geodesic, 1e-6);
    EXPECT_LE(r.jacobi, 1e-6);
  }
}

TEST(Geodesics, TimeReversal) {
  const auto M = sphere2();
  for (const auto& d : sample_initial_data(M, 3, 1.0)) {
    const auto fwd = integrate_split(M, d.p, d.v, 1.0, 1000);
    const BundleVector& end = fwd.velocities.back();
    const BundleVector back_v{end.base, -end.xdot, -end.vdot};
    const auto back = integrate_split(M, end.base, back_v, 1.0, 1000);
    const std::size_t m = fwd.points.size();
    double gap = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      gap = std::max(gap, (back.points[i].coords() - fwd.points[m - 1 - i].coords()).cwiseAbs().maxCoeff());
    EXPECT_LE(gap, 1e-8);
  }
}

TEST(Geodesics, ExitTruncates) {
  const auto M = euclidean(2);
  const BundlePoint p{pt({4.0, 0.0}), pt({0.0, 0.0})};
  const auto path = integrate_split(M, p, BundleVector{p, pt({2.0, 0.0}), pt({0.0, 0.0})}, 1.0, 10);
  EXPECT_TRUE(path.truncated);
  EXPECT_LT(path.times.back(), 1.0);
  EXPECT_THROW(integrate_split(M, p, BundleVector{p, pt({1.0}), pt({0.0, 0.0})}, 1.0, 10), std::invalid_argument);
}
