#include <gtest/gtest.h>

#include <random>

#include "tn/lagrangian.hpp"

using namespace tn;

namespace {

Vec pt(std::initializer_list<double> v) {
  Vec x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double d : v) x[i++] = d;
  return x;
}

DomainBox box(int n, double lo, double hi) {
  return DomainBox{std::vector<double>(static_cast<std::size_t>(n), lo), std::vector<double>(static_cast<std::size_t>(n), hi)};
}

double max_vec(const std::vector<std::vector<Vec>>& B) {
  double m = 0.0;
  for (const auto& row : B)
    for (const auto& v : row) m = std::max(m, v.cwiseAbs().maxCoeff());
  return m;
}

// Random potentials with a nondegenerate Hessian on (0.2,1.2)^n.
std::string random_potential(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> U(0.2, 1.0);
  const auto c = [&] { return std::to_string(U(rng)); };
  std::string u = c() + "*x1^2 + " + c() + "*exp(" + c() + "*x1) + " + c() + "*x1^4";
  if (n >= 2) u += " + " + c() + "*x2^2 + " + c() + "*x1*x2^3 + " + c() + "*sin(x2)";
  if (n >= 3) u += " + " + c() + "*x3^2 + " + c() + "*log(1 + x3)*x2 + " + c() + "*x3^4";
  return u;
}

}  // namespace

TEST(LagrangianGraph, HalfSquaredNorm) {
  const auto P = potential_from_text("0.5*(x1^2 + x2^2)", 2, default_potential_box(2));
  const auto r = graph_geometry_at(P, pt({0.3, -0.2}));
  EXPECT_LE((r.induced - 2.0 * Mat::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_EQ(max_vec(r.B), 0.0);
  EXPECT_EQ(r.H.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(r.minimal_residual, 0.0);
  EXPECT_EQ(r.hminimal_residual, 0.0);
  EXPECT_EQ(r.totally_geodesic_residual, 0.0);
}

TEST(LagrangianGraph, QuarticInOneDimension) {
  const auto P = potential_from_text("x1^4", 1, box(1, 0.0, 2.0));
  const auto r = graph_geometry_at(P, pt({1.0}));
  EXPECT_NEAR(r.detHess, 12.0, 1e-12);
  EXPECT_GT(r.H.norm(), 0.1);
  EXPECT_GT(r.minimal_residual, 0.1);
  const auto oracle = immersion_report(euclidean(1), potential_immersion_jet(potential_jet(P, pt({1.0}))));
  EXPECT_LE((oracle.H - r.H).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(LagrangianGraph, SaddleQuadratic) {
  const auto P = potential_from_text("x1*x2", 2, default_potential_box(2));
  const auto r = graph_geometry_at(P, pt({0.4, 0.1}));
  Mat expected(2, 2);
  expected << 0, 2, 2, 0;
  EXPECT_LE((r.induced - expected).cwiseAbs().maxCoeff(), 1e-14);
  Eigen::SelfAdjointEigenSolver<Mat> es(r.induced);
  EXPECT_LT(es.eigenvalues()[0], 0.0);
  EXPECT_GT(es.eigenvalues()[1], 0.0);
  EXPECT_EQ(max_vec(r.B), 0.0);
}

TEST(LagrangianGraph, DegenerateHessianNamesThePoint) {
  const auto P = potential_from_text("x1^4", 2, default_potential_box(2));
  try {
    graph_geometry_at(P, pt({0.5, 0.5}));
    FAIL() << "expected GeometryError";
  } catch (const GeometryError& e) {
    EXPECT_NE(std::string(e.what()).find("degenerate Hessian"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("0.5"), std::string::npos);
  }
}

TEST(LagrangianGraph, ClosedFormMatchesSubmanifoldOracle) {
  std::mt19937_64 rng(7);
  int checked = 0;
  for (int t = 0; t < 32; ++t) {
    const int n = 1 + t % 3;
    const auto P = potential_from_text(random_potential(rng, n), n, box(n, 0.2, 1.2));
    const Vec x = sample_potential(P, 1, static_cast<std::uint64_t>(t))[0];
    const auto r = graph_geometry_at(P, x);
    const auto o = immersion_report(euclidean(n), potential_immersion_jet(potential_jet(P, x)));
    EXPECT_LE((o.H - r.H).cwiseAbs().maxCoeff(), 1e-6) << P.label;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        EXPECT_LE((o.B[a][b] - r.B[a][b]).cwiseAbs().maxCoeff(), 1e-8) << P.label;
    EXPECT_LE((o.pullback - r.induced).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LE(o.omega_pullback_max, 1e-12);
    ++checked;
  }
  EXPECT_EQ(checked, 32);
}

TEST(LagrangianGraph, JHIsAGradient) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 12; ++t) {
    const int n = 1 + t % 3;
    const auto P = potential_from_text(random_potential(rng, n), n, box(n, 0.2, 1.2));
    for (const auto& x : sample_potential(P, 2, static_cast<std::uint64_t>(t)))
      EXPECT_LE(graph_geometry_at(P, x).jh_gradient_residual, 1e-8) << P.label;
  }
}

TEST(LagrangianGraph, LaplacianMatchesDivergenceFormByDifferences) {
  // Δ_g L = |g|^{-1/2} ∂_i(|g|^{1/2} g^{ij} ∂_j L), flux evaluated exactly, divergence by differences.
  std::mt19937_64 rng(3);
  for (int t = 0; t < 6; ++t) {
    const int n = 2 + t % 2;
    const auto P = potential_from_text(random_potential(rng, n), n, box(n, 0.2, 1.2));
    const Vec x = sample_potential(P, 1, static_cast<std::uint64_t>(t))[0];
    auto flux = [&](const Vec& y) {
      const auto r = graph_geometry_at(P, y);
      const double vol = std::sqrt(std::abs(r.induced.determinant()));
      return Vec(vol * r.induced.inverse() * r.grad_log_det);
    };
    double div = 0.0;
    for (int i = 0; i < n; ++i) div += fd_partial<Vec>(flux, x, i, 1e-3)[i];
    const auto r = graph_geometry_at(P, x);
    div /= std::sqrt(std::abs(r.induced.determinant()));
    EXPECT_NEAR(r.hminimal_residual, std::abs(div), 1e-7 * std::max(1.0, std::abs(div))) << P.label;
  }
}

TEST(LagrangianGraph, JacobiFormulaLemma) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> N01;
  for (int t = 0; t < 20; ++t) {
    const int n = 2 + t % 3;
    Mat A = Mat::NullaryExpr(n, n, [&] { return N01(rng); });
    Mat Bm = Mat::NullaryExpr(n, n, [&] { return N01(rng); });
    A = Mat(A + A.transpose()) + 4.0 * Mat::Identity(n, n);
    Bm = Mat(Bm + Bm.transpose());
    auto g = [&](double s) { return Mat(A + s * Bm + s * s * Mat::Identity(n, n)); };
    const double s0 = 0.3;
    const Mat dg = Bm + 2.0 * s0 * Mat::Identity(n, n);
    const double lhs = (g(s0).inverse().array() * dg.array()).sum();
    const double h = 1e-4;
    auto L = [&](double s) { return std::log(std::abs(g(s).determinant())); };
    const double rhs = (8.0 * (L(s0 + h) - L(s0 - h)) - (L(s0 + 2 * h) - L(s0 - 2 * h))) / (12.0 * h);
    EXPECT_NEAR(lhs, rhs, 1e-8);
  }
}

TEST(Classify, QuadraticsAreTotallyGeodesic) {
  const auto P = potential_from_text("1.5*x1^2 + x1*x2 + 0.75*x2^2", 2, default_potential_box(2));
  const auto c = classify(P, 16);
  EXPECT_LE(c.minimal_residual_stat, 1e-10);
  EXPECT_LE(c.hminimal_residual_stat, 1e-10);
  EXPECT_LE(c.totally_geodesic_residual_stat, 1e-10);
  // Hess = [[3,1],[1,1.5]].
  EXPECT_NEAR(c.fitted_c0, 3.5, 1e-12);
}

TEST(Classify, DegenerateSampleRaises) {
  const auto P = potential_from_text("x1^4 + x2^2", 2, default_potential_box(2));
  EXPECT_NO_THROW(classify(P, 8));  // sampled points avoid x1 = 0
  EXPECT_THROW(classify(potential_from_text("x1^4", 2, default_potential_box(2)), 4), GeometryError);
}

TEST(GaussFlatness, QuadraticAndSeparablePotentialsAreFlat) {
  EXPECT_LE(gauss_flatness_check(potential_from_text("x1^2 + 3*x1*x2 + 4*x2^2", 2, default_potential_box(2)), 8),
            1e-10);
  // Hessian diag(f''(x1), k''(x2)): each entry depends on its own coordinate only.
  EXPECT_LE(gauss_flatness_check(potential_from_text("exp(x1) + x2^4", 2, box(2, 0.5, 1.5)), 8), 1e-10);
}

TEST(GaussFlatness, NonRelatedPotentialIsCurved) {
  EXPECT_GE(gauss_flatness_check(potential_from_text("exp(x1 + x2^2) + x1^2", 2, box(2, 0.5, 1.5)), 8), 1e-2);
}

TEST(GaussFlatness, HomogeneousQuarticIsFlat) {
  // The Hessian metric of x1^4 + x2^4 + x1^2 x2^2 is flat. Confirmed against
  // finite differences of the metric field, independent of the jet route.
  const auto P = potential_from_text("x1^4 + x2^4 + x1^2*x2^2", 2, box(2, 0.5, 1.5));
  EXPECT_LE(gauss_flatness_check(P, 8), 1e-10);
  const MetricField g = [&](const Vec& x) { return Mat(2.0 * potential_jet(P, x).hess); };
  for (const auto& x : sample_potential(P, 4)) EXPECT_LE(max_abs(fd_riemann_lower(g, x, 1e-3)), 1e-6);
}

TEST(GaussFlatness, RankOneExponentialHasDegenerateHessian) {
  // Hess exp(a·x) = exp(a·x) a aᵀ has rank one, so the induced metric is degenerate everywhere.
  const auto P = potential_from_text("exp(x1 + 2*x2)", 2, default_potential_box(2));
  EXPECT_THROW(gauss_flatness_check(P, 4), GeometryError);
}
