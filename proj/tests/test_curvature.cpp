#include <gtest/gtest.h>

#include "tn/curvature.hpp"

using namespace tn;

namespace {

const std::vector<std::string> kBases = {"euclidean2", "euclidean3", "sphere2", "hyperbolic2", "sphere3", "warped3"};

Vec pt(std::initializer_list<double> v) {
  Vec x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double d : v) x[i++] = d;
  return x;
}

}  // namespace

TEST(CurvatureClosed, EuclideanVanishes) {
  const auto M = euclidean(2);
  const BundlePoint p{pt({0.3, 0.1}), pt({1.0, -2.0})};
  EXPECT_EQ(max_abs(riemann_G_closed_tensor(M, p)), 0.0);
  const BundleVector X{p, pt({1, 2}), pt({0, 1})};
  EXPECT_EQ(riemann_G_closed(M, p, X, X, X, X), 0.0);
}

TEST(CurvatureClosed, LiftEvaluationsOnSphere) {
  const auto M = sphere2();
  for (const auto& p : sample_bundle(M, 8)) {
    const auto base = geometry_at(M, p.x, 2);
    const Vec X = pt({0.3, 0.7}), Y = pt({-0.5, 0.2}), Z = pt({0.9, 0.1}), W = pt({0.4, -0.6});
    auto h = [&](const Vec& v) { return lift(M, p, v, LiftKind::Horizontal); };
    auto v = [&](const Vec& w) { return lift(M, p, w, LiftKind::Vertical); };
    EXPECT_NEAR(riemann_G_closed(M, p, h(X), h(Y), h(Z), h(W)), 0.0, 1e-12);
    double rm = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
          for (int l = 0; l < 2; ++l) rm += base.riemann_lower(i, j, k, l) * X[i] * Y[j] * Z[k] * W[l];
    EXPECT_NEAR(riemann_G_closed(M, p, h(X), h(Y), h(Z), v(W)), rm, 1e-12);
    EXPECT_NEAR(riemann_G_closed(M, p, v(X), v(Y), h(Z), h(W)), 0.0, 1e-12);
  }
}

TEST(CurvatureClosed, AntisymmetriesAndTensorAgreement) {
  for (const auto& name : kBases) {
    const auto M = make_builtin(name);
    const int N = 2 * M.n();
    for (const auto& p : sample_bundle(M, 4)) {
      const Tensor4 R = riemann_G_closed_tensor(M, p);
      for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b)
          for (int c = 0; c < N; ++c)
            for (int d = 0; d < N; ++d) {
              EXPECT_NEAR(R(a, b, c, d), -R(b, a, c, d), 1e-12);
              EXPECT_NEAR(R(a, b, c, d), -R(a, b, d, c), 1e-12);
            }
      auto basis = [&](int A) {
        Vec e = Vec::Zero(N);
        e[A] = 1.0;
        return BundleVector{p, e.head(M.n()), e.tail(M.n())};
      };
      EXPECT_NEAR(riemann_G_closed(M, p, basis(0), basis(N - 1), basis(1), basis(0)), R(0, N - 1, 1, 0), 1e-12);
    }
  }
}

TEST(CurvatureOracle, EuclideanIsZero) {
  EXPECT_LE(max_abs(curvature_oracle_at(euclidean(2), {pt({0.1, 0.2}), pt({1.0, 1.5})})), 1e-8);
}

TEST(CurvatureOracle, MatchesClosedFormOnAllBases) {
  for (const auto& name : kBases) {
    const auto M = make_builtin(name);
    const int N = 2 * M.n();
    for (const auto& p : sample_bundle(M, 16)) {
      const Tensor4 oracle = curvature_oracle_at(M, p);
      EXPECT_LE(max_abs_diff(oracle, riemann_G_closed_tensor(M, p)), 1e-4) << name;
      for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b)
          for (int c = 0; c < N; ++c)
            for (int d = 0; d < N; ++d) {
              EXPECT_NEAR(oracle(a, b, c, d), -oracle(b, a, c, d), 1e-5);
              EXPECT_NEAR(oracle(a, b, c, d), -oracle(a, b, d, c), 1e-5);
            }
    }
  }
}

TEST(CurvatureInvariants, ScalarFlatRicciStructureAndOracleGap) {
  for (const std::string name : {"euclidean2", "sphere2", "hyperbolic2", "warped2", "warped3"}) {
    const auto M = make_builtin(name);
    for (const auto& p : sample_bundle(M, 8)) {
      const auto r = invariants_report(M, p, false);
      EXPECT_LE(std::abs(r.scalar_G), 1e-6) << name;
      EXPECT_LE(r.ricci_horizontal_residual, 1e-6) << name;
      EXPECT_LE(r.ricci_vertical_residual, 1e-6) << name;
      EXPECT_LE(r.oracle_gap, 1e-4) << name;
    }
  }
}

TEST(CurvatureInvariants, EinsteinOnlyForRicciFlatBase) {
  const auto E = euclidean(3);
  const auto S = sphere2();
  for (const auto& p : sample_bundle(E, 4)) EXPECT_LE(invariants_report(E, p, false).einstein_residual, 1e-8);
  double worst = 0.0;
  for (const auto& p : sample_bundle(S, 4)) worst = std::max(worst, invariants_report(S, p, false).einstein_residual);
  EXPECT_GT(worst, 1e-2);
}

TEST(CurvatureInvariants, ConformalFlatnessDichotomy) {
  for (const std::string name : {"sphere2", "hyperbolic2", "sphere3"})
    for (const auto& p : sample_bundle(make_builtin(name), 4))
      EXPECT_LE(invariants_report(make_builtin(name), p, false).weyl_max, 1e-5) << name;
  double worst = 0.0;
  const auto W = warped3();
  for (const auto& p : sample_bundle(W, 4)) worst = std::max(worst, invariants_report(W, p, false).weyl_max);
  EXPECT_GE(worst, 1e-2);
}

TEST(CurvatureInvariants, NonConstantGaussCurvatureBreaksConformalFlatness) {
  // Surfaces whose Gauss curvature varies: the fiber-derivative term of the
  // curvature survives in the Weyl tensor, so G is not conformally flat.
  const auto M = warped2();
  double worst = 0.0;
  for (const auto& p : sample_bundle(M, 4)) worst = std::max(worst, invariants_report(M, p, false).weyl_max);
  EXPECT_GT(worst, 1e-2);
}

TEST(CurvatureInvariants, LocalSymmetryDichotomy) {
  const auto S = sphere2();
  for (const auto& p : sample_bundle(S, 2)) EXPECT_LE(invariants_report(S, p).locally_symmetric_residual, 1e-4);
  const auto W = warped3();
  double worst = 0.0;
  for (const auto& p : sample_bundle(W, 2)) worst = std::max(worst, invariants_report(W, p).locally_symmetric_residual);
  EXPECT_GE(worst, 1e-2);
}

TEST(CurvatureInvariants, WeylOfConstantCurvatureModelVanishes) {
  // Round 3-sphere metric written as a 3x3 field: Weyl must vanish identically.
  const auto M = sphere3();
  const Vec x = pt({0.2, -0.3, 0.1});
  const auto geo = geometry_at(M, x, 2);
  Mat g = geo.g;
  Mat gi = geo.g_inv;
  const Tensor4 W = weyl_from_lower(geo.riemann_lower, g, gi);
  EXPECT_LE(max_abs(W), 1e-12);
}
