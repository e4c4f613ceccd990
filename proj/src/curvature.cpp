#include "tn/curvature.hpp"

namespace tn {

namespace {

double rm4(const Tensor4& T, const Vec& a, const Vec& b, const Vec& c, const Vec& d) {
  double s = 0.0;
  const auto n = a.size();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index l = 0; l < n; ++l) s += T(i, j, k, l) * a[i] * b[j] * c[k] * d[l];
  return s;
}

}  // namespace

double riemann_G_closed(const RiemannianChart& M, const BundlePoint& p, const BundleVector& X, const BundleVector& Y,
                        const BundleVector& Z, const BundleVector& W) {
  const BaseGeometry geo = geometry_at(M, p.x, 3);
  const Tensor4 dv = dv_riemann(geo, p.V);
  const Mat C = connection_matrix(geo.gamma, p.V);
  auto split = [&](const BundleVector& v) { return Split{v.xdot, v.vdot + C * v.xdot}; };
  const Split x = split(X), y = split(Y), z = split(Z), w = split(W);
  const Tensor4& Rm = geo.riemann_lower;
  return rm4(Rm, x.K, y.Pi, z.Pi, w.Pi) + rm4(Rm, x.Pi, y.K, z.Pi, w.Pi) + rm4(Rm, x.Pi, y.Pi, z.K, w.Pi) +
         rm4(Rm, x.Pi, y.Pi, z.Pi, w.K) + rm4(dv, x.Pi, y.Pi, z.Pi, w.Pi);
}

Tensor4 riemann_G_closed_tensor(const BaseGeometry& geo, const Vec& V) {
  const auto n = geo.g.rows();
  const auto N = 2 * n;
  const Mat C = connection_matrix(geo.gamma, V);
  // Π and K as n×2n coordinate matrices.
  Mat P = Mat::Zero(n, N), K = Mat::Zero(n, N);
  P.leftCols(n).setIdentity();
  K.leftCols(n) = C;
  K.rightCols(n).setIdentity();
  const Tensor4 dv = dv_riemann(geo, V);
  const Tensor4& Rm = geo.riemann_lower;

  Tensor4 out = zeros4(N, N, N, N);
  for (Eigen::Index A = 0; A < N; ++A)
    for (Eigen::Index B = 0; B < N; ++B)
      for (Eigen::Index Cc = 0; Cc < N; ++Cc)
        for (Eigen::Index D = 0; D < N; ++D) {
          double s = 0.0;
          for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
              for (Eigen::Index k = 0; k < n; ++k)
                for (Eigen::Index l = 0; l < n; ++l) {
                  const double pa = P(i, A), pb = P(j, B), pc = P(k, Cc), pd = P(l, D);
                  const double mixed = K(i, A) * pb * pc * pd + pa * K(j, B) * pc * pd + pa * pb * K(k, Cc) * pd +
                                       pa * pb * pc * K(l, D);
                  s += Rm(i, j, k, l) * mixed + dv(i, j, k, l) * pa * pb * pc * pd;
                }
          out(A, B, Cc, D) = s;
        }
  return out;
}

Tensor4 riemann_G_closed_tensor(const RiemannianChart& M, const BundlePoint& p) {
  M.require_inside(p.x);
  return riemann_G_closed_tensor(geometry_at(M, p.x, 3), p.V);
}

Tensor4 curvature_oracle_at(const RiemannianChart& M, const BundlePoint& p) {
  M.require_inside(p.x);
  return fd_riemann_lower(neutral_metric_field(M), p.coords(), kBundleFdStep);
}

Mat ricci_from_lower(const Tensor4& Rm, const Mat& Ginv) {
  const auto N = Ginv.rows();
  Mat ric = Mat::Zero(N, N);
  for (Eigen::Index B = 0; B < N; ++B)
    for (Eigen::Index C = 0; C < N; ++C)
      for (Eigen::Index A = 0; A < N; ++A)
        for (Eigen::Index D = 0; D < N; ++D) ric(B, C) += Ginv(A, D) * Rm(A, B, C, D);
  return ric;
}

Tensor4 weyl_from_lower(const Tensor4& Rm, const Mat& G, const Mat& Ginv) {
  const auto N = G.rows();
  if (N < 3) throw std::invalid_argument("weyl_from_lower: dimension must be at least 3");
  const Mat ric = ricci_from_lower(Rm, Ginv);
  const double S = (Ginv.array() * ric.array()).sum();
  const double a = 1.0 / static_cast<double>(N - 2);
  const double b = S / static_cast<double>((N - 1) * (N - 2));
  Tensor4 W = zeros4(N, N, N, N);
  for (Eigen::Index i = 0; i < N; ++i)
    for (Eigen::Index j = 0; j < N; ++j)
      for (Eigen::Index k = 0; k < N; ++k)
        for (Eigen::Index l = 0; l < N; ++l)
          W(i, j, k, l) = Rm(i, j, k, l) -
                          a * (ric(j, k) * G(i, l) + ric(i, l) * G(j, k) - ric(i, k) * G(j, l) - ric(j, l) * G(i, k)) +
                          b * (G(j, k) * G(i, l) - G(i, k) * G(j, l));
  return W;
}

BundleCurvatureReport invariants_report(const RiemannianChart& M, const BundlePoint& p, bool with_local_symmetry) {
  const BaseGeometry geo = geometry_at(M, p.x, 3);
  const auto n = geo.g.rows();
  const Mat C = connection_matrix(geo.gamma, p.V);
  const Mat G = neutral_metric(geo.g, C);
  const Mat Gi = neutral_metric_inverse(geo.g, C);
  const Tensor4 oracle = curvature_oracle_at(M, p);

  BundleCurvatureReport r;
  r.point = p;
  r.ricci_G = ricci_from_lower(oracle, Gi);
  r.scalar_G = (Gi.array() * r.ricci_G.array()).sum();
  r.weyl_max = max_abs(weyl_from_lower(oracle, G, Gi));
  r.einstein_residual = max_abs(Mat(r.ricci_G - (r.scalar_G / static_cast<double>(2 * n)) * G));
  r.oracle_gap = max_abs_diff(riemann_G_closed_tensor(geo, p.V), oracle);

  // Columns of the inverse split matrix are the horizontal and vertical lifts of the coordinate basis.
  const Mat L = split_matrix_inverse(C);
  const Mat framed = L.transpose() * r.ricci_G * L;
  r.ricci_horizontal_residual = max_abs(Mat(framed.topLeftCorner(n, n) - 2.0 * geo.ricci));
  r.ricci_vertical_residual = max_abs(Mat(framed.bottomRows(n)));

  r.locally_symmetric_residual =
      with_local_symmetry ? max_abs(fd_cov_riemann_lower(neutral_metric_field(M), p.coords(), kBundleFdStep)) : -1.0;
  return r;
}

}  // namespace tn
