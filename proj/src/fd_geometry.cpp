#include "tn/fd_geometry.hpp"

namespace tn {

Tensor3 fd_christoffel(const MetricField& g, const Vec& y, double h) {
  const auto N = y.size();
  const Mat g0 = g(y);
  const Mat ginv = g0.inverse();
  std::vector<Mat> dg;
  for (Eigen::Index c = 0; c < N; ++c) dg.push_back(fd_partial<Mat>(g, y, static_cast<int>(c), h));
  Tensor3 gam = zeros3(N, N, N);
  for (Eigen::Index k = 0; k < N; ++k)
    for (Eigen::Index i = 0; i < N; ++i)
      for (Eigen::Index j = 0; j < N; ++j) {
        double s = 0.0;
        for (Eigen::Index l = 0; l < N; ++l) s += ginv(k, l) * (dg[i](l, j) + dg[j](l, i) - dg[l](i, j));
        gam(k, i, j) = 0.5 * s;
      }
  return gam;
}

Tensor4 riemann_mixed_from(const Tensor3& gam, const Tensor4& dgam) {
  const auto N = gam.dimension(0);
  Tensor4 R = zeros4(N, N, N, N);
  for (Eigen::Index l = 0; l < N; ++l)
    for (Eigen::Index i = 0; i < N; ++i)
      for (Eigen::Index j = 0; j < N; ++j)
        for (Eigen::Index k = 0; k < N; ++k) {
          double s = dgam(l, j, k, i) - dgam(l, i, k, j);
          for (Eigen::Index m = 0; m < N; ++m) s += gam(l, i, m) * gam(m, j, k) - gam(l, j, m) * gam(m, i, k);
          R(l, i, j, k) = s;
        }
  return R;
}

Tensor4 riemann_lower_from(const Mat& g, const Tensor3& gam, const Tensor4& dgam) {
  const Tensor4 R = riemann_mixed_from(gam, dgam);
  const auto N = gam.dimension(0);
  Tensor4 Rm = zeros4(N, N, N, N);
  for (Eigen::Index i = 0; i < N; ++i)
    for (Eigen::Index j = 0; j < N; ++j)
      for (Eigen::Index k = 0; k < N; ++k)
        for (Eigen::Index l = 0; l < N; ++l) {
          double s = 0.0;
          for (Eigen::Index m = 0; m < N; ++m) s += g(l, m) * R(m, i, j, k);
          Rm(i, j, k, l) = s;
        }
  return Rm;
}

namespace {

Tensor4 fd_dgamma(const MetricField& g, const Vec& y, double h) {
  const auto N = y.size();
  Tensor4 d = zeros4(N, N, N, N);
  auto gam = [&](const Vec& z) { return fd_christoffel(g, z, h); };
  for (Eigen::Index m = 0; m < N; ++m) {
    const Tensor3 dm = fd_partial<Tensor3>(gam, y, static_cast<int>(m), h);
    for (Eigen::Index k = 0; k < N; ++k)
      for (Eigen::Index i = 0; i < N; ++i)
        for (Eigen::Index j = 0; j < N; ++j) d(k, i, j, m) = dm(k, i, j);
  }
  return d;
}

}  // namespace

Tensor4 fd_riemann_mixed(const MetricField& g, const Vec& y, double h) {
  return riemann_mixed_from(fd_christoffel(g, y, h), fd_dgamma(g, y, h));
}

Tensor4 fd_riemann_lower(const MetricField& g, const Vec& y, double h) {
  return riemann_lower_from(g(y), fd_christoffel(g, y, h), fd_dgamma(g, y, h));
}

Tensor5 fd_cov_riemann_lower(const MetricField& g, const Vec& y, double h) {
  const auto N = y.size();
  const Tensor3 gam = fd_christoffel(g, y, h);
  const Tensor4 Rm = fd_riemann_lower(g, y, h);
  auto rm = [&](const Vec& z) { return fd_riemann_lower(g, z, h); };
  Tensor5 C = zeros5(N, N, N, N, N);
  for (Eigen::Index m = 0; m < N; ++m) {
    const Tensor4 d = fd_partial<Tensor4>(rm, y, static_cast<int>(m), h);
    for (Eigen::Index i = 0; i < N; ++i)
      for (Eigen::Index j = 0; j < N; ++j)
        for (Eigen::Index k = 0; k < N; ++k)
          for (Eigen::Index l = 0; l < N; ++l) {
            double s = d(i, j, k, l);
            for (Eigen::Index a = 0; a < N; ++a)
              s -= gam(a, m, i) * Rm(a, j, k, l) + gam(a, m, j) * Rm(i, a, k, l) + gam(a, m, k) * Rm(i, j, a, l) +
                   gam(a, m, l) * Rm(i, j, k, a);
            C(i, j, k, l, m) = s;
          }
  }
  return C;
}

}  // namespace tn
