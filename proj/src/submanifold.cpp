#include "tn/submanifold.hpp"

#include <Eigen/LU>

namespace tn {

namespace {

constexpr double kDegenerateDet = 1e-10;
constexpr double kMaslovFdStep = 1e-4;

Vec christoffel_pair(const Tensor3& gam, const Vec& a, const Vec& b) {
  const auto N = a.size();
  Vec out = Vec::Zero(N);
  for (Eigen::Index k = 0; k < N; ++k)
    for (Eigen::Index i = 0; i < N; ++i) {
      if (a[i] == 0.0) continue;
      for (Eigen::Index j = 0; j < N; ++j) out[k] += gam(k, i, j) * a[i] * b[j];
    }
  return out;
}

void check_jet(const RiemannianChart& M, const ImmersionJet& jet) {
  const auto N = 2 * M.n();
  const auto m = static_cast<std::size_t>(jet.m);
  if (jet.m < 1 || jet.m > N || jet.d1.size() != m || jet.d2.size() != m)
    throw std::invalid_argument("immersion jet: inconsistent parameter dimension");
  for (std::size_t a = 0; a < m; ++a) {
    if (jet.d1[a].size() != N || jet.d2[a].size() != m)
      throw std::invalid_argument("immersion jet: derivative has wrong size");
    for (const auto& v : jet.d2[a])
      if (v.size() != N) throw std::invalid_argument("immersion jet: derivative has wrong size");
  }
}

Mat tangent_matrix(const ImmersionJet& jet) {
  Mat F(jet.d1.front().size(), jet.m);
  for (int a = 0; a < jet.m; ++a) F.col(a) = jet.d1[static_cast<std::size_t>(a)];
  return F;
}

}  // namespace

ImmersionResult immersion_geometry_at(const RiemannianChart& M, const ImmersionJet& jet) {
  check_jet(M, jet);
  M.require_inside(jet.point.x);
  const auto m = static_cast<std::size_t>(jet.m);
  const BaseGeometry geo = geometry_at(M, jet.point.x, 2);
  const BundleStructures st = structures_from(geo.g, connection_matrix(geo.gamma, jet.point.V));
  const Tensor3 gam = connection_G_coeffs(geo, jet.point.V);

  const Mat F = tangent_matrix(jet);
  const Mat GF = st.G * F;
  const Mat P = F.transpose() * GF;
  const double det = P.determinant();
  if (!(std::abs(det) > kDegenerateDet)) return DegeneratePullback{jet.point, det};

  SubmanifoldReport r;
  r.point = jet.point;
  r.pullback = P;
  r.pullback_det = det;
  const Eigen::PartialPivLU<Mat> lu(P);
  const Mat Pinv = lu.inverse();

  r.B.assign(m, std::vector<Vec>(m));
  r.H = Vec::Zero(F.rows());
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      const Vec nab = jet.d2[a][b] + christoffel_pair(gam, jet.d1[a], jet.d1[b]);
      // Tangential part: solve the Gram system P c = (G(∇f_ab, f_c))_c.
      const Vec c = lu.solve(GF.transpose() * nab);
      r.B[a][b] = nab - F * c;
      r.H += Pinv(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) * r.B[a][b];
      r.normality_residual = std::max(r.normality_residual, (GF.transpose() * r.B[a][b]).cwiseAbs().maxCoeff());
    }

  r.omega_pullback_max = max_abs(Mat(F.transpose() * st.Omega * F));
  r.maslov = GF.transpose() * (st.J1 * r.H);
  return r;
}

SubmanifoldReport immersion_report(const RiemannianChart& M, const ImmersionJet& jet) {
  auto res = immersion_geometry_at(M, jet);
  if (auto* d = std::get_if<DegeneratePullback>(&res))
    throw GeometryError("degenerate induced metric (det " + std::to_string(d->det) + ")", d->point.coords());
  return std::get<SubmanifoldReport>(std::move(res));
}

ImmersionJet immersion_jet(const std::vector<Expression>& phi, const Vec& q) {
  if (phi.empty() || phi.size() % 2 != 0) throw std::invalid_argument("immersion_jet: need 2n component expressions");
  const auto m = static_cast<std::size_t>(q.size());
  for (const auto& e : phi)
    if (e.arity() != m) throw std::invalid_argument("immersion_jet: component arity differs from parameter count");
  const auto N = static_cast<Eigen::Index>(phi.size());
  ImmersionJet jet;
  jet.m = static_cast<int>(m);
  jet.d1.assign(m, Vec::Zero(N));
  jet.d2.assign(m, std::vector<Vec>(m, Vec::Zero(N)));
  Vec y(N);
  for (Eigen::Index K = 0; K < N; ++K) {
    const Jet3 j = eval_jet3(phi[static_cast<std::size_t>(K)], q, 2);
    y[K] = j.value;
    for (std::size_t a = 0; a < m; ++a) {
      const auto ia = static_cast<Eigen::Index>(a);
      jet.d1[a][K] = j.grad[ia];
      for (std::size_t b = 0; b < m; ++b) jet.d2[a][b][K] = j.hess(ia, static_cast<Eigen::Index>(b));
    }
  }
  jet.point = BundlePoint::from_coords(y, static_cast<int>(N / 2));
  return jet;
}

ImmersionJet graph_jet(const std::vector<Expression>& V, const Vec& x) {
  const auto n = x.size();
  if (static_cast<Eigen::Index>(V.size()) != n) throw std::invalid_argument("graph_jet: need one expression per base coordinate");
  ImmersionJet jet;
  jet.m = static_cast<int>(n);
  jet.d1.assign(static_cast<std::size_t>(n), Vec::Zero(2 * n));
  jet.d2.assign(static_cast<std::size_t>(n), std::vector<Vec>(static_cast<std::size_t>(n), Vec::Zero(2 * n)));
  Vec Vx(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto& e = V[static_cast<std::size_t>(k)];
    if (static_cast<Eigen::Index>(e.arity()) != n) throw std::invalid_argument("graph_jet: field arity differs from base dimension");
    const Jet3 j = eval_jet3(e, x, 2);
    Vx[k] = j.value;
    for (Eigen::Index a = 0; a < n; ++a) {
      const auto sa = static_cast<std::size_t>(a);
      jet.d1[sa][n + k] = j.grad[a];
      for (Eigen::Index b = 0; b < n; ++b) jet.d2[sa][static_cast<std::size_t>(b)][n + k] = j.hess(a, b);
    }
  }
  for (Eigen::Index a = 0; a < n; ++a) jet.d1[static_cast<std::size_t>(a)][a] = 1.0;
  jet.point = BundlePoint{x, Vx};
  return jet;
}

double lagrangian_residual(const RiemannianChart& M, const ImmersionJet& jet) {
  check_jet(M, jet);
  const BaseGeometry geo = geometry_at(M, jet.point.x, 1);
  const BundleStructures st = structures_from(geo.g, connection_matrix(geo.gamma, jet.point.V));
  const Mat F = tangent_matrix(jet);
  return max_abs(Mat(F.transpose() * st.Omega * F));
}

MaslovCheck maslov_residuals(const RiemannianChart& M, const std::vector<Expression>& V, const Vec& p) {
  const ImmersionJet jet = graph_jet(V, p);
  const double lag = lagrangian_residual(M, jet);
  if (lag > 1e-8)
    throw std::invalid_argument("maslov_residuals: graph is not Lagrangian at " + format_point(p) +
                                " (|f*Omega| = " + std::to_string(lag) + ")");
  const SubmanifoldReport rep = immersion_report(M, jet);
  const auto n = p.size();

  MaslovCheck out;
  out.maslov = rep.maslov;
  auto eta = [&](const Vec& q) { return Vec(immersion_report(M, graph_jet(V, q)).maslov); };
  Mat deta_partial(n, n);  // (a,b) = ∂_a η_b
  for (Eigen::Index a = 0; a < n; ++a)
    deta_partial.row(a) = fd_partial<Vec>(eta, p, static_cast<int>(a), kMaslovFdStep).transpose();
  out.d_eta = deta_partial - deta_partial.transpose();

  const BaseGeometry geo = geometry_at(M, p, 3);
  const BundleStructures st = structures_from(geo.g, connection_matrix(geo.gamma, jet.point.V));
  const Mat ric = ricci_from_lower(riemann_G_closed_tensor(geo, jet.point.V), st.G_inv);
  const Mat F = tangent_matrix(jet);
  out.half_ric = 0.5 * (st.J1 * F).transpose() * ric * F;
  out.identity_residual = max_abs(Mat(out.d_eta - out.half_ric));
  return out;
}

}  // namespace tn
