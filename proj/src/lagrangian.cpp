#include "tn/lagrangian.hpp"

#include <Eigen/LU>
#include <sstream>

namespace tn {

namespace {

constexpr double kDegenerateHessian = 1e-10;

// All partials up to third order of each output of f, by seeding every
// index triple i ≤ j ≤ k once.
struct VectorJet3 {
  Mat d1;          // (c,i)
  Tensor3 d2;      // (c,i,j)
  Tensor4 d3;      // (c,i,j,k)
  Vec value;
};

VectorJet3 vector_jet3(const GradientFn& f, const Vec& x) {
  const auto n = x.size();
  VectorJet3 J;
  J.d1 = Mat::Zero(n, n);
  J.d2 = zeros3(n, n, n);
  J.d3 = zeros4(n, n, n, n);
  J.value = Vec::Zero(n);
  std::vector<D3> xs(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j)
      for (Eigen::Index k = j; k < n; ++k) {
        for (Eigen::Index m = 0; m < n; ++m)
          xs[static_cast<std::size_t>(m)] = seed3(x[m], m == i ? 1.0 : 0.0, m == j ? 1.0 : 0.0, m == k ? 1.0 : 0.0);
        const std::vector<D3> r = f(std::span<const D3>(xs));
        if (static_cast<Eigen::Index>(r.size()) != n)
          throw std::invalid_argument("potential gradient returned the wrong number of components");
        for (Eigen::Index c = 0; c < n; ++c) {
          const D3& y = r[static_cast<std::size_t>(c)];
          J.value[c] = y.v.v.v;
          J.d1(c, i) = y.v.v.d;
          J.d1(c, j) = y.v.d.v;
          J.d1(c, k) = y.d.v.v;
          const std::array<std::array<Eigen::Index, 2>, 3> pairs{{{i, j}, {i, k}, {j, k}}};
          const std::array<double, 3> second{y.v.d.d, y.d.v.d, y.d.d.v};
          for (int p = 0; p < 3; ++p) {
            J.d2(c, pairs[p][0], pairs[p][1]) = second[p];
            J.d2(c, pairs[p][1], pairs[p][0]) = second[p];
          }
          const std::array<Eigen::Index, 3> idx{i, j, k};
          std::array<int, 3> perm{0, 1, 2};
          do {
            J.d3(c, idx[perm[0]], idx[perm[1]], idx[perm[2]]) = y.d.d.d;
          } while (std::next_permutation(perm.begin(), perm.end()));
        }
      }
  return J;
}

void require_nondegenerate(const Mat& hess, const Vec& x) {
  const double det = hess.determinant();
  if (!(std::abs(det) > kDegenerateHessian)) {
    std::ostringstream os;
    os << "degenerate Hessian (det " << det << ")";
    throw GeometryError(os.str(), x);
  }
}

}  // namespace

PotentialGraph potential_from_expression(const Expression& u, DomainBox domain) {
  const int n = static_cast<int>(u.arity());
  if (n < 1) throw std::invalid_argument("potential: expression has no variables");
  if (domain.dim() != n) throw std::invalid_argument("potential: domain dimension differs from variable count");
  PotentialGraph P;
  P.n = n;
  P.label = u.to_string();
  P.domain = std::move(domain);
  P.gradient = [u](std::span<const D3> x) { return gradient_at<D3>(u, x); };
  return P;
}

PotentialGraph potential_from_text(const std::string& u, int n, DomainBox domain) {
  return potential_from_expression(Expression::parse(u, default_variables(n)), std::move(domain));
}

DomainBox default_potential_box(int n) {
  return DomainBox{std::vector<double>(static_cast<std::size_t>(n), -1.0),
                   std::vector<double>(static_cast<std::size_t>(n), 1.0)};
}

PotentialGraph perturbed(const PotentialGraph& P, const Expression& extra) {
  if (static_cast<int>(extra.arity()) != P.n) throw std::invalid_argument("perturbed: arity differs from dimension");
  PotentialGraph Q = P;
  Q.label = P.label + " + " + extra.to_string();
  Q.gradient = [base = P.gradient, extra](std::span<const D3> x) {
    std::vector<D3> g = base(x);
    const std::vector<D3> e = gradient_at<D3>(extra, x);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += e[i];
    return g;
  };
  return Q;
}

PotentialJet potential_jet(const PotentialGraph& P, const Vec& x) {
  if (x.size() != P.n) throw std::invalid_argument("potential_jet: point has wrong dimension");
  if (!P.domain.contains(x)) throw GeometryError("point outside potential domain " + P.domain.describe(), x);
  const VectorJet3 J = vector_jet3(P.gradient, x);
  PotentialJet out{x, J.value, 0.5 * (J.d1 + J.d1.transpose()), J.d2, J.d3};
  return out;
}

ImmersionJet potential_immersion_jet(const PotentialJet& j) {
  const auto n = j.x.size();
  ImmersionJet jet;
  jet.m = static_cast<int>(n);
  jet.point = BundlePoint{j.x, j.grad};
  jet.d1.assign(static_cast<std::size_t>(n), Vec::Zero(2 * n));
  jet.d2.assign(static_cast<std::size_t>(n), std::vector<Vec>(static_cast<std::size_t>(n), Vec::Zero(2 * n)));
  for (Eigen::Index a = 0; a < n; ++a) {
    const auto sa = static_cast<std::size_t>(a);
    jet.d1[sa][a] = 1.0;
    jet.d1[sa].tail(n) = j.hess.col(a);
    for (Eigen::Index b = 0; b < n; ++b)
      for (Eigen::Index c = 0; c < n; ++c) jet.d2[sa][static_cast<std::size_t>(b)][n + c] = j.third(a, b, c);
  }
  return jet;
}

GraphReport graph_geometry_at(const PotentialGraph& P, const Vec& x) {
  const PotentialJet j = potential_jet(P, x);
  require_nondegenerate(j.hess, x);
  const auto n = x.size();
  const Mat W = j.hess.inverse();  // U⁻¹
  const Mat ginv = 0.5 * W;

  GraphReport r;
  r.x = x;
  r.induced = 2.0 * j.hess;
  r.detHess = j.hess.determinant();

  // L = log|det U|: ∂_l L = W^{ab} u_abl.
  Vec dL = Vec::Zero(n);
  for (Eigen::Index l = 0; l < n; ++l)
    for (Eigen::Index a = 0; a < n; ++a)
      for (Eigen::Index b = 0; b < n; ++b) dL[l] += W(a, b) * j.third(a, b, l);
  r.grad_log_det = dL;

  // B(f_i,f_j) = (−g^{kl} u_ijl ∂_{x_k}, ½ u_ijm ∂_{v_m}).
  r.B.assign(static_cast<std::size_t>(n), std::vector<Vec>(static_cast<std::size_t>(n), Vec::Zero(2 * n)));
  r.H = Vec::Zero(2 * n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index jj = 0; jj < n; ++jj) {
      Vec third_ij(n);
      for (Eigen::Index l = 0; l < n; ++l) third_ij[l] = j.third(i, jj, l);
      Vec& b = r.B[static_cast<std::size_t>(i)][static_cast<std::size_t>(jj)];
      b.head(n) = -ginv * third_ij;
      b.tail(n) = 0.5 * third_ij;
      r.H += ginv(i, jj) * b;
      r.totally_geodesic_residual = std::max(r.totally_geodesic_residual, third_ij.cwiseAbs().maxCoeff());
    }

  // J₁ on Tℝⁿ is diag(I,−I); J₁H lies in the tangent space, solve for its frame coefficients.
  const BundleStructures st = structures_from(Mat::Identity(n, n), Mat::Zero(n, n));
  const ImmersionJet ij = potential_immersion_jet(j);
  Mat F(2 * n, n);
  for (Eigen::Index a = 0; a < n; ++a) F.col(a) = ij.d1[static_cast<std::size_t>(a)];
  r.JH_tangential = (F.transpose() * F).ldlt().solve(F.transpose() * (st.J1 * r.H));
  r.jh_gradient_residual = (r.JH_tangential - ginv * (-0.5 * dL)).cwiseAbs().maxCoeff();
  r.minimal_residual = dL.cwiseAbs().maxCoeff();

  // Δ_g L = g^{ij}∂_i∂_j L + (∂_i g^{ij}) ∂_j L + ½ g^{ij} ∂_i L ∂_j L, using log√|det g| = ½L + const.
  Mat d2L = Mat::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index jj = 0; jj < n; ++jj) {
      double s = 0.0;
      for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = 0; b < n; ++b) {
          s += W(a, b) * j.fourth(a, b, i, jj);
          for (Eigen::Index c = 0; c < n; ++c)
            for (Eigen::Index d = 0; d < n; ++d) s -= W(a, c) * j.third(c, d, i) * W(d, b) * j.third(a, b, jj);
        }
      d2L(i, jj) = s;
    }
  Vec div_ginv = Vec::Zero(n);  // ∂_i g^{ij}
  for (Eigen::Index jj = 0; jj < n; ++jj)
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = 0; b < n; ++b) div_ginv[jj] -= 0.5 * W(i, a) * j.third(a, b, i) * W(b, jj);
  const double lap = (ginv.array() * d2L.array()).sum() + div_ginv.dot(dL) + 0.5 * dL.dot(ginv * dL);
  r.hminimal_residual = std::abs(lap);
  return r;
}

std::vector<Vec> sample_potential(const PotentialGraph& P, int samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("sample count must be at least 1");
  return sample_box(P.domain.inner(), samples, seed);
}

ClassifyReport classify_points(const PotentialGraph& P, const std::vector<Vec>& points) {
  if (points.empty()) throw std::invalid_argument("classify: no sample points");
  std::vector<GraphReport> reps(points.size());
  parallel_for(static_cast<int>(points.size()), [&](int i) {
    const auto k = static_cast<std::size_t>(i);
    reps[k] = graph_geometry_at(P, points[k]);
  });
  ClassifyReport c;
  c.samples = static_cast<int>(points.size());
  for (const auto& r : reps) c.fitted_c0 += r.detHess;
  c.fitted_c0 /= static_cast<double>(reps.size());
  for (const auto& r : reps) {
    c.minimal_residual_stat = std::max(c.minimal_residual_stat, std::abs(r.detHess - c.fitted_c0));
    c.hminimal_residual_stat = std::max(c.hminimal_residual_stat, r.hminimal_residual);
    c.totally_geodesic_residual_stat = std::max(c.totally_geodesic_residual_stat, r.totally_geodesic_residual);
    c.max_mean_curvature = std::max(c.max_mean_curvature, r.H.norm());
  }
  return c;
}

ClassifyReport classify(const PotentialGraph& P, int samples, std::uint64_t seed) {
  return classify_points(P, sample_potential(P, samples, seed));
}

RiemannianChart induced_chart(const PotentialGraph& P) {
  const PotentialGraph copy = P;
  MetricJetSource src = [copy](const Vec& x, int order) {
    const PotentialJet j = potential_jet(copy, x);
    MetricJet J;
    J.order = order;
    J.g = 2.0 * j.hess;
    J.dg = 2.0 * j.third;
    J.d2g = 2.0 * j.fourth;
    return J;
  };
  return RiemannianChart("induced(" + P.label + ")", P.n, P.domain, std::move(src), 2, false);
}

double gauss_flatness_check(const PotentialGraph& P, int samples, std::uint64_t seed) {
  const RiemannianChart M = induced_chart(P);
  const auto pts = sample_potential(P, samples, seed);
  std::vector<double> worst(pts.size(), 0.0);
  parallel_for(static_cast<int>(pts.size()), [&](int i) {
    const auto k = static_cast<std::size_t>(i);
    require_nondegenerate(potential_jet(P, pts[k]).hess, pts[k]);
    worst[k] = max_abs(geometry_at(M, pts[k], 2).riemann_lower);
  });
  return *std::max_element(worst.begin(), worst.end());
}

}  // namespace tn
