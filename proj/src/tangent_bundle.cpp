#include "tn/tangent_bundle.hpp"

#include "tn/ode.hpp"

namespace tn {

Vec BundlePoint::coords() const {
  Vec y(x.size() + V.size());
  y << x, V;
  return y;
}

BundlePoint BundlePoint::from_coords(const Vec& y, int n) { return {y.head(n), y.tail(n)}; }

Vec BundleVector::coords() const {
  Vec y(xdot.size() + vdot.size());
  y << xdot, vdot;
  return y;
}

Mat connection_matrix(const Tensor3& gamma, const Vec& V) {
  const auto n = gamma.dimension(0);
  Mat C = Mat::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) C(k, i) += gamma(k, i, j) * V[j];
  return C;
}

namespace {

void require_fiber(const RiemannianChart& M, const BundlePoint& p) {
  M.require_inside(p.x);
  if (p.V.size() != M.n()) throw std::invalid_argument("bundle point: fiber vector has wrong dimension");
}

Mat base_connection(const RiemannianChart& M, const BundlePoint& p) {
  require_fiber(M, p);
  return connection_matrix(geometry_at(M, p.x, 1).gamma, p.V);
}

}  // namespace

Split split_vector(const RiemannianChart& M, const BundleVector& v) {
  const Mat C = base_connection(M, v.base);
  return {v.xdot, v.vdot + C * v.xdot};
}

BundleVector lift(const RiemannianChart& M, const BundlePoint& p, const Vec& X, LiftKind kind) {
  const int n = M.n();
  if (X.size() != n) throw std::invalid_argument("lift: vector has wrong dimension");
  if (kind == LiftKind::Vertical) {
    require_fiber(M, p);
    return {p, Vec::Zero(n), X};
  }
  const Mat C = base_connection(M, p);
  return {p, X, -C * X};
}

Mat split_matrix(const Mat& C) {
  const auto n = C.rows();
  Mat S = Mat::Identity(2 * n, 2 * n);
  S.bottomLeftCorner(n, n) = C;
  return S;
}

Mat split_matrix_inverse(const Mat& C) {
  const auto n = C.rows();
  Mat S = Mat::Identity(2 * n, 2 * n);
  S.bottomLeftCorner(n, n) = -C;
  return S;
}

Mat neutral_metric(const Mat& g, const Mat& C) {
  const auto n = g.rows();
  const Mat A = g * C;
  Mat G = Mat::Zero(2 * n, 2 * n);
  G.topLeftCorner(n, n) = A + A.transpose();
  G.topRightCorner(n, n) = g;
  G.bottomLeftCorner(n, n) = g;
  return G;
}

Mat neutral_metric_inverse(const Mat& g, const Mat& C) {
  const auto n = g.rows();
  const Mat gi = g.inverse();
  const Mat A = g * C;
  Mat Gi = Mat::Zero(2 * n, 2 * n);
  Gi.topRightCorner(n, n) = gi;
  Gi.bottomLeftCorner(n, n) = gi;
  Gi.bottomRightCorner(n, n) = -gi * (A + A.transpose()) * gi;
  return Gi;
}

BundleStructures structures_from(const Mat& g, const Mat& C) {
  const auto n = g.rows();
  const Mat I = Mat::Identity(n, n);
  const Mat Z = Mat::Zero(n, n);
  const Mat S = split_matrix(C);
  const Mat Si = split_matrix_inverse(C);
  auto block = [&](const Mat& a, const Mat& b, const Mat& c, const Mat& d) {
    Mat m(2 * n, 2 * n);
    m << a, b, c, d;
    return m;
  };
  BundleStructures s;
  s.G = neutral_metric(g, C);
  s.G_inv = neutral_metric_inverse(g, C);
  const Mat A = g * C;
  s.Omega = block(A.transpose() - A, -g, g, Z);
  // Split-frame forms: J0 (Π,K) ↦ (K,Π), J1 ↦ (Π,−K), J2 ↦ (−K,Π).
  s.J0 = Si * block(Z, I, I, Z) * S;
  s.J1 = Si * block(I, Z, Z, -I) * S;
  s.J2 = Si * block(Z, -I, I, Z) * S;
  s.G0 = S.transpose() * block(-g, Z, Z, g) * S;
  s.G2 = -(S.transpose() * block(g, Z, Z, g) * S);
  return s;
}

BundleStructures structures_at(const RiemannianChart& M, const BundlePoint& p) {
  require_fiber(M, p);
  const BaseGeometry geo = geometry_at(M, p.x, 1);
  return structures_from(geo.g, connection_matrix(geo.gamma, p.V));
}

double neutral_pairing(const RiemannianChart& M, const BundleVector& X, const BundleVector& Y) {
  const Split a = split_vector(M, X);
  const Split b = split_vector(M, Y);
  const Mat g = M.metric(X.base.x);
  return a.Pi.dot(g * b.K) + a.K.dot(g * b.Pi);
}

Tensor3 connection_G_coeffs(const BaseGeometry& geo, const Vec& V) {
  if (geo.order < 2) throw std::invalid_argument("connection_G_coeffs: geometry lacks curvature");
  const auto n = geo.g.rows();
  const auto N = 2 * n;
  const Tensor3& gam = geo.gamma;
  Tensor3 out = zeros3(N, N, N);
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index a = 0; a < n; ++a)
      for (Eigen::Index b = 0; b < n; ++b) {
        out(k, a, b) = gam(k, a, b);
        out(n + k, a, n + b) = gam(k, a, b);
        out(n + k, n + b, a) = gam(k, a, b);
        double s = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
          double t = geo.dgamma(k, b, j, a) + geo.riemann_mixed(k, j, a, b);
          for (Eigen::Index m = 0; m < n; ++m) t += gam(k, a, m) * gam(m, b, j) - gam(k, m, j) * gam(m, a, b);
          s += V[j] * t;
        }
        out(n + k, a, b) = s;
      }
  return out;
}

Tensor3 connection_G_coeffs(const RiemannianChart& M, const BundlePoint& p) {
  require_fiber(M, p);
  return connection_G_coeffs(geometry_at(M, p.x, 2), p.V);
}

MetricField neutral_metric_field(const RiemannianChart& M) {
  return [M](const Vec& y) {
    const BundlePoint p = BundlePoint::from_coords(y, M.n());
    const BaseGeometry geo = geometry_at(M, p.x, 1);
    return neutral_metric(geo.g, connection_matrix(geo.gamma, p.V));
  };
}

std::vector<BundlePoint> sample_bundle(const RiemannianChart& M, int count, std::uint64_t seed) {
  const auto xs = sample_chart(M, count, seed);
  const auto vs = sample_uniform(M.n(), count, -2.0, 2.0, seed + 1);
  std::vector<BundlePoint> out;
  for (int i = 0; i < count; ++i) out.push_back({xs[static_cast<std::size_t>(i)], vs[static_cast<std::size_t>(i)]});
  return out;
}

NullLiftScan null_lift_scan(const RiemannianChart& M, const std::vector<Expression>& W, const Vec& p0, double T,
                            int steps) {
  const int n = M.n();
  if (static_cast<int>(W.size()) != n) throw std::invalid_argument("null_lift_scan: field has wrong dimension");
  for (const auto& w : W)
    if (static_cast<int>(w.arity()) != n) throw std::invalid_argument("null_lift_scan: field over wrong variables");
  if (steps < 1 || !(T > 0.0)) throw std::invalid_argument("null_lift_scan: need T > 0 and steps >= 1");
  M.require_inside(p0);

  auto field = [&](const Vec& x, Mat* jac) {
    Vec w(n);
    if (jac) jac->resize(n, n);
    for (int i = 0; i < n; ++i) {
      const Jet3 j = eval_jet3(W[static_cast<std::size_t>(i)], x, jac ? 1 : 0);
      w[i] = j.value;
      if (jac) jac->row(i) = j.grad.transpose();
    }
    return w;
  };
  auto sample = [&](double t, const Vec& x) {
    const BaseGeometry geo = geometry_at(M, x, 1);
    const MetricJet J = M.jet(x, 1);
    Mat DW;
    const Vec w = field(x, &DW);
    const Vec wdot = DW * w;
    Vec fprime(2 * n);
    fprime << w, wdot;
    const Mat G = neutral_metric(geo.g, connection_matrix(geo.gamma, w));
    double dn = 2.0 * w.dot(geo.g * wdot);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) dn += J.dg(i, j, k) * w[k] * w[i] * w[j];
    return NullLiftSample{t, x, fprime.dot(G * fprime), dn};
  };

  NullLiftScan scan;
  const double h = T / steps;
  Vec x = p0;
  scan.samples.push_back(sample(0.0, x));
  auto rhs = [&](double, const Vec& y) {
    M.require_inside(y);
    return field(y, nullptr);
  };
  for (int s = 1; s <= steps; ++s) {
    Vec next;
    try {
      next = rk4_step(rhs, (s - 1) * h, x, h);
      M.require_inside(next);
    } catch (const GeometryError&) {
      scan.exited = true;
      scan.exit_time = (s - 1) * h;
      return scan;
    }
    x = next;
    scan.samples.push_back(sample(s * h, x));
  }
  return scan;
}

}  // namespace tn
