#include "tn/geodesics.hpp"

#include "tn/ode.hpp"

namespace tn {

namespace {

Vec gamma_contract(const Tensor3& gam, const Vec& a, const Vec& b) {
  const auto n = a.size();
  Vec out = Vec::Zero(n);
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) out[k] += gam(k, i, j) * a[i] * b[j];
  return out;
}

// R(V,X)X with R^l_ijk V^i X^j X^k.
Vec jacobi_curvature(const Tensor4& R, const Vec& V, const Vec& X) {
  const auto n = V.size();
  Vec out = Vec::Zero(n);
  for (Eigen::Index l = 0; l < n; ++l)
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index k = 0; k < n; ++k) out[l] += R(l, i, j, k) * V[i] * X[j] * X[k];
  return out;
}

void check_inputs(const RiemannianChart& M, const BundlePoint& p0, const BundleVector& v0, double T, int steps) {
  M.require_inside(p0.x);
  const int n = M.n();
  if (p0.V.size() != n || v0.xdot.size() != n || v0.vdot.size() != n)
    throw std::invalid_argument("geodesic: initial data has wrong dimension");
  if (steps < 1 || !(T > 0.0)) throw std::invalid_argument("geodesic: need T > 0 and steps >= 1");
}

template <class Rhs, class Emit>
BundlePath run(const RiemannianChart& M, Vec state, double T, int steps, const Rhs& rhs, const Emit& emit) {
  BundlePath path;
  const double h = T / steps;
  auto push = [&](double t, const Vec& s) {
    path.times.push_back(t);
    auto [p, v] = emit(s, rhs(t, s));
    path.points.push_back(p);
    path.velocities.push_back(v);
  };
  push(0.0, state);
  for (int s = 1; s <= steps; ++s) {
    try {
      Vec next = rk4_step(rhs, (s - 1) * h, state, h);
      M.require_inside(next.head(M.n()));
      state = std::move(next);
      push(s * h, state);
    } catch (const GeometryError&) {
      path.truncated = true;
      break;
    }
  }
  return path;
}

}  // namespace

BundlePath integrate_split(const RiemannianChart& M, const BundlePoint& p0, const BundleVector& v0, double T,
                           int steps) {
  check_inputs(M, p0, v0, T, steps);
  const int n = M.n();
  const BaseGeometry g0 = geometry_at(M, p0.x, 1);
  Vec state(4 * n);
  state << p0.x, v0.xdot, p0.V, v0.vdot + gamma_contract(g0.gamma, v0.xdot, p0.V);

  auto rhs = [&](double, const Vec& s) {
    const Vec x = s.segment(0, n), xd = s.segment(n, n), V = s.segment(2 * n, n), W = s.segment(3 * n, n);
    const BaseGeometry geo = geometry_at(M, x, 2);
    Vec d(4 * n);
    d << xd, -gamma_contract(geo.gamma, xd, xd), W - gamma_contract(geo.gamma, xd, V),
        -jacobi_curvature(geo.riemann_mixed, V, xd) - gamma_contract(geo.gamma, xd, W);
    return d;
  };
  auto emit = [&](const Vec& s, const Vec& d) {
    BundlePoint p{s.segment(0, n), s.segment(2 * n, n)};
    return std::pair{p, BundleVector{p, s.segment(n, n), d.segment(2 * n, n)}};
  };
  return run(M, state, T, steps, rhs, emit);
}

BundlePath integrate_direct(const RiemannianChart& M, const BundlePoint& p0, const BundleVector& v0, double T,
                            int steps) {
  check_inputs(M, p0, v0, T, steps);
  const int n = M.n();
  const int N = 2 * n;
  const MetricField field = neutral_metric_field(M);
  Vec state(2 * N);
  state << p0.x, p0.V, v0.xdot, v0.vdot;

  auto rhs = [&](double, const Vec& s) {
    const Vec y = s.head(N), u = s.tail(N);
    M.require_inside(y.head(n));
    const Tensor3 gam = fd_christoffel(field, y, kBundleFdStep);
    Vec d(2 * N);
    d << u, -gamma_contract(gam, u, u);
    return d;
  };
  auto emit = [&](const Vec& s, const Vec&) {
    BundlePoint p{s.segment(0, n), s.segment(n, n)};
    return std::pair{p, BundleVector{p, s.segment(N, n), s.segment(N + n, n)}};
  };
  return run(M, state, T, steps, rhs, emit);
}

double path_gap(const BundlePath& a, const BundlePath& b) {
  const BundlePath& coarse = a.times.size() <= b.times.size() ? a : b;
  const BundlePath& fine = a.times.size() <= b.times.size() ? b : a;
  if (coarse.times.size() < 2) throw std::invalid_argument("path_gap: path too short");
  const std::size_t cs = coarse.times.size() - 1, fs = fine.times.size() - 1;
  if (coarse.truncated || fine.truncated || fs % cs != 0)
    throw std::invalid_argument("path_gap: paths are not on nested complete grids");
  const std::size_t stride = fs / cs;
  double gap = 0.0;
  for (std::size_t i = 0; i <= cs; ++i)
    gap = std::max(gap, (coarse.points[i].coords() - fine.points[i * stride].coords()).cwiseAbs().maxCoeff());
  return gap;
}

double compare_geodesics(const RiemannianChart& M, const BundlePoint& p0, const BundleVector& v0, double T,
                         int steps) {
  return path_gap(integrate_split(M, p0, v0, T, steps), integrate_direct(M, p0, v0, T, steps));
}

double energy_drift(const RiemannianChart& M, const BundlePath& path) {
  auto energy = [&](const BundleVector& v) {
    const Vec c = v.coords();
    return c.dot(structures_at(M, v.base).G * c);
  };
  const double e0 = energy(path.velocities.front());
  const double scale = std::max(1.0, std::abs(e0));
  double drift = 0.0;
  for (const auto& v : path.velocities) drift = std::max(drift, std::abs(energy(v) - e0) / scale);
  return drift;
}

double convergence_ratio(const RiemannianChart& M, const BundlePoint& p0, const BundleVector& v0, double T,
                         int coarse_steps) {
  const BundlePath ref = integrate_split(M, p0, v0, T, 16 * coarse_steps);
  const double e1 = path_gap(integrate_split(M, p0, v0, T, coarse_steps), ref);
  const double e2 = path_gap(integrate_split(M, p0, v0, T, 2 * coarse_steps), ref);
  return e1 / e2;
}

std::vector<InitialData> sample_initial_data(const RiemannianChart& M, int count, double T, std::uint64_t seed) {
  const int n = M.n();
  const int pool = 8 * count;
  const auto pts = sample_bundle(M, pool, seed);
  const auto xd = sample_uniform(n, pool, -0.2, 0.2, seed + 2);
  const auto vd = sample_uniform(n, pool, -1.0, 1.0, seed + 3);
  std::vector<InitialData> out;
  for (int i = 0; i < pool && static_cast<int>(out.size()) < count; ++i) {
    const auto k = static_cast<std::size_t>(i);
    InitialData d{pts[k], BundleVector{pts[k], xd[k], vd[k]}};
    if (!integrate_split(M, d.p, d.v, T, 50).truncated) out.push_back(std::move(d));
  }
  if (static_cast<int>(out.size()) < count)
    throw std::runtime_error("sample_initial_data: too few trajectories stay inside chart '" + M.name() + "'");
  return out;
}

PathResiduals path_residuals(const RiemannianChart& M, const BundlePath& path) {
  const std::size_t m = path.times.size();
  if (m < 9) throw std::invalid_argument("path_residuals: path too short");
  const double h = path.times[1] - path.times[0];
  auto d1 = [&](const std::vector<Vec>& f, std::size_t i) {
    return Vec((f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h));
  };
  auto d2 = [&](const std::vector<Vec>& f, std::size_t i) {
    return Vec((-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2]) / (12.0 * h * h));
  };
  std::vector<Vec> xs, Vs;
  for (const auto& p : path.points) {
    xs.push_back(p.x);
    Vs.push_back(p.V);
  }
  std::vector<BaseGeometry> geo;
  for (const auto& x : xs) geo.push_back(geometry_at(M, x, 2));

  PathResiduals r;
  // W = D_{x'}V on the interior, then its own covariant derivative.
  std::vector<Vec> W(m, Vec::Zero(M.n()));
  for (std::size_t i = 2; i + 2 < m; ++i) {
    const Vec xd = d1(xs, i);
    W[i] = d1(Vs, i) + gamma_contract(geo[i].gamma, xd, Vs[i]);
    r.base_geodesic = std::max(r.base_geodesic, (d2(xs, i) + gamma_contract(geo[i].gamma, xd, xd)).cwiseAbs().maxCoeff());
  }
  for (std::size_t i = 4; i + 4 < m; ++i) {
    const Vec xd = d1(xs, i);
    const Vec DW = d1(W, i) + gamma_contract(geo[i].gamma, xd, W[i]);
    r.jacobi = std::max(r.jacobi, (DW + jacobi_curvature(geo[i].riemann_mixed, Vs[i], xd)).cwiseAbs().maxCoeff());
  }
  return r;
}

}  // namespace tn
