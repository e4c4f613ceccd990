#include "tn/source_fields.hpp"

#include <random>
#include <sstream>

#include "tn/ode.hpp"

namespace tn {

namespace {

constexpr int kGuardGrid = 400;

void check_interval(int n, double r_lo, double r_hi) {
  if (n < 1) throw std::invalid_argument("intensity: dimension must be positive");
  if (!(r_lo >= 0.1) || !(r_hi > r_lo))
    throw std::invalid_argument("intensity: need 0.1 <= r_lo < r_hi (origin excluded)");
}

// Rejects profiles whose radicand, value or derivative misbehave on the interval.
void guard_profile(const IntensityProfile& P, const std::function<double(double)>& radicand) {
  int sign = 0;
  for (int i = 0; i <= kGuardGrid; ++i) {
    const double R = P.r_lo + (P.r_hi - P.r_lo) * i / kGuardGrid;
    if (radicand && !(radicand(R) > 0.0))
      throw std::invalid_argument("intensity " + P.label + ": radicand is non-positive at R = " + std::to_string(R));
    const auto d = P.derivatives(R);
    if (!std::isfinite(d[0]) || !std::isfinite(d[1]))
      throw std::invalid_argument("intensity " + P.label + ": H is not finite at R = " + std::to_string(R));
    const int s = d[1] > 1e-12 ? 1 : (d[1] < -1e-12 ? -1 : 0);
    if (s == 0 || (sign != 0 && s != sign))
      throw std::invalid_argument("intensity " + P.label + ": H is not strictly monotone on [" +
                                  std::to_string(P.r_lo) + ", " + std::to_string(P.r_hi) + "]");
    sign = s;
  }
}

std::string num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

std::string to_string(IntensityKind k) {
  switch (k) {
    case IntensityKind::Minimal:
      return "minimal";
    case IntensityKind::HMinimal:
      return "hminimal";
    case IntensityKind::Custom:
      return "custom";
  }
  return "custom";
}

double IntensityProfile::value(double R) const { return derivatives(R)[0]; }

std::array<double, 4> IntensityProfile::derivatives(double R) const {
  const D3 r = H(seed3(R, 1.0, 1.0, 1.0));
  return {r.v.v.v, r.v.v.d, r.v.d.d, r.d.d.d};
}

IntensityProfile intensity_minimal(int n, double c0, double c1, double r_lo, double r_hi) {
  check_interval(n, r_lo, r_hi);
  if (!(c0 > 0.0)) throw std::invalid_argument("intensity_minimal: c0 must be positive");
  IntensityProfile P;
  P.n = n;
  P.kind = IntensityKind::Minimal;
  P.constants = {c0, c1};
  P.label = "(" + num(c0) + "*R^" + std::to_string(n) + " + " + num(c1) + ")^(1/" + std::to_string(n) + ")";
  P.r_lo = r_lo;
  P.r_hi = r_hi;
  const double inv_n = 1.0 / n;
  P.H = [n, c0, c1, inv_n](const D3& R) { return pow(c0 * ipow(R, n) + c1, inv_n); };
  guard_profile(P, [n, c0, c1](double R) { return c0 * std::pow(R, n) + c1; });
  return P;
}

IntensityProfile intensity_hminimal(int n, double c0, double c1, double c2, double r_lo, double r_hi) {
  check_interval(n, r_lo, r_hi);
  if (c0 == 0.0) throw std::invalid_argument("intensity_hminimal: c0 must be nonzero");
  // a_k = k!(−1)^k/c0^k C(n−1,k) multiplies R^{n−1−k}.
  std::vector<double> a(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    double binom = 1.0, fact = 1.0;
    for (int i = 1; i <= k; ++i) {
      binom = binom * (n - 1 - k + i) / i;
      fact *= i;
    }
    a[static_cast<std::size_t>(k)] = fact * (k % 2 ? -1.0 : 1.0) / std::pow(c0, k) * binom;
  }
  IntensityProfile P;
  P.n = n;
  P.kind = IntensityKind::HMinimal;
  P.constants = {c0, c1, c2};
  P.label = "hminimal(n=" + std::to_string(n) + ", c0=" + num(c0) + ", c1=" + num(c1) + ", c2=" + num(c2) + ")";
  P.r_lo = r_lo;
  P.r_hi = r_hi;
  auto radicand = [n, c0, c1, c2, a](const auto& R) {
    using T = std::decay_t<decltype(R)>;
    T sum(0.0);
    for (int k = 0; k < n; ++k) sum = sum + a[static_cast<std::size_t>(k)] * ipow(R, n - 1 - k);
    using std::exp;
    return c2 + c1 * exp(c0 * R) * sum;
  };
  const double inv_n = 1.0 / n;
  P.H = [radicand, inv_n](const D3& R) { return pow(radicand(R), inv_n); };
  guard_profile(P, [radicand](double R) { return radicand(R); });
  return P;
}

IntensityProfile intensity_custom(int n, const std::string& H, double r_lo, double r_hi) {
  check_interval(n, r_lo, r_hi);
  const Expression e = Expression::parse(H, {"R"});
  IntensityProfile P;
  P.n = n;
  P.kind = IntensityKind::Custom;
  P.label = e.to_string();
  P.r_lo = r_lo;
  P.r_hi = r_hi;
  P.H = [e](const D3& R) { return e.evaluate<D3>(std::span<const D3>(&R, 1)); };
  guard_profile(P, nullptr);
  return P;
}

PotentialGraph source_potential(const IntensityProfile& P) {
  PotentialGraph G;
  G.n = P.n;
  G.label = "source[" + P.label + "]";
  const double w = P.r_hi + 1.0;
  G.domain = DomainBox{std::vector<double>(static_cast<std::size_t>(P.n), -w),
                       std::vector<double>(static_cast<std::size_t>(P.n), w)};
  G.gradient = [H = P.H](std::span<const D3> x) {
    D3 r2(0.0);
    for (const D3& xi : x) r2 = r2 + xi * xi;
    const D3 R = sqrt(r2);
    const D3 h = H(R) / R;
    std::vector<D3> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = h * x[i];
    return out;
  };
  return G;
}

std::vector<Vec> sample_shell(const IntensityProfile& P, int samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("sample count must be at least 1");
  const auto radii = sample_box(DomainBox{{P.r_lo}, {P.r_hi}}.inner(), samples, seed);
  std::mt19937_64 rng(seed + 5);
  std::normal_distribution<double> N01;
  std::vector<Vec> out;
  out.reserve(static_cast<std::size_t>(samples));
  for (const auto& r : radii) {
    Vec d(P.n);
    do {
      for (int i = 0; i < P.n; ++i) d[i] = N01(rng);
    } while (d.norm() < 1e-3);
    out.push_back(r[0] * d.normalized());
  }
  return out;
}

double source_det_formula(const IntensityProfile& P, double R) {
  const auto d = P.derivatives(R);
  return std::pow(d[0] / R, P.n - 1) * d[1];
}

double hminimal_k(const IntensityProfile& P) {
  if (P.kind != IntensityKind::HMinimal) throw std::invalid_argument("hminimal_k: profile is not hminimal");
  return P.constants[0] * P.constants[1] / P.n;
}

double hminimal_phi_log_residual(const IntensityProfile& P, int grid) {
  if (P.kind != IntensityKind::HMinimal) throw std::invalid_argument("phi residual: profile is not hminimal");
  const double c0 = P.constants[0];
  double worst = 0.0;
  for (int i = 0; i <= grid; ++i) {
    const double R = P.r_lo + (P.r_hi - P.r_lo) * i / grid;
    const auto d = P.derivatives(R);
    // Φ′/Φ for Φ = (H/R)^{n−1} H′.
    const double log_deriv = (P.n - 1) * (d[1] / d[0] - 1.0 / R) + d[2] / d[1];
    worst = std::max(worst, std::abs(log_deriv - c0));
  }
  return worst;
}

double hminimal_ode_gap(const IntensityProfile& P, double R, int steps) {
  const double c0 = P.constants.at(0), k = hminimal_k(P);
  const int n = P.n;
  auto rhs = [&](double r, const Vec&) {
    Vec d(1);
    d[0] = n * k * std::exp(c0 * r) * std::pow(r, n - 1);
    return d;
  };
  Vec y(1);
  y[0] = std::pow(P.value(P.r_lo), n);
  const double h = (R - P.r_lo) / steps;
  double r = P.r_lo;
  for (int s = 0; s < steps; ++s, r += h) y = rk4_step(rhs, r, y, h);
  return std::abs(std::pow(y[0], 1.0 / n) - P.value(R));
}

SourceReport source_graph_report(const IntensityProfile& P, int samples, std::uint64_t seed) {
  const PotentialGraph G = source_potential(P);
  const auto pts = sample_shell(P, samples, seed);
  SourceReport rep;
  rep.profile = P;
  rep.classify = classify_points(G, pts);
  const int n = P.n;
  for (const auto& x : pts) {
    const double R = x.norm();
    const auto d = P.derivatives(R);
    const PotentialJet j = potential_jet(G, x);
    const double det = j.hess.determinant();
    rep.det_formula_residual = std::max(rep.det_formula_residual, std::abs(det - source_det_formula(P, R)));

    const double h = d[0] / R, hp = (d[1] - h) / R;
    const Mat minusA = -x * x.transpose();
    const Vec lam = Eigen::SelfAdjointEigenSolver<Mat>(minusA).eigenvalues();
    double eig_det = 1.0;
    for (int i = 0; i < n; ++i) eig_det *= h - (hp / R) * lam[i];
    rep.eigen_det_residual = std::max(rep.eigen_det_residual, std::abs(det - eig_det));

    const double ell = d[1] / d[0] - 1.0 / R;  // d/dR log(H/R)
    Mat closed(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        closed(a, b) = a == b ? (1.0 + (R * R - x[a] * x[a]) / R * ell) / (2.0 * d[1])
                              : -x[a] * x[b] / (2.0 * R * d[1]) * ell;
    rep.inverse_metric_residual =
        std::max(rep.inverse_metric_residual, max_abs(Mat(closed - (2.0 * j.hess).inverse())));
  }
  if (P.kind == IntensityKind::HMinimal) {
    rep.constant_k = hminimal_k(P);
    rep.phi_log_residual = hminimal_phi_log_residual(P);
  }
  return rep;
}

}  // namespace tn
