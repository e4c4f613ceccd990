#include "tn/line_space.hpp"

#include <random>
#include <stdexcept>

namespace tn {

namespace {

constexpr double kConstraintTol = 1e-9;

template <class T>
using V3 = std::array<T, 3>;

template <class T>
V3<T> cross(const V3<T>& a, const V3<T>& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

template <class T>
T dot(const V3<T>& a, const V3<T>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

// cos√t and sin√t/√t as power series in t, so that they stay smooth at t = 0.
template <class T>
std::pair<T, T> cos_sinc_sqrt(const T& t) {
  T c(0.0), s(0.0), term_c(1.0), term_s(1.0);
  for (int k = 0; k < 14; ++k) {
    c = c + term_c;
    s = s + term_s;
    term_c = term_c * t * (-1.0 / ((2 * k + 1) * (2 * k + 2)));
    term_s = term_s * t * (-1.0 / ((2 * k + 2) * (2 * k + 3)));
  }
  return {c, s};
}

// f∘ψ for ψ(s, w) = (P(s), W − ⟨W,P⟩P): geodesic normal coordinates on S², linear fibre coordinates.
template <class T>
std::array<T, 6> parametrized_embedding(const LinePoint& pt, const std::array<Vec3, 2>& e, std::span<const T> q) {
  const auto [c, s] = cos_sinc_sqrt(q[0] * q[0] + q[1] * q[1]);
  V3<T> P, W;
  for (int i = 0; i < 3; ++i) {
    P[i] = c * pt.p[i] + s * (q[0] * e[0][i] + q[1] * e[1][i]);
    W[i] = pt.V[i] + q[2] * e[0][i] + q[3] * e[1][i];
  }
  const T wp = dot(W, P);
  V3<T> V;
  for (int i = 0; i < 3; ++i) V[i] = W[i] - wp * P[i];
  const V3<T> PV = cross(P, V);
  return {P[0], P[1], P[2], -PV[0], -PV[1], -PV[2]};
}

Vec stack(const Vec3& a, const Vec3& b) {
  Vec out(6);
  out << a, b;
  return out;
}

}  // namespace

void validate(const LinePoint& pt) {
  if (!pt.p.allFinite() || !pt.V.allFinite()) throw std::invalid_argument("line point: non-finite entries");
  if (std::abs(pt.p.norm() - 1.0) > kConstraintTol)
    throw std::invalid_argument("line point: |p| = " + std::to_string(pt.p.norm()) + " is not 1");
  if (std::abs(pt.p.dot(pt.V)) > kConstraintTol)
    throw std::invalid_argument("line point: <p,V> = " + std::to_string(pt.p.dot(pt.V)) + " is not 0");
}

void validate(const LineTangent& X) {
  validate(X.at);
  if (std::abs(X.at.p.dot(X.xdot)) > kConstraintTol) throw std::invalid_argument("line tangent: <p,xdot> is not 0");
  if (std::abs(X.at.p.dot(X.vdot) + X.xdot.dot(X.at.V)) > kConstraintTol)
    throw std::invalid_argument("line tangent: <p,vdot> + <xdot,V> is not 0");
}

Vec3 line_pi(const LineTangent& X) { return X.xdot; }

Vec3 line_k(const LineTangent& X) { return X.vdot + X.at.V.dot(X.xdot) * X.at.p; }

LineTangent line_tangent_from_split(const LinePoint& pt, const Vec3& Pi, const Vec3& K) {
  return LineTangent{pt, Pi, K - pt.V.dot(Pi) * pt.p};
}

std::array<Vec3, 2> sphere_tangent_basis(const Vec3& p) {
  const Vec3 seed = std::abs(p[0]) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  const Vec3 e1 = (seed - seed.dot(p) * p).normalized();
  return {e1, p.cross(e1)};
}

std::array<LineTangent, 4> line_tangent_basis(const LinePoint& pt) {
  const auto e = sphere_tangent_basis(pt.p);
  return {line_tangent_from_split(pt, e[0], Vec3::Zero()), line_tangent_from_split(pt, e[1], Vec3::Zero()),
          line_tangent_from_split(pt, Vec3::Zero(), e[0]), line_tangent_from_split(pt, Vec3::Zero(), e[1])};
}

double line_metric(const LineTangent& X, const LineTangent& Y) {
  const Vec3& p = X.at.p;
  return line_k(X).dot(p.cross(line_pi(Y))) - line_pi(X).dot(p.cross(line_k(Y)));
}

double sphere_neutral_metric(const LineTangent& X, const LineTangent& Y) {
  return line_pi(X).dot(line_k(Y)) + line_k(X).dot(line_pi(Y));
}

BundlePoint embed(const LinePoint& pt) {
  validate(pt);
  return BundlePoint{pt.p, -pt.p.cross(pt.V)};
}

BundleVector embed_tangent(const LineTangent& X) {
  validate(X);
  const Vec3 Pi = line_pi(X), K = line_k(X);
  return BundleVector{embed(X.at), Pi, -Pi.cross(X.at.V) - X.at.p.cross(K)};
}

std::array<LineTangent, 4> line_frame(const LinePoint& pt) {
  const Vec3& p = pt.p;
  const Vec3& V = pt.V;
  const Vec3 pV = p.cross(V);
  return {line_tangent_from_split(pt, V, pV), line_tangent_from_split(pt, pV, V),
          line_tangent_from_split(pt, V, -pV), line_tangent_from_split(pt, -pV, V)};
}

Vec closed_second_fundamental_form(const LineTangent& X, const LineTangent& Y) {
  const Vec3& p = X.at.p;
  const Vec3 PX = line_pi(X), PY = line_pi(Y), KX = line_k(X), KY = line_k(Y);
  const double g = PX.dot(PY);
  return stack(g * p, g * p.cross(X.at.V) - PY.cross(KX) - PX.cross(KY));
}

ImmersionJet line_immersion_jet(const LinePoint& pt) {
  validate(pt);
  const auto e = sphere_tangent_basis(pt.p);
  constexpr int m = 4;
  ImmersionJet jet;
  jet.m = m;
  jet.point = embed(pt);
  jet.d1.assign(m, Vec::Zero(6));
  jet.d2.assign(m, std::vector<Vec>(m, Vec::Zero(6)));
  std::array<D2, m> q;
  for (int a = 0; a < m; ++a)
    for (int b = a; b < m; ++b) {
      for (int i = 0; i < m; ++i) q[i] = seed2(0.0, i == a ? 1.0 : 0.0, i == b ? 1.0 : 0.0);
      const auto r = parametrized_embedding<D2>(pt, e, std::span<const D2>(q));
      for (int k = 0; k < 6; ++k) {
        jet.d1[a][k] = r[k].v.d;
        jet.d1[b][k] = r[k].d.v;
        jet.d2[a][b][k] = jet.d2[b][a][k] = r[k].d.d;
      }
    }
  return jet;
}

LineSpaceReport linespace_report(const LinePoint& pt) {
  validate(pt);
  LineSpaceReport rep;
  rep.point = pt;
  const RiemannianChart R3 = euclidean(3);
  const Mat G = structures_at(R3, embed(pt)).G;

  const auto basis = line_tangent_basis(pt);
  for (const auto& X : basis)
    for (const auto& Y : basis) {
      const Vec fx = embed_tangent(X).coords(), fy = embed_tangent(Y).coords();
      rep.isometry_residual = std::max(rep.isometry_residual, std::abs(fx.dot(G * fy) - line_metric(X, Y)));
    }

  const ImmersionJet jet = line_immersion_jet(pt);
  const SubmanifoldReport sub = immersion_report(R3, jet);
  rep.H = sub.H;

  // Oracle h on ambient tangent vectors: coefficients of df X in the parameter frame.
  Mat frame(6, jet.m);
  for (int a = 0; a < jet.m; ++a) frame.col(a) = jet.d1[a];
  const auto oracle_h = [&](const LineTangent& X, const LineTangent& Y) {
    const Vec cx = frame.colPivHouseholderQr().solve(embed_tangent(X).coords());
    const Vec cy = frame.colPivHouseholderQr().solve(embed_tangent(Y).coords());
    Vec h = Vec::Zero(6);
    for (int a = 0; a < jet.m; ++a)
      for (int b = 0; b < jet.m; ++b) h += cx[a] * cy[b] * sub.B[a][b];
    return h;
  };

  const Vec3& p = pt.p;
  const Vec3& V = pt.V;
  const double v2 = V.squaredNorm();
  const bool zero_fibre = V.norm() <= 1e-12;
  // At V = 0 the frame is built from a unit tangent ξ instead of V.
  const LinePoint frame_pt{p, zero_fibre ? sphere_tangent_basis(p)[0] : V};
  auto E = line_frame(frame_pt);
  for (auto& X : E) X = line_tangent_from_split(pt, line_pi(X), line_k(X));
  const double scale = zero_fibre ? 1.0 : v2;

  Mat gram(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) gram(i, j) = line_metric(E[i], E[j]);
  const double expected_norm[4] = {2.0, -2.0, -2.0, 2.0};
  for (int i = 0; i < 4; ++i)
    rep.frame_norm_residual = std::max(rep.frame_norm_residual, std::abs(gram(i, i) - expected_norm[i] * scale));

  const Vec expected_h11 = zero_fibre ? stack(p, Vec3::Zero()) : stack(v2 * p, -v2 * p.cross(V));
  rep.frame_h_residual = max_abs(Vec(oracle_h(E[0], E[0]) - expected_h11));

  const Mat gram_inv = gram.inverse();
  rep.H_frame = Vec::Zero(6);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const Vec closed = closed_second_fundamental_form(E[i], E[j]);
      rep.H_frame += gram_inv(i, j) * closed;
      rep.frame_h_closed_residual =
          std::max(rep.frame_h_closed_residual, max_abs(Vec(oracle_h(E[i], E[j]) - closed)));
    }
  return rep;
}

double kahler_isometry_residual(const LinePoint& pt) {
  validate(pt);
  const LinePoint image{pt.p, -pt.p.cross(pt.V)};
  // dF in ambient terms: ẋ unchanged, v̇ ↦ d/dt(−p×V).
  const auto push = [&](const LineTangent& X) {
    return LineTangent{image, X.xdot, -X.xdot.cross(pt.V) - pt.p.cross(X.vdot)};
  };
  const auto basis = line_tangent_basis(pt);
  double worst = 0.0;
  for (const auto& X : basis)
    for (const auto& Y : basis)
      worst = std::max(worst, std::abs(sphere_neutral_metric(push(X), push(Y)) - line_metric(X, Y)));
  return worst;
}

std::vector<LinePoint> sample_lines(int count, int zero_count, std::uint64_t seed) {
  if (count < 1 || zero_count < 0 || zero_count > count) throw std::invalid_argument("sample_lines: bad counts");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N01;
  std::uniform_real_distribution<double> len(0.2, 2.0);
  std::vector<LinePoint> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    Vec3 p;
    do p = Vec3(N01(rng), N01(rng), N01(rng));
    while (p.norm() < 1e-3);
    p.normalize();
    Vec3 w = Vec3(N01(rng), N01(rng), N01(rng));
    w -= w.dot(p) * p;
    const double L = len(rng);
    const Vec3 V = i < zero_count || w.norm() < 1e-6 ? Vec3::Zero() : Vec3(L * w.normalized());
    out.push_back({p, V});
  }
  return out;
}

}  // namespace tn
