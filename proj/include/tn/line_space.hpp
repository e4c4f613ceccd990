#pragma once

#include <array>

#include "tn/submanifold.hpp"

namespace tn {

using Vec3 = Eigen::Vector3d;

/// Oriented line of ℝ³ as (p, V) ∈ TS²: unit direction p and ⟨p,V⟩ = 0.
struct LinePoint {
  Vec3 p;
  Vec3 V;
};

/// Tangent vector to TS² at a line point, in ambient terms.
struct LineTangent {
  LinePoint at;
  Vec3 xdot;  // ⟨p,ẋ⟩ = 0
  Vec3 vdot;  // ⟨p,v̇⟩ + ⟨ẋ,V⟩ = 0
};

/// Throws std::invalid_argument when a constraint is violated beyond 1e-9.
void validate(const LinePoint& pt);
void validate(const LineTangent& X);

/// ΠX = ẋ, KX = v̇ + ⟨V,ẋ⟩p.
Vec3 line_pi(const LineTangent& X);
Vec3 line_k(const LineTangent& X);

/// Tangent vector with prescribed (ΠX, KX), both tangent to S² at p.
LineTangent line_tangent_from_split(const LinePoint& pt, const Vec3& Pi, const Vec3& K);

/// Orthonormal basis (e₁, e₂) of T_pS² with e₁ × e₂ = p.
std::array<Vec3, 2> sphere_tangent_basis(const Vec3& p);

/// Horizontal and vertical lifts of e₁, e₂.
std::array<LineTangent, 4> line_tangent_basis(const LinePoint& pt);

/// 𝔾(X,Y) = ⟨KX, p×ΠY⟩ − ⟨ΠX, p×KY⟩.
double line_metric(const LineTangent& X, const LineTangent& Y);

/// Neutral metric of S² in ambient form: ⟨ΠX,KY⟩ + ⟨KX,ΠY⟩.
double sphere_neutral_metric(const LineTangent& X, const LineTangent& Y);

/// f(p,V) = (p, −p×V) in Tℝ³ and its derivative.
BundlePoint embed(const LinePoint& pt);
BundleVector embed_tangent(const LineTangent& X);

/// E₁ = (V, p×V), E₂ = (p×V, V), E₃ = (V, −p×V), E₄ = (−p×V, V) as (Π, K) pairs.
std::array<LineTangent, 4> line_frame(const LinePoint& pt);

/// Second fundamental form of f from its closed form on (Π, K) data.
Vec closed_second_fundamental_form(const LineTangent& X, const LineTangent& Y);

/// Second-order jet of f∘ψ where ψ is a local parametrization of TS² around pt
/// (normalized-projection coordinates on S², linear fibre coordinates).
ImmersionJet line_immersion_jet(const LinePoint& pt);

struct LineSpaceReport {
  LinePoint point;
  double isometry_residual = 0.0;  // max |f*G − 𝔾| on a tangent basis
  Vec H;                           // mean curvature from the generic submanifold routine
  Vec H_frame;                     // mean curvature from the closed-form frame computation (|V| ≠ 0)
  double frame_norm_residual = 0.0;   // |E_i|² against (2,−2,−2,2)|V|²
  double frame_h_residual = 0.0;      // oracle h(dfE₁,dfE₁) against (|V|²p, −|V|²p×V); V=0: against (p,0)
  double frame_h_closed_residual = 0.0;  // oracle h on the frame against the closed-form h
};

LineSpaceReport linespace_report(const LinePoint& pt);

/// Max over a tangent basis of |F*G − 𝔾| for F(p,V) = (p, −p×V) as a self-map of TS².
double kahler_isometry_residual(const LinePoint& pt);

/// Seeded line points: p uniform on S², V tangent with |V| ≤ 2; the first zero_count have V = 0.
std::vector<LinePoint> sample_lines(int count, int zero_count = 0, std::uint64_t seed = kDefaultSeed);

}  // namespace tn
