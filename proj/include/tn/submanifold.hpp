#pragma once

#include <variant>
#include <vector>

#include "tn/curvature.hpp"
#include "tn/expr.hpp"

namespace tn {

/// Second-order jet of an immersion φ: ℝ^m → TN at one parameter value.
struct ImmersionJet {
  int m = 0;
  BundlePoint point;                 // φ(q)
  std::vector<Vec> d1;               // ∂φ/∂q^a as 2n-vectors
  std::vector<std::vector<Vec>> d2;  // ∂²φ/∂q^a∂q^b
};

struct SubmanifoldReport {
  BundlePoint point;
  Mat pullback;  // φ*G
  double pullback_det = 0.0;
  std::vector<std::vector<Vec>> B;  // second fundamental form, normal-valued
  Vec H;                            // mean curvature vector, trace of B
  double omega_pullback_max = 0.0;
  Vec maslov;                              // η(∂_a) = G(J₁H, ∂_a φ)
  double normality_residual = 0.0;         // max |G(B(a,b), ∂_c φ)|
  double maslov_identity_residual = -1.0;  // filled by maslov_residuals
};

/// Null point of the submanifold: the induced metric is degenerate there.
struct DegeneratePullback {
  BundlePoint point;
  double det = 0.0;
};

using ImmersionResult = std::variant<SubmanifoldReport, DegeneratePullback>;

/// Pullback, second fundamental form, mean curvature and Maslov form.
/// Returns DegeneratePullback when |det φ*G| ≤ 1e-10.
ImmersionResult immersion_geometry_at(const RiemannianChart& M, const ImmersionJet& jet);

/// Same, but throws GeometryError on a null point.
SubmanifoldReport immersion_report(const RiemannianChart& M, const ImmersionJet& jet);

/// Exact jet of φ given by 2n expressions in m parameters.
ImmersionJet immersion_jet(const std::vector<Expression>& phi, const Vec& q);

/// Jet of the section graph x ↦ (x, V(x)) for n expressions in the base variables.
ImmersionJet graph_jet(const std::vector<Expression>& V, const Vec& x);

/// max |Ω(∂_a φ, ∂_b φ)|.
double lagrangian_residual(const RiemannianChart& M, const ImmersionJet& jet);

struct MaslovCheck {
  Vec maslov;
  Mat d_eta;     // (∂_a η_b − ∂_b η_a) by finite differences
  Mat half_ric;  // ½ Ric̄(J₁ ∂_a φ, ∂_b φ)
  double identity_residual = 0.0;
};

/// Maslov form of the section graph of V at p and the residual of dη = ½Ric̄(J·,·) on it.
/// Throws std::invalid_argument when the graph is not Lagrangian at p.
MaslovCheck maslov_residuals(const RiemannianChart& M, const std::vector<Expression>& V, const Vec& p);

}  // namespace tn
