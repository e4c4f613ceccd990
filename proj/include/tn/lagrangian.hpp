#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "tn/dual.hpp"
#include "tn/submanifold.hpp"

namespace tn {

/// ∂u/∂x_c for all c, evaluated on triply-nested duals so that the graph
/// x ↦ (x, Du(x)) is available with derivatives of u up to fourth order.
using GradientFn = std::function<std::vector<D3>(std::span<const D3>)>;

/// Lagrangian gradient graph f(x) = (x, Du(x)) in Tℝⁿ.
struct PotentialGraph {
  int n = 0;
  std::string label;
  DomainBox domain;
  GradientFn gradient;
};

/// Potential given as an expression in x1..xn (or its own variables).
PotentialGraph potential_from_expression(const Expression& u, DomainBox domain);
PotentialGraph potential_from_text(const std::string& u, int n, DomainBox domain);
DomainBox default_potential_box(int n);  // (−1,1)^n

/// P with u replaced by u + extra (extra in x1..xn).
PotentialGraph perturbed(const PotentialGraph& P, const Expression& extra);

/// Derivatives of u: hess(i,j), third(i,j,k), fourth(i,j,k,l).
struct PotentialJet {
  Vec x;
  Vec grad;
  Mat hess;
  Tensor3 third;
  Tensor4 fourth;
};

PotentialJet potential_jet(const PotentialGraph& P, const Vec& x);

/// Graph jet in the form consumed by the generic submanifold routines.
ImmersionJet potential_immersion_jet(const PotentialJet& j);

struct GraphReport {
  Vec x;
  Mat induced;  // 2·Hess u
  double detHess = 0.0;
  std::vector<std::vector<Vec>> B;
  Vec H;
  Vec JH_tangential;                // J₁H = Σ a^k f_k, coefficients a
  Vec grad_log_det;                 // ∂_l log|det Hess u|
  double jh_gradient_residual = 0;  // |a − g⁻¹∇ log|det Hess u|^{−1/2}|
  double minimal_residual = 0;      // max_l |∂_l log|det Hess u||, zero iff H = 0
  double hminimal_residual = 0;     // |Δ_g log|det Hess u||
  double totally_geodesic_residual = 0;  // max |u_ijl|
};

/// Closed-form graph geometry. Throws GeometryError on a degenerate Hessian.
GraphReport graph_geometry_at(const PotentialGraph& P, const Vec& x);

struct ClassifyReport {
  int samples = 0;
  double fitted_c0 = 0.0;  // mean det Hess u
  double minimal_residual_stat = 0.0;
  double hminimal_residual_stat = 0.0;
  double totally_geodesic_residual_stat = 0.0;
  double max_mean_curvature = 0.0;
};

ClassifyReport classify_points(const PotentialGraph& P, const std::vector<Vec>& points);
ClassifyReport classify(const PotentialGraph& P, int samples, std::uint64_t seed = kDefaultSeed);

/// Sample points inside the potential's domain.
std::vector<Vec> sample_potential(const PotentialGraph& P, int samples, std::uint64_t seed = kDefaultSeed);

/// The induced metric 2·Hess u as a (possibly indefinite) chart with exact jets up to order 2.
RiemannianChart induced_chart(const PotentialGraph& P);

/// Max |Rm_ijkl| of the induced metric over sampled points.
double gauss_flatness_check(const PotentialGraph& P, int samples, std::uint64_t seed = kDefaultSeed);

}  // namespace tn
