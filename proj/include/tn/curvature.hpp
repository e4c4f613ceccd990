#pragma once

#include "tn/tangent_bundle.hpp"

namespace tn {

/// Closed-form curvature of G evaluated on four vectors at the same bundle point.
double riemann_G_closed(const RiemannianChart& M, const BundlePoint& p, const BundleVector& X, const BundleVector& Y,
                        const BundleVector& Z, const BundleVector& W);

/// All lowered components Rm̄(∂A,∂B,∂C,∂D) in induced coordinates.
Tensor4 riemann_G_closed_tensor(const BaseGeometry& geo, const Vec& V);
Tensor4 riemann_G_closed_tensor(const RiemannianChart& M, const BundlePoint& p);

/// Brute-force lowered curvature of the matrix field G on the 2n-chart.
Tensor4 curvature_oracle_at(const RiemannianChart& M, const BundlePoint& p);

/// Ric_BC = G^AD Rm_ABCD.
Mat ricci_from_lower(const Tensor4& Rm, const Mat& Ginv);

/// Weyl tensor of a lowered curvature tensor in dimension N = G.rows() ≥ 3.
Tensor4 weyl_from_lower(const Tensor4& Rm, const Mat& G, const Mat& Ginv);

struct BundleCurvatureReport {
  BundlePoint point;
  double scalar_G = 0.0;
  Mat ricci_G;
  double weyl_max = 0.0;
  double einstein_residual = 0.0;
  double locally_symmetric_residual = 0.0;  // negative when not computed
  double oracle_gap = 0.0;
  double ricci_horizontal_residual = 0.0;   // max |Ric̄(X^h,Y^h) − 2Ric(X,Y)|
  double ricci_vertical_residual = 0.0;     // max |Ric̄(X^v,·)|
};

/// Invariants of G at p, all derived from the oracle curvature. The
/// covariant-derivative residual is the expensive part and can be skipped.
BundleCurvatureReport invariants_report(const RiemannianChart& M, const BundlePoint& p,
                                        bool with_local_symmetry = true);

}  // namespace tn
