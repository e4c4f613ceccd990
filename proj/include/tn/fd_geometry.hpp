#pragma once

#include <functional>

#include "tn/tensor.hpp"

namespace tn {

// Brute-force coordinate geometry of an arbitrary metric field, built only
// from point evaluations of the metric. Every derivative is a five-point
// central difference (Richardson-extrapolated central difference), nested
// for higher orders. Used as an independent oracle for the closed forms.

using MetricField = std::function<Mat(const Vec&)>;

/// Five-point derivative of f along coordinate c. T is Mat, Vec or a Tensor.
template <class T, class F>
T fd_partial(const F& f, const Vec& y, int c, double h) {
  Vec p1 = y, m1 = y, p2 = y, m2 = y;
  p1[c] += h;
  m1[c] -= h;
  p2[c] += 2 * h;
  m2[c] -= 2 * h;
  const T fp1 = f(p1), fm1 = f(m1), fp2 = f(p2), fm2 = f(m2);
  T out = (fp1 - fm1) * (8.0 / (12.0 * h)) - (fp2 - fm2) * (1.0 / (12.0 * h));
  return out;
}

/// Gamma(k,i,j) = Γ^k_ij of the field at y.
Tensor3 fd_christoffel(const MetricField& g, const Vec& y, double h);

/// R(l,i,j,k) = R^l_ijk with R(X,Y)Z = ∇X∇YZ − ∇Y∇XZ − ∇[X,Y]Z.
Tensor4 fd_riemann_mixed(const MetricField& g, const Vec& y, double h);

/// Rm(i,j,k,l) = g(R(∂i,∂j)∂k, ∂l).
Tensor4 fd_riemann_lower(const MetricField& g, const Vec& y, double h);

/// C(i,j,k,l,m) = (∇_m Rm)_ijkl.
Tensor5 fd_cov_riemann_lower(const MetricField& g, const Vec& y, double h);

/// Lowered curvature from Christoffels and their partials dGamma(k,i,j,m) = ∂m Γ^k_ij.
Tensor4 riemann_lower_from(const Mat& g, const Tensor3& gamma, const Tensor4& dgamma);
Tensor4 riemann_mixed_from(const Tensor3& gamma, const Tensor4& dgamma);

}  // namespace tn
