#pragma once

#include <vector>

#include "tn/fd_geometry.hpp"
#include "tn/manifold.hpp"

namespace tn {

// Induced coordinates on TN: (x^1..x^n, v^1..v^n). All 2n-dimensional
// objects below use this index order.

struct BundlePoint {
  Vec x;
  Vec V;
  Vec coords() const;
  static BundlePoint from_coords(const Vec& y, int n);
};

struct BundleVector {
  BundlePoint base;
  Vec xdot;
  Vec vdot;
  Vec coords() const;
};

/// Horizontal part Π = xdot and connection-map part K = vdot + Γ(xdot, V).
struct Split {
  Vec Pi;
  Vec K;
};

enum class LiftKind { Horizontal, Vertical };

/// C^k_i = Γ^k_ij V^j, so that K = vdot + C xdot.
Mat connection_matrix(const Tensor3& gamma, const Vec& V);

Split split_vector(const RiemannianChart& M, const BundleVector& v);
BundleVector lift(const RiemannianChart& M, const BundlePoint& p, const Vec& X, LiftKind kind);

/// Coordinate matrix S with S·(xdot,vdot) = (Π,K), and its inverse.
Mat split_matrix(const Mat& C);
Mat split_matrix_inverse(const Mat& C);

struct BundleStructures {
  Mat G;      // neutral metric G = G1
  Mat G0;     // g(K,K) − g(Π,Π)
  Mat G2;     // Ω(·,J2·) = −(Sasaki metric)
  Mat Omega;
  Mat J0, J1, J2;
  Mat G_inv;
};

BundleStructures structures_from(const Mat& g, const Mat& C);
BundleStructures structures_at(const RiemannianChart& M, const BundlePoint& p);

/// G = [[A+Aᵀ, g],[g, 0]] with A = gC.
Mat neutral_metric(const Mat& g, const Mat& C);
Mat neutral_metric_inverse(const Mat& g, const Mat& C);

/// G(X,Y) = g(ΠX,KY) + g(KX,ΠY) evaluated through split_vector.
double neutral_pairing(const RiemannianChart& M, const BundleVector& X, const BundleVector& Y);

/// Christoffel symbols Γ̄(K,A,B) of G in induced coordinates, from the base geometry.
Tensor3 connection_G_coeffs(const RiemannianChart& M, const BundlePoint& p);
Tensor3 connection_G_coeffs(const BaseGeometry& geo, const Vec& V);

/// y = (x,V) ↦ G(y); input to the brute-force oracles.
MetricField neutral_metric_field(const RiemannianChart& M);

/// Base points from sample_chart paired with fibre vectors uniform in [−2,2]^n.
std::vector<BundlePoint> sample_bundle(const RiemannianChart& M, int count, std::uint64_t seed = kDefaultSeed);

/// Oracle step on the 2n-chart.
inline constexpr double kBundleFdStep = 1e-3;

struct NullLiftSample {
  double t = 0.0;
  Vec x;
  double G_ff = 0.0;      // G(f', f') for f = (p, W(p))
  double d_norm2 = 0.0;   // d/dt |W|² along the integral curve
};

struct NullLiftScan {
  std::vector<NullLiftSample> samples;
  bool exited = false;
  double exit_time = 0.0;
};

/// Integrates p' = W(p) by RK4 and reports both sides of G(f',f') = d/dt|W|².
NullLiftScan null_lift_scan(const RiemannianChart& M, const std::vector<Expression>& W, const Vec& p0, double T,
                            int steps);

}  // namespace tn
