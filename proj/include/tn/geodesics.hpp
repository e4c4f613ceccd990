#pragma once

#include <vector>

#include "tn/tangent_bundle.hpp"

namespace tn {

struct BundlePath {
  std::vector<double> times;
  std::vector<BundlePoint> points;
  std::vector<BundleVector> velocities;
  bool truncated = false;  // integration stopped when the path left the chart
};

/// Base geodesic x'' = −Γ(x',x') coupled with the Jacobi equation for V,
/// written first order in (x, x', V, W = D_{x'}V) with D_{x'}W = −R(V,x')x'.
BundlePath integrate_split(const RiemannianChart& M, const BundlePoint& p0, const BundleVector& v0, double T,
                           int steps);

/// Geodesic ODE of G on the 2n-chart with finite-difference Christoffels of G.
BundlePath integrate_direct(const RiemannianChart& M, const BundlePoint& p0, const BundleVector& v0, double T,
                            int steps);

/// Sup over the coarser grid of the chart distance between path points.
/// The finer path's step count must be a multiple of the coarser one's.
double path_gap(const BundlePath& a, const BundlePath& b);

/// Sup gap between integrate_split and integrate_direct.
double compare_geodesics(const RiemannianChart& M, const BundlePoint& p0, const BundleVector& v0, double T,
                         int steps);

/// G(γ',γ') along the path; the maximum relative drift from the start.
double energy_drift(const RiemannianChart& M, const BundlePath& path);

/// Step-halving ratio err(coarse)/err(2·coarse) of the split integrator against a 16× finer reference.
double convergence_ratio(const RiemannianChart& M, const BundlePoint& p0, const BundleVector& v0, double T,
                         int coarse_steps);

struct InitialData {
  BundlePoint p;
  BundleVector v;
};

/// Seeded initial conditions whose split geodesic stays in the chart up to T.
/// Base velocities are uniform in [−0.2,0.2]^n, fibre velocities in [−1,1]^n.
std::vector<InitialData> sample_initial_data(const RiemannianChart& M, int count, double T,
                                             std::uint64_t seed = kDefaultSeed);

struct PathResiduals {
  double base_geodesic = 0.0;  // max |x'' + Γ(x',x')| by finite differences along the path
  double jacobi = 0.0;         // max |D²V + R(V,x')x'|
};

/// Finite-difference residuals of the two equations along a uniformly sampled path.
PathResiduals path_residuals(const RiemannianChart& M, const BundlePath& path);

}  // namespace tn
