#pragma once

#include <functional>
#include <string>
#include <vector>

#include "tn/lagrangian.hpp"

namespace tn {

enum class IntensityKind { Minimal, HMinimal, Custom };

std::string to_string(IntensityKind k);

/// Field intensity H(R) of the radial field V = H(R) ∂/∂R on ℝⁿ∖{0}.
struct IntensityProfile {
  int n = 0;
  IntensityKind kind = IntensityKind::Custom;
  std::vector<double> constants;  // (c0, c1) or (c0, c1, c2); empty for custom
  std::string label;
  std::function<D3(const D3&)> H;
  double r_lo = 0.5;
  double r_hi = 3.0;

  double value(double R) const;
  /// H, H′, H″, H‴ at R.
  std::array<double, 4> derivatives(double R) const;
};

/// H = (c0 Rⁿ + c1)^{1/n}.
IntensityProfile intensity_minimal(int n, double c0, double c1, double r_lo = 0.5, double r_hi = 3.0);

/// H = (c2 + c1 e^{c0 R} Σ_k k!(−1)^k/c0^k C(n−1,k) R^{n−1−k})^{1/n}.
IntensityProfile intensity_hminimal(int n, double c0, double c1, double c2, double r_lo = 0.5, double r_hi = 3.0);

/// H given as an expression in the variable R.
IntensityProfile intensity_custom(int n, const std::string& H, double r_lo = 0.5, double r_hi = 3.0);

/// The gradient graph of u with u_{x_i} = (H(R)/R) x_i.
PotentialGraph source_potential(const IntensityProfile& P);

/// Seeded points with radius in the profile interval (at least 0.1 from the origin).
std::vector<Vec> sample_shell(const IntensityProfile& P, int samples, std::uint64_t seed = kDefaultSeed);

/// Φ = H^{n−1}H′/R^{n−1}.
double source_det_formula(const IntensityProfile& P, double R);

/// Proportionality constant in Φ = k e^{c0 R} implied by the stated H: k = c0 c1 / n.
double hminimal_k(const IntensityProfile& P);

/// max |Φ′/Φ − c0| over a grid of the interval.
double hminimal_phi_log_residual(const IntensityProfile& P, int grid = 64);

/// Integrates (Hⁿ)′ = n k e^{c0 R} R^{n−1} from r_lo with RK4 and returns |H_ode(R) − H(R)|.
double hminimal_ode_gap(const IntensityProfile& P, double R, int steps = 2000);

struct SourceReport {
  IntensityProfile profile;
  ClassifyReport classify;
  double det_formula_residual = 0.0;     // max |det Hess u − Φ|
  double eigen_det_residual = 0.0;       // max |det Hess u − Π(h − (h′/R)λ_i)|
  double inverse_metric_residual = 0.0;  // max |closed-form g^{ij} − inverted g^{ij}|
  double constant_k = 0.0;               // hminimal only
  double phi_log_residual = -1.0;        // hminimal only; negative when not applicable
};

SourceReport source_graph_report(const IntensityProfile& P, int samples, std::uint64_t seed = kDefaultSeed);

}  // namespace tn
