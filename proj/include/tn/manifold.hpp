#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tn/expr.hpp"
#include "tn/sampling.hpp"
#include "tn/tensor.hpp"

namespace tn {

/// Geometric failure at a specific chart point (outside the box, degenerate metric).
class GeometryError : public std::runtime_error {
 public:
  GeometryError(const std::string& what, Vec where);
  const Vec& where() const { return where_; }

 private:
  Vec where_;
};

std::string format_point(const Vec& x);

/// Metric and its coordinate partials at a point.
/// dg(i,j,a) = ∂a g_ij, d2g(i,j,a,b) = ∂a∂b g_ij, d3g(i,j,a,b,c) = ∂a∂b∂c g_ij.
struct MetricJet {
  Mat g;
  Tensor3 dg;
  Tensor4 d2g;
  Tensor5 d3g;
  int order = 0;
};

using MetricJetSource = std::function<MetricJet(const Vec& x, int order)>;

class RiemannianChart {
 public:
  /// Metric given by a symmetric grid of expressions over the chart variables.
  RiemannianChart(std::string name, DomainBox domain, std::vector<std::vector<Expression>> metric,
                  bool riemannian = true);
  /// Metric given by a jet callback that supplies derivatives up to max_order.
  RiemannianChart(std::string name, int n, DomainBox domain, MetricJetSource source, int max_order,
                  bool riemannian = true);

  int n() const { return n_; }
  const std::string& name() const { return name_; }
  const DomainBox& domain() const { return domain_; }
  int max_order() const { return max_order_; }
  bool riemannian() const { return riemannian_; }
  const std::vector<std::vector<Expression>>& expressions() const { return metric_; }

  /// Throws GeometryError when x is outside the open domain box.
  void require_inside(const Vec& x) const;
  Mat metric(const Vec& x) const;
  MetricJet jet(const Vec& x, int order) const;

 private:
  std::string name_;
  int n_ = 0;
  DomainBox domain_;
  std::vector<std::vector<Expression>> metric_;
  MetricJetSource source_;
  int max_order_ = 3;
  bool riemannian_ = true;
};

RiemannianChart euclidean(int n);
RiemannianChart sphere2(double radius = 1.0);
RiemannianChart hyperbolic2();
RiemannianChart sphere3();
RiemannianChart warped2();
RiemannianChart warped3();
RiemannianChart custom_chart(std::string name, const std::vector<std::vector<std::string>>& metric,
                             const DomainBox& domain, std::vector<std::string> variables = {});

/// Builtin lookup by name: euclidean2, euclidean3, sphere2, hyperbolic2, sphere3, warped2, warped3.
RiemannianChart make_builtin(const std::string& name);
std::vector<std::string> builtin_names();

/// Manifold definition document {name, n, domain, metric, variables?}.
RiemannianChart load_chart_json(const std::string& text);
RiemannianChart load_chart_file(const std::string& path);

/// Connection and curvature of the base at a point.
struct BaseGeometry {
  Vec x;
  Mat g;
  Mat g_inv;
  Tensor3 gamma;          // (k,i,j) = Γ^k_ij
  Tensor4 dgamma;         // (k,i,j,m) = ∂m Γ^k_ij
  Tensor4 riemann_mixed;  // (l,i,j,k) = R^l_ijk, R(∂i,∂j)∂k = R^l_ijk ∂l
  Tensor4 riemann_lower;  // (i,j,k,l) = Rm_ijkl = g(R(∂i,∂j)∂k, ∂l)
  Mat ricci;              // Ric_jk = R^i_ijk
  double scalar = 0.0;
  Tensor5 cov_riemann;    // (l,i,j,k,m) = (∇m R)^l_ijk; empty below order 3
  int order = 0;
};

/// order: 1 = connection only, 2 = curvature, 3 = curvature derivative.
BaseGeometry geometry_at(const RiemannianChart& M, const Vec& x, int order = 3);

/// (D_V Rm)(i,j,k,l) = g_lm V^p (∇p R)^m_ijk.
Tensor4 dv_riemann(const RiemannianChart& M, const Vec& x, const Vec& V);
Tensor4 dv_riemann(const BaseGeometry& geo, const Vec& V);

/// Quasi-random points of the domain, kept away from its boundary.
std::vector<Vec> sample_chart(const RiemannianChart& M, int count, std::uint64_t seed = kDefaultSeed);

/// Oracle step on the base chart.
double base_fd_step(const Vec& x, double scale = 1e-4);

}  // namespace tn
