#include "tn/manifold.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "tn/fd_geometry.hpp"

namespace tn {

GeometryError::GeometryError(const std::string& what, Vec where)
    : std::runtime_error(what + " at " + format_point(where)), where_(std::move(where)) {}

std::string format_point(const Vec& x) {
  std::ostringstream os;
  os.precision(17);
  os << "(";
  for (Eigen::Index i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ")";
  return os.str();
}

namespace {

std::string num(double v) {
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

MetricJet expression_jet(const std::vector<std::vector<Expression>>& metric, const Vec& x, int order) {
  const auto n = static_cast<Eigen::Index>(metric.size());
  MetricJet J;
  J.order = order;
  J.g = Mat::Zero(n, n);
  J.dg = zeros3(n, n, n);
  J.d2g = zeros4(n, n, n, n);
  J.d3g = zeros5(order >= 3 ? n : 0, order >= 3 ? n : 0, order >= 3 ? n : 0, order >= 3 ? n : 0,
                 order >= 3 ? n : 0);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) {
      const Jet3 e = eval_jet3(metric[i][j], x, order);
      J.g(i, j) = J.g(j, i) = e.value;
      for (Eigen::Index a = 0; a < n; ++a) {
        J.dg(i, j, a) = J.dg(j, i, a) = e.grad[a];
        for (Eigen::Index b = 0; b < n; ++b) {
          J.d2g(i, j, a, b) = J.d2g(j, i, a, b) = e.hess(a, b);
          if (order >= 3)
            for (Eigen::Index c = 0; c < n; ++c) J.d3g(i, j, a, b, c) = J.d3g(j, i, a, b, c) = e.third(a, b, c);
        }
      }
    }
  return J;
}

std::vector<std::vector<Expression>> diag_metric(const std::vector<std::string>& entries,
                                                 const std::vector<std::string>& vars) {
  const std::size_t n = entries.size();
  std::vector<std::vector<Expression>> m(n, std::vector<Expression>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      m[i][j] = i == j ? Expression::parse(entries[i], vars) : Expression::constant(0.0, vars);
  return m;
}

DomainBox cube(int n, double lo, double hi) {
  return {std::vector<double>(static_cast<std::size_t>(n), lo), std::vector<double>(static_cast<std::size_t>(n), hi)};
}

}  // namespace

RiemannianChart::RiemannianChart(std::string name, DomainBox domain, std::vector<std::vector<Expression>> metric,
                                 bool riemannian)
    : name_(std::move(name)),
      n_(static_cast<int>(metric.size())),
      domain_(std::move(domain)),
      metric_(std::move(metric)),
      riemannian_(riemannian) {
  if (n_ == 0) throw std::invalid_argument("chart '" + name_ + "': empty metric");
  if (domain_.dim() != n_) throw std::invalid_argument("chart '" + name_ + "': domain dimension mismatch");
  for (const auto& row : metric_) {
    if (static_cast<int>(row.size()) != n_) throw std::invalid_argument("chart '" + name_ + "': metric not square");
    for (const auto& e : row)
      if (static_cast<int>(e.arity()) != n_)
        throw std::invalid_argument("chart '" + name_ + "': metric entry has wrong variable count");
  }
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j)
      if (!(metric_[i][j] == metric_[j][i]))
        throw std::invalid_argument("chart '" + name_ + "': metric entries (" + std::to_string(i + 1) + "," +
                                    std::to_string(j + 1) + ") and transpose differ");
  for (int i = 0; i < n_; ++i)
    if (!(domain_.lo[i] < domain_.hi[i])) throw std::invalid_argument("chart '" + name_ + "': empty domain interval");
  source_ = [m = metric_](const Vec& x, int order) { return expression_jet(m, x, order); };
}

RiemannianChart::RiemannianChart(std::string name, int n, DomainBox domain, MetricJetSource source, int max_order,
                                 bool riemannian)
    : name_(std::move(name)),
      n_(n),
      domain_(std::move(domain)),
      source_(std::move(source)),
      max_order_(max_order),
      riemannian_(riemannian) {
  if (n_ <= 0 || domain_.dim() != n_) throw std::invalid_argument("chart '" + name_ + "': bad dimension");
}

void RiemannianChart::require_inside(const Vec& x) const {
  if (x.size() != n_) throw GeometryError("chart '" + name_ + "': point has wrong dimension", x);
  if (!domain_.contains(x)) throw GeometryError("chart '" + name_ + "': point outside domain " + domain_.describe(), x);
}

Mat RiemannianChart::metric(const Vec& x) const { return jet(x, 0).g; }

MetricJet RiemannianChart::jet(const Vec& x, int order) const {
  require_inside(x);
  if (order > max_order_)
    throw std::invalid_argument("chart '" + name_ + "': derivative order " + std::to_string(order) +
                                " not available");
  MetricJet J = source_(x, order);
  if (std::abs(J.g.determinant()) <= 1e-10) throw GeometryError("chart '" + name_ + "': degenerate metric", x);
  return J;
}

RiemannianChart euclidean(int n) {
  if (n < 1) throw std::invalid_argument("euclidean: dimension must be positive");
  auto vars = default_variables(n);
  return RiemannianChart("euclidean" + std::to_string(n), cube(n, -5.0, 5.0),
                         diag_metric(std::vector<std::string>(static_cast<std::size_t>(n), "1"), vars));
}

RiemannianChart sphere2(double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("sphere2: radius must be positive");
  const double delta = 1e-2;
  const std::string r2 = num(radius * radius);
  return RiemannianChart("sphere2", DomainBox{{delta, 0.0}, {M_PI - delta, 2.0 * M_PI}},
                         diag_metric({r2, r2 + "*sin(th)^2"}, {"th", "ph"}));
}

RiemannianChart hyperbolic2() {
  return RiemannianChart("hyperbolic2", DomainBox{{-2.0, 0.5}, {2.0, 3.0}},
                         diag_metric({"1/x2^2", "1/x2^2"}, default_variables(2)));
}

RiemannianChart sphere3() {
  const std::string c = "4/(1 + x1^2 + x2^2 + x3^2)^2";
  return RiemannianChart("sphere3", cube(3, -1.0, 1.0), diag_metric({c, c, c}, default_variables(3)));
}

RiemannianChart warped2() {
  return RiemannianChart("warped2", cube(2, -1.0, 1.0),
                         diag_metric({"1", "(1 + 0.5*sin(x1))^2"}, default_variables(2)));
}

RiemannianChart warped3() {
  return RiemannianChart("warped3", cube(3, -1.0, 1.0),
                         diag_metric({"1", "1", "(1 + 0.5*sin(x1))^2"}, default_variables(3)));
}

RiemannianChart custom_chart(std::string name, const std::vector<std::vector<std::string>>& metric,
                             const DomainBox& domain, std::vector<std::string> variables) {
  const std::size_t n = metric.size();
  if (variables.empty()) variables = default_variables(static_cast<int>(n));
  if (variables.size() != n) throw std::invalid_argument("chart '" + name + "': variable count differs from n");
  std::vector<std::vector<Expression>> m(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (metric[i].size() != n) throw std::invalid_argument("chart '" + name + "': metric not square");
    for (const auto& s : metric[i]) m[i].push_back(Expression::parse(s, variables));
  }
  return RiemannianChart(std::move(name), domain, std::move(m));
}

std::vector<std::string> builtin_names() {
  return {"euclidean2", "euclidean3", "sphere2", "hyperbolic2", "sphere3", "warped2", "warped3"};
}

RiemannianChart make_builtin(const std::string& name) {
  if (name.rfind("euclidean", 0) == 0) {
    const std::string rest = name.substr(9);
    int n = 0;
    auto res = std::from_chars(rest.data(), rest.data() + rest.size(), n);
    if (rest.empty() || res.ec != std::errc() || res.ptr != rest.data() + rest.size() || n < 1 || n > 6)
      throw std::invalid_argument("unknown builtin manifold '" + name + "'");
    return euclidean(n);
  }
  if (name == "sphere2") return sphere2();
  if (name == "hyperbolic2") return hyperbolic2();
  if (name == "sphere3") return sphere3();
  if (name == "warped2") return warped2();
  if (name == "warped3") return warped3();
  throw std::invalid_argument("unknown builtin manifold '" + name + "'");
}

RiemannianChart load_chart_json(const std::string& text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("manifold file: ") + e.what());
  }
  try {
    const auto name = doc.value("name", std::string("custom"));
    const int n = doc.at("n").get<int>();
    if (n < 1) throw std::invalid_argument("manifold file: n must be positive");
    DomainBox box;
    const auto& dom = doc.at("domain");
    if (!dom.is_array() || static_cast<int>(dom.size()) != n)
      throw std::invalid_argument("manifold file: domain must list n intervals");
    for (const auto& iv : dom) {
      if (!iv.is_array() || iv.size() != 2) throw std::invalid_argument("manifold file: interval must be [lo, hi]");
      box.lo.push_back(iv[0].get<double>());
      box.hi.push_back(iv[1].get<double>());
    }
    std::vector<std::vector<std::string>> metric;
    const auto& m = doc.at("metric");
    if (!m.is_array() || static_cast<int>(m.size()) != n)
      throw std::invalid_argument("manifold file: metric must have n rows");
    for (const auto& row : m) {
      if (!row.is_array() || static_cast<int>(row.size()) != n)
        throw std::invalid_argument("manifold file: metric row must have n entries");
      std::vector<std::string> r;
      for (const auto& e : row) r.push_back(e.is_string() ? e.get<std::string>() : num(e.get<double>()));
      metric.push_back(std::move(r));
    }
    std::vector<std::string> vars;
    if (doc.contains("variables")) vars = doc.at("variables").get<std::vector<std::string>>();
    return custom_chart(name, metric, box, vars);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("manifold file: ") + e.what());
  }
}

RiemannianChart load_chart_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open manifold file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_chart_json(ss.str());
}

BaseGeometry geometry_at(const RiemannianChart& M, const Vec& x, int order) {
  const MetricJet J = M.jet(x, order);
  const Eigen::Index n = M.n();
  BaseGeometry G;
  G.x = x;
  G.order = order;
  G.g = J.g;
  G.g_inv = J.g.inverse();
  const Mat& gi = G.g_inv;

  // Christoffel symbols of the first kind and their partials.
  Tensor3 L = zeros3(n, n, n);
  Tensor4 dL = zeros4(n, n, n, n);
  Tensor5 ddL = zeros5(n, n, n, n, n);
  std::vector<Mat> dg(static_cast<std::size_t>(n), Mat::Zero(n, n));
  for (Eigen::Index l = 0; l < n; ++l)
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        L(l, i, j) = 0.5 * (J.dg(l, j, i) + J.dg(l, i, j) - J.dg(i, j, l));
        dg[l](i, j) = J.dg(i, j, l);
        if (order >= 2)
          for (Eigen::Index m = 0; m < n; ++m) {
            dL(l, i, j, m) = 0.5 * (J.d2g(l, j, i, m) + J.d2g(l, i, j, m) - J.d2g(i, j, l, m));
            if (order >= 3)
              for (Eigen::Index p = 0; p < n; ++p)
                ddL(l, i, j, m, p) = 0.5 * (J.d3g(l, j, i, m, p) + J.d3g(l, i, j, m, p) - J.d3g(i, j, l, m, p));
          }
      }

  // ∂g⁻¹ = −g⁻¹ ∂g g⁻¹ and its derivative.
  std::vector<Mat> dgi(static_cast<std::size_t>(n));
  for (Eigen::Index m = 0; m < n; ++m) dgi[m] = -gi * dg[m] * gi;

  G.gamma = zeros3(n, n, n);
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        double s = 0.0;
        for (Eigen::Index l = 0; l < n; ++l) s += gi(k, l) * L(l, i, j);
        G.gamma(k, i, j) = s;
      }
  if (order < 2) return G;

  G.dgamma = zeros4(n, n, n, n);
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index m = 0; m < n; ++m) {
          double s = 0.0;
          for (Eigen::Index l = 0; l < n; ++l) s += dgi[m](k, l) * L(l, i, j) + gi(k, l) * dL(l, i, j, m);
          G.dgamma(k, i, j, m) = s;
        }

  G.riemann_mixed = riemann_mixed_from(G.gamma, G.dgamma);
  G.riemann_lower = riemann_lower_from(G.g, G.gamma, G.dgamma);
  G.ricci = Mat::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k)
      for (Eigen::Index i = 0; i < n; ++i) G.ricci(j, k) += G.riemann_mixed(i, i, j, k);
  G.scalar = (gi.array() * G.ricci.array()).sum();
  if (order < 3) return G;

  Tensor5 ddgam = zeros5(n, n, n, n, n);
  for (Eigen::Index m = 0; m < n; ++m)
    for (Eigen::Index p = 0; p < n; ++p) {
      Mat d2g_mp(n, n);
      for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = 0; b < n; ++b) d2g_mp(a, b) = J.d2g(a, b, m, p);
      const Mat ddgi = -(dgi[p] * dg[m] * gi + gi * d2g_mp * gi + gi * dg[m] * dgi[p]);
      for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index i = 0; i < n; ++i)
          for (Eigen::Index j = 0; j < n; ++j) {
            double s = 0.0;
            for (Eigen::Index l = 0; l < n; ++l)
              s += ddgi(k, l) * L(l, i, j) + dgi[m](k, l) * dL(l, i, j, p) + dgi[p](k, l) * dL(l, i, j, m) +
                   gi(k, l) * ddL(l, i, j, m, p);
            ddgam(k, i, j, m, p) = s;
          }
    }

  const Tensor3& gam = G.gamma;
  const Tensor4& dgam = G.dgamma;
  const Tensor4& R = G.riemann_mixed;
  G.cov_riemann = zeros5(n, n, n, n, n);
  for (Eigen::Index l = 0; l < n; ++l)
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index k = 0; k < n; ++k)
          for (Eigen::Index m = 0; m < n; ++m) {
            double s = ddgam(l, j, k, i, m) - ddgam(l, i, k, j, m);
            for (Eigen::Index a = 0; a < n; ++a) {
              s += dgam(l, i, a, m) * gam(a, j, k) + gam(l, i, a) * dgam(a, j, k, m) -
                   dgam(l, j, a, m) * gam(a, i, k) - gam(l, j, a) * dgam(a, i, k, m);
              s += gam(l, m, a) * R(a, i, j, k) - gam(a, m, i) * R(l, a, j, k) - gam(a, m, j) * R(l, i, a, k) -
                   gam(a, m, k) * R(l, i, j, a);
            }
            G.cov_riemann(l, i, j, k, m) = s;
          }
  return G;
}

Tensor4 dv_riemann(const BaseGeometry& geo, const Vec& V) {
  if (geo.order < 3) throw std::invalid_argument("dv_riemann: geometry lacks curvature derivative");
  const Eigen::Index n = geo.g.rows();
  Tensor4 out = zeros4(n, n, n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index l = 0; l < n; ++l) {
          double s = 0.0;
          for (Eigen::Index m = 0; m < n; ++m)
            for (Eigen::Index p = 0; p < n; ++p) s += geo.g(l, m) * V[p] * geo.cov_riemann(m, i, j, k, p);
          out(i, j, k, l) = s;
        }
  return out;
}

Tensor4 dv_riemann(const RiemannianChart& M, const Vec& x, const Vec& V) {
  if (V.size() != M.n()) throw std::invalid_argument("dv_riemann: V has wrong dimension");
  return dv_riemann(geometry_at(M, x, 3), V);
}

std::vector<Vec> sample_chart(const RiemannianChart& M, int count, std::uint64_t seed) {
  return sample_box(M.domain().inner(), count, seed);
}

double base_fd_step(const Vec& x, double scale) { return scale * std::max(1.0, x.norm()); }

}  // namespace tn
