#include "tn/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "tn/acceptance.hpp"
#include "tn/curvature.hpp"
#include "tn/geodesics.hpp"
#include "tn/line_space.hpp"
#include "tn/source_fields.hpp"

namespace tn {

namespace {

using Json = nlohmann::ordered_json;

const std::vector<std::string> kCommands = {"curvature", "geodesic", "lagrangian", "source", "linespace", "verify-all"};

// Everything a command produces besides its exit status.
struct Report {
  std::vector<Check> checks;
  std::vector<int> criterion;  // parallel to checks; verify-all only
  Json measurements = Json::object();
  Json extra = Json::object();
  std::vector<std::string> artifacts;
};

RiemannianChart resolve_manifold(const std::string& spec) {
  for (const auto& name : builtin_names())
    if (name == spec) return make_builtin(name);
  if (spec.rfind("euclidean", 0) == 0) return make_builtin(spec);
  if (std::filesystem::exists(spec)) return load_chart_file(spec);
  throw std::invalid_argument("unknown manifold '" + spec + "' (not a builtin name or an existing file)");
}

Vec3 parse_triple(const std::string& text, const char* what) {
  std::stringstream ss(text);
  std::string item;
  std::vector<double> vals;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used == 0 || used != item.size()) throw std::invalid_argument(std::string(what) + ": bad number '" + item + "'");
    vals.push_back(v);
  }
  if (vals.size() != 3) throw std::invalid_argument(std::string(what) + ": expected three comma-separated numbers");
  return Vec3(vals[0], vals[1], vals[2]);
}

Json vec_json(const Vec& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i] + 0.0);  // no -0 in reports
  return a;
}

AcceptanceOptions options_of(const RunConfig& c) {
  AcceptanceOptions o;
  o.samples = c.samples;
  o.seed = c.seed;
  o.tolerances = c.tolerances;
  return o;
}

void run_curvature(const RunConfig& c, Report& rep) {
  const RiemannianChart M = resolve_manifold(c.manifold);
  const auto pts = sample_bundle(M, c.samples, c.seed);
  std::vector<BundleCurvatureReport> reps(pts.size());
  parallel_for(static_cast<int>(pts.size()),
               [&](int i) { reps[static_cast<std::size_t>(i)] = invariants_report(M, pts[static_cast<std::size_t>(i)], false); });
  double scalar = 0, horiz = 0, vert = 0, gap = 0, weyl = 0, einstein = 0;
  for (const auto& r : reps) {
    scalar = std::max(scalar, std::abs(r.scalar_G));
    horiz = std::max(horiz, r.ricci_horizontal_residual);
    vert = std::max(vert, r.ricci_vertical_residual);
    gap = std::max(gap, r.oracle_gap);
    weyl = std::max(weyl, r.weyl_max);
    einstein = std::max(einstein, r.einstein_residual);
  }
  const AcceptanceOptions o = options_of(c);
  CheckList cl(o);
  cl.add_value("scalar_G", M.name(), Comparator::AtMost, scalar);
  cl.add_value("ricci_horizontal", M.name(), Comparator::AtMost, horiz);
  cl.add_value("ricci_vertical", M.name(), Comparator::AtMost, vert);
  cl.add_value("oracle_gap", M.name(), Comparator::AtMost, gap);
  rep.checks = cl.take();
  rep.measurements["weyl_max"] = weyl;
  rep.measurements["einstein_residual"] = einstein;
}

void write_path_csv(const std::string& file, const BundlePath& path) {
  std::ofstream f(file);
  if (!f) throw std::invalid_argument("cannot write '" + file + "'");
  const auto n = path.points.front().x.size();
  f << "t";
  for (Eigen::Index i = 1; i <= n; ++i) f << ",x" << i;
  for (Eigen::Index i = 1; i <= n; ++i) f << ",v" << i;
  f << "\n" << std::setprecision(17);
  for (std::size_t k = 0; k < path.points.size(); ++k) {
    f << path.times[k];
    for (Eigen::Index i = 0; i < n; ++i) f << "," << path.points[k].x[i];
    for (Eigen::Index i = 0; i < n; ++i) f << "," << path.points[k].V[i];
    f << "\n";
  }
}

void run_geodesic(const RunConfig& c, Report& rep) {
  if (!(c.T > 0.0)) throw std::invalid_argument("--T must be positive");
  if (c.steps < 1) throw std::invalid_argument("--steps must be at least 1");
  const RiemannianChart M = resolve_manifold(c.manifold);
  const auto ics = sample_initial_data(M, c.samples, c.T, c.seed);
  const int count = static_cast<int>(ics.size());
  std::vector<double> gaps(ics.size()), drifts(ics.size());
  std::vector<BundlePath> paths(ics.size());
  parallel_for(count, [&](int i) {
    const auto k = static_cast<std::size_t>(i);
    paths[k] = integrate_split(M, ics[k].p, ics[k].v, c.T, c.steps);
    gaps[k] = path_gap(paths[k], integrate_direct(M, ics[k].p, ics[k].v, c.T, c.steps));
    drifts[k] = energy_drift(M, paths[k]);
  });
  const AcceptanceOptions o = options_of(c);
  CheckList cl(o);
  cl.add_value("geodesic_gap", M.name(), Comparator::AtMost, *std::max_element(gaps.begin(), gaps.end()));
  cl.add_value("energy_drift", M.name(), Comparator::AtMost, *std::max_element(drifts.begin(), drifts.end()));

  // Step-halving study with 20/40 steps against 320; skipped where RK4 is exact to roundoff.
  constexpr int coarse = 20;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int i = 0; i < std::min(4, count); ++i) {
    const auto& ic = ics[static_cast<std::size_t>(i)];
    const double e1 = path_gap(integrate_split(M, ic.p, ic.v, c.T, coarse), integrate_split(M, ic.p, ic.v, c.T, 16 * coarse));
    if (e1 < 1e-12) continue;
    const double r = convergence_ratio(M, ic.p, ic.v, c.T, coarse);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  if (std::isfinite(lo)) {
    cl.add_value("convergence_ratio_min", M.name(), Comparator::AtLeast, lo);
    cl.add_value("convergence_ratio_max", M.name(), Comparator::AtMost, hi);
  } else {
    rep.measurements["convergence"] = "integrator exact to roundoff on this base";
  }
  rep.checks = cl.take();
  rep.measurements["trajectories"] = count;

  if (!c.paths.empty())
    for (int i = 0; i < count; ++i) {
      const std::string file = c.paths + "_" + std::to_string(i) + ".csv";
      write_path_csv(file, paths[static_cast<std::size_t>(i)]);
      rep.artifacts.push_back(file);
    }
}

void run_lagrangian(const RunConfig& c, Report& rep) {
  if (c.u.empty()) throw std::invalid_argument("lagrangian: --u is required");
  const PotentialGraph P = potential_from_text(c.u, c.n, default_potential_box(c.n));
  const auto pts = sample_potential(P, c.samples, c.seed);
  const RiemannianChart E = euclidean(c.n);
  std::vector<double> jh(pts.size()), routes(pts.size());
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const GraphReport g = graph_geometry_at(P, pts[k]);
    const SubmanifoldReport s = immersion_report(E, potential_immersion_jet(potential_jet(P, pts[k])));
    jh[k] = g.jh_gradient_residual;
    routes[k] = max_abs(Mat(g.H - s.H));
  }
  const ClassifyReport cls = classify_points(P, pts);
  const double curvature = gauss_flatness_check(P, std::min(16, c.samples), c.seed);

  const AcceptanceOptions o = options_of(c);
  CheckList cl(o);
  cl.add_value("jh_gradient", P.label, Comparator::AtMost, *std::max_element(jh.begin(), jh.end()));
  cl.add_value("mean_curvature_routes", P.label, Comparator::AtMost, *std::max_element(routes.begin(), routes.end()));
  rep.checks = cl.take();

  rep.measurements["fitted_c0"] = cls.fitted_c0;
  rep.measurements["minimal_residual"] = cls.minimal_residual_stat;
  rep.measurements["hminimal_residual"] = cls.hminimal_residual_stat;
  rep.measurements["totally_geodesic_residual"] = cls.totally_geodesic_residual_stat;
  rep.measurements["max_mean_curvature"] = cls.max_mean_curvature;
  rep.measurements["induced_curvature_max"] = curvature;
  rep.extra["classification"] = Json{
      {"minimal", cls.minimal_residual_stat <= cl.tolerance("minimal_residual")},
      {"hminimal", cls.hminimal_residual_stat <= cl.tolerance("hminimal_residual")},
      {"totally_geodesic", cls.totally_geodesic_residual_stat <= cl.tolerance("quadratic_B")},
      {"flat_induced_metric", curvature <= cl.tolerance("related_flatness")},
  };
}

void run_source(const RunConfig& c, Report& rep) {
  IntensityProfile P;
  if (c.kind == "minimal")
    P = intensity_minimal(c.n, c.c0, c.c1, c.r_lo, c.r_hi);
  else if (c.kind == "hminimal")
    P = intensity_hminimal(c.n, c.c0, c.c1, c.c2, c.r_lo, c.r_hi);
  else if (c.kind == "custom") {
    if (c.H.empty()) throw std::invalid_argument("source: --H is required for --kind custom");
    P = intensity_custom(c.n, c.H, c.r_lo, c.r_hi);
  } else {
    throw std::invalid_argument("source: --kind must be minimal, hminimal or custom");
  }
  const SourceReport s = source_graph_report(P, c.samples, c.seed);
  const AcceptanceOptions o = options_of(c);
  CheckList cl(o);
  cl.add_value("source_det_formula", P.label, Comparator::AtMost, s.det_formula_residual);
  cl.add_value("source_det_formula", P.label + " eigenvalues", Comparator::AtMost, s.eigen_det_residual);
  cl.add_value("source_inverse_metric", P.label, Comparator::AtMost, s.inverse_metric_residual);
  if (P.kind == IntensityKind::Minimal) {
    cl.add_value("minimal_residual", P.label, Comparator::AtMost, s.classify.minimal_residual_stat);
    cl.add_value("mean_curvature_closed", P.label, Comparator::AtMost, s.classify.max_mean_curvature);
  } else if (P.kind == IntensityKind::HMinimal) {
    cl.add_value("hminimal_phi", P.label, Comparator::AtMost, s.phi_log_residual);
    cl.add_value("hminimal_residual", P.label, Comparator::AtMost, s.classify.hminimal_residual_stat);
    cl.add_value("hminimal_not_minimal", P.label, Comparator::AtLeast, s.classify.minimal_residual_stat);
    rep.measurements["constant_k"] = s.constant_k;
  }
  rep.checks = cl.take();
  rep.measurements["kind"] = to_string(P.kind);
  rep.measurements["fitted_c0"] = s.classify.fitted_c0;
  rep.measurements["minimal_residual"] = s.classify.minimal_residual_stat;
  rep.measurements["hminimal_residual"] = s.classify.hminimal_residual_stat;
  rep.measurements["max_mean_curvature"] = s.classify.max_mean_curvature;
}

void run_linespace(const RunConfig& c, Report& rep) {
  std::vector<LinePoint> pts;
  if (!c.p.empty()) {
    pts.push_back({parse_triple(c.p, "--p"), c.V.empty() ? Vec3::Zero() : parse_triple(c.V, "--V")});
    validate(pts.front());
  } else {
    if (!c.V.empty()) throw std::invalid_argument("linespace: --V needs --p");
    pts = sample_lines(c.samples, std::min(8, c.samples), c.seed);
  }
  double iso = 0, H = 0, norms = 0, hvals = 0, routes = 0, kahler = 0;
  bool any_nonzero = false;
  for (const auto& pt : pts) {
    const LineSpaceReport r = linespace_report(pt);
    iso = std::max(iso, r.isometry_residual);
    H = std::max(H, r.H.norm());
    hvals = std::max(hvals, r.frame_h_residual);
    routes = std::max(routes, max_abs(Mat(r.H - r.H_frame)));
    kahler = std::max(kahler, kahler_isometry_residual(pt));
    if (pt.V.norm() > 0.0) {
      any_nonzero = true;
      norms = std::max(norms, r.frame_norm_residual);
    }
    if (pts.size() == 1) {
      rep.measurements["embedded_point"] = vec_json(embed(pt).coords());
      rep.measurements["H"] = vec_json(r.H);
      rep.measurements["H_frame"] = vec_json(r.H_frame);
    }
  }
  const std::string fixture = pts.size() == 1 ? "point" : std::to_string(pts.size()) + " lines";
  const AcceptanceOptions o = options_of(c);
  CheckList cl(o);
  cl.add_value("line_isometry", fixture, Comparator::AtMost, iso);
  cl.add_value("line_mean_curvature", fixture, Comparator::AtMost, H);
  if (any_nonzero) cl.add_value("frame_norms", fixture, Comparator::AtMost, norms);
  cl.add_value("frame_h_values", fixture, Comparator::AtMost, hvals);
  cl.add_value("frame_mean_curvature", fixture, Comparator::AtMost, routes);
  cl.add_value("kahler_isometry", fixture, Comparator::AtMost, kahler);
  rep.checks = cl.take();
}

void run_verify_all(const RunConfig& c, Report& rep) {
  Json criteria = Json::array();
  for (const auto& r : run_acceptance(options_of(c))) {
    criteria.push_back(Json{{"id", r.id}, {"title", r.title}, {"pass", r.pass()}});
    for (const auto& ch : r.checks) {
      rep.checks.push_back(ch);
      rep.criterion.push_back(r.id);
    }
  }
  rep.extra["criteria"] = std::move(criteria);
}

Json config_json(const RunConfig& c) {
  Json j = Json::object();
  if (c.command == "curvature" || c.command == "geodesic") j["manifold"] = c.manifold;
  if (c.command == "lagrangian" || c.command == "source") j["n"] = c.n;
  j["samples"] = c.samples;
  j["seed"] = c.seed;
  if (!c.u.empty()) j["u"] = c.u;
  if (c.command == "source") {
    j["kind"] = c.kind;
    j["constants"] = {c.c0, c.c1, c.c2};
    j["interval"] = {c.r_lo, c.r_hi};
    if (!c.H.empty()) j["H"] = c.H;
  }
  if (c.command == "geodesic") {
    j["T"] = c.T;
    j["steps"] = c.steps;
  }
  if (!c.p.empty()) j["p"] = c.p;
  if (!c.V.empty()) j["V"] = c.V;
  j["tolerances"] = Json::object();
  for (const auto& [k, v] : c.tolerances) j["tolerances"][k] = v;
  j["format"] = c.format;
  return j;
}

Json check_json(const Check& ch) {
  Json j{{"name", ch.name},
         {"value", std::isfinite(ch.value) ? Json(ch.value) : Json(nullptr)},
         {"tolerance", ch.tolerance},
         {"comparator", to_string(ch.comparator)},
         {"pass", ch.pass}};
  if (!ch.note.empty()) j["note"] = ch.note;
  return j;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return out + "\"";
}

std::string render(const RunConfig& c, const Report& rep, bool pass, const Json& error) {
  if (c.format == "csv") {
    std::ostringstream os;
    os << std::setprecision(17);
    os << (rep.criterion.empty() ? "" : "criterion,") << "name,value,tolerance,comparator,pass,note\n";
    for (std::size_t i = 0; i < rep.checks.size(); ++i) {
      const Check& ch = rep.checks[i];
      if (!rep.criterion.empty()) os << rep.criterion[i] << ",";
      os << csv_field(ch.name) << ",";
      if (std::isfinite(ch.value)) os << ch.value;
      os << "," << ch.tolerance << "," << to_string(ch.comparator) << "," << (ch.pass ? "true" : "false") << ","
         << csv_field(ch.note) << "\n";
    }
    if (!error.is_null()) os << "error,,,,false," << csv_field(error.at("message").get<std::string>()) << "\n";
    return os.str();
  }
  Json doc{{"command", c.command}, {"config", config_json(c)}};
  Json residuals = Json::array();
  for (std::size_t i = 0; i < rep.checks.size(); ++i) {
    Json j = check_json(rep.checks[i]);
    if (!rep.criterion.empty()) j["criterion"] = rep.criterion[i];
    residuals.push_back(std::move(j));
  }
  doc["residuals"] = std::move(residuals);
  if (!rep.measurements.empty()) doc["measurements"] = rep.measurements;
  for (const auto& [k, v] : rep.extra.items()) doc[k] = v;
  doc["artifacts"] = rep.artifacts;
  doc["pass"] = pass;
  if (!error.is_null()) doc["error"] = error;
  return doc.dump(2) + "\n";
}

}  // namespace

RunResult run(const RunConfig& c) {
  Report rep;
  Json error;
  int code = kExitOk;
  try {
    if (c.samples < 1) throw std::invalid_argument("--samples must be at least 1");
    if (c.format != "json" && c.format != "csv") throw std::invalid_argument("--format must be json or csv");
    validate_tolerances(c.tolerances);
    if (c.command == "curvature")
      run_curvature(c, rep);
    else if (c.command == "geodesic")
      run_geodesic(c, rep);
    else if (c.command == "lagrangian")
      run_lagrangian(c, rep);
    else if (c.command == "source")
      run_source(c, rep);
    else if (c.command == "linespace")
      run_linespace(c, rep);
    else if (c.command == "verify-all")
      run_verify_all(c, rep);
    else
      throw std::invalid_argument("unknown command '" + c.command + "'");
    for (const auto& ch : rep.checks)
      if (!ch.pass) code = kExitResidual;
  } catch (const GeometryError& e) {
    code = kExitDomain;
    error = Json{{"message", e.what()}, {"location", vec_json(e.where())}};
  } catch (const std::invalid_argument& e) {
    code = kExitConfig;
    error = Json{{"message", e.what()}};
  } catch (const ParseError& e) {
    code = kExitConfig;
    error = Json{{"message", e.what()}};
  } catch (const std::exception& e) {
    code = kExitDomain;
    error = Json{{"message", e.what()}};
  }
  if (code == kExitConfig || code == kExitDomain) rep = Report{};
  return RunResult{code, render(c, rep, code == kExitOk, error),
                   error.is_null() ? std::string() : error.at("message").get<std::string>()};
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  // --tol-<name> VALUE / --tol-<name>=VALUE are open-ended, so they are pulled out before CLI11 sees argv.
  std::vector<std::string> rest;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a.rfind("--tol-", 0) != 0) {
      rest.push_back(a);
      continue;
    }
    std::string name = a.substr(6), value;
    if (const auto eq = name.find('='); eq != std::string::npos) {
      value = name.substr(eq + 1);
      name = name.substr(0, eq);
    } else if (i + 1 < argc) {
      value = argv[++i];
    } else {
      err << "error: " << a << " needs a value\n";
      return kExitConfig;
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != value.size()) {
      err << "error: tolerance '" << name << "' has a bad value '" << value << "'\n";
      return kExitConfig;
    }
    cfg.tolerances[name] = v;
  }

  CLI::App app{"Numerical checks for the neutral metric G on tangent bundles", "tn_neutral"};
  app.require_subcommand(1);
  std::map<std::string, CLI::App*> sub;
  for (const auto& name : kCommands) sub[name] = app.add_subcommand(name);
  sub["curvature"]->description("curvature invariants of G and the closed-form/oracle gap");
  sub["geodesic"]->description("split geodesic system against the direct geodesic ODE of G");
  sub["lagrangian"]->description("gradient graph of a potential u: classification and flatness");
  sub["source"]->description("source field V = H(R) d/dR");
  sub["linespace"]->description("oriented lines as TS2 embedded in TR3");
  sub["verify-all"]->description("full acceptance suite");

  for (auto& [name, sc] : sub) {
    sc->add_option("--samples", cfg.samples, "sample count")->check(CLI::PositiveNumber);
    sc->add_option("--seed", cfg.seed, "random seed");
    sc->add_option("--out", cfg.out, "write the report to this file");
    sc->add_option("--format", cfg.format, "report format")->check(CLI::IsMember({"json", "csv"}));
  }
  for (const char* name : {"curvature", "geodesic"})
    sub[name]->add_option("--manifold", cfg.manifold, "builtin name or manifold JSON file");
  sub["geodesic"]->add_option("--T", cfg.T, "integration time");
  sub["geodesic"]->add_option("--steps", cfg.steps, "RK4 steps")->check(CLI::PositiveNumber);
  sub["geodesic"]->add_option("--paths", cfg.paths, "prefix for per-trajectory CSV files");
  sub["lagrangian"]->add_option("--u", cfg.u, "potential in x1..xn")->required();
  for (const char* name : {"lagrangian", "source"})
    sub[name]->add_option("--n", cfg.n, "dimension")->check(CLI::Range(1, 6));
  sub["source"]->add_option("--kind", cfg.kind, "intensity family")->check(CLI::IsMember({"minimal", "hminimal", "custom"}));
  sub["source"]->add_option("--H", cfg.H, "custom intensity in R");
  sub["source"]->add_option("--c0", cfg.c0);
  sub["source"]->add_option("--c1", cfg.c1);
  sub["source"]->add_option("--c2", cfg.c2);
  sub["source"]->add_option("--r-lo", cfg.r_lo, "inner radius");
  sub["source"]->add_option("--r-hi", cfg.r_hi, "outer radius");
  sub["linespace"]->add_option("--p", cfg.p, "unit direction p as x,y,z");
  sub["linespace"]->add_option("--V", cfg.V, "moment vector V as x,y,z");

  std::vector<std::string> args(rest.rbegin(), rest.rend());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  for (auto& [name, sc] : sub)
    if (sc->parsed()) cfg.command = name;

  const RunResult r = run(cfg);
  if (cfg.out.empty()) {
    out << r.report;
  } else {
    std::ofstream f(cfg.out);
    if (!f) {
      err << "error: cannot write '" << cfg.out << "'\n";
      return kExitConfig;
    }
    f << r.report;
  }
  if (!r.error.empty()) err << "error: " << r.error << "\n";
  return r.exit_code;
}

}  // namespace tn
