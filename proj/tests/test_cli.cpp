#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <sys/wait.h>

#include "tn/cli.hpp"

using namespace tn;
using Json = nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "tn_neutral");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

const Json* find_residual(const Json& doc, const std::string& prefix) {
  for (const auto& r : doc.at("residuals"))
    if (r.at("name").get<std::string>().rfind(prefix, 0) == 0) return &r;
  return nullptr;
}

std::string fixture(const std::string& name) { return std::string(TN_FIXTURE_DIR) + "/" + name; }

int exit_status(const std::string& args) {
  const std::string cmd = std::string(TN_NEUTRAL_EXE) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Cli, CurvatureOnSphere) {
  const auto r = invoke({"curvature", "--manifold", "sphere2", "--samples", "16"});
  ASSERT_EQ(r.code, kExitOk) << r.out << r.err;
  const Json doc = Json::parse(r.out);
  EXPECT_EQ(doc.at("command"), "curvature");
  EXPECT_EQ(doc.at("config").at("samples"), 16);
  const Json* s = find_residual(doc, "scalar_G");
  ASSERT_NE(s, nullptr);
  EXPECT_LE(s->at("value").get<double>(), 1e-6);
  EXPECT_TRUE(s->at("pass").get<bool>());
  EXPECT_TRUE(doc.at("pass").get<bool>());
  EXPECT_TRUE(doc.at("artifacts").empty());
}

TEST(Cli, ManifoldFromFixtureFile) {
  const auto r = invoke({"curvature", "--manifold", fixture("round_sphere.json"), "--samples", "4"});
  ASSERT_EQ(r.code, kExitOk) << r.out << r.err;
  EXPECT_NE(find_residual(Json::parse(r.out), "oracle_gap[round_sphere]"), nullptr);
  EXPECT_EQ(invoke({"curvature", "--manifold", fixture("bad_metric.json")}).code, kExitConfig);
}

TEST(Cli, ConfigErrorsExitTwo) {
  EXPECT_EQ(invoke({"curvature", "--manifold", "no_such_manifold"}).code, kExitConfig);
  EXPECT_EQ(invoke({"curvature", "--samples", "0"}).code, kExitConfig);
  EXPECT_EQ(invoke({"curvature", "--format", "xml"}).code, kExitConfig);
  EXPECT_EQ(invoke({"curvature", "--tol-no_such_check", "1e-3"}).code, kExitConfig);
  EXPECT_EQ(invoke({"curvature", "--tol-scalar_G=abc"}).code, kExitConfig);
  EXPECT_EQ(invoke({"curvature", "--tol-scalar_G=-1"}).code, kExitConfig);
  EXPECT_EQ(invoke({"lagrangian", "--u", "x1^"}).code, kExitConfig);
  EXPECT_EQ(invoke({"source", "--kind", "custom"}).code, kExitConfig);
  EXPECT_EQ(invoke({}).code, kExitConfig);
}

TEST(Cli, DegenerateHessianExitsThreeWithLocation) {
  const auto r = invoke({"lagrangian", "--n", "2", "--u", "x1^4"});
  EXPECT_EQ(r.code, kExitDomain);
  const Json doc = Json::parse(r.out);
  EXPECT_NE(doc.at("error").at("message").get<std::string>().find("degenerate Hessian"), std::string::npos);
  EXPECT_EQ(doc.at("error").at("location").size(), 2u);
  EXPECT_NE(r.err.find("degenerate Hessian"), std::string::npos);
}

TEST(Cli, QuadraticPotentialIsTotallyGeodesic) {
  const auto r = invoke({"lagrangian", "--n", "2", "--u", "x1^2 + x1*x2 + 2*x2^2", "--samples", "8"});
  ASSERT_EQ(r.code, kExitOk) << r.out;
  const Json doc = Json::parse(r.out);
  EXPECT_TRUE(doc.at("classification").at("totally_geodesic").get<bool>());
  EXPECT_TRUE(doc.at("classification").at("minimal").get<bool>());
  EXPECT_TRUE(doc.at("classification").at("flat_induced_metric").get<bool>());
}

TEST(Cli, ToleranceOverrideTurnsAResidualRed) {
  const auto r = invoke({"curvature", "--manifold", "sphere2", "--samples", "4", "--tol-oracle_gap", "1e-30"});
  EXPECT_EQ(r.code, kExitResidual);
  const Json doc = Json::parse(r.out);
  const Json* g = find_residual(doc, "oracle_gap");
  ASSERT_NE(g, nullptr);
  EXPECT_EQ(g->at("tolerance").get<double>(), 1e-30);
  EXPECT_FALSE(g->at("pass").get<bool>());
  EXPECT_EQ(doc.at("config").at("tolerances").at("oracle_gap").get<double>(), 1e-30);
}

TEST(Cli, OutputIsDeterministic) {
  const std::vector<std::string> args = {"lagrangian", "--u", "exp(x1) + x2^4 + x1^2", "--samples", "8", "--seed", "7"};
  const auto a = invoke(args), b = invoke(args);
  EXPECT_EQ(a.out, b.out);
  auto other = args;
  other.back() = "8";
  EXPECT_NE(invoke(other).out, a.out);
}

TEST(Cli, LineSpacePoint) {
  const auto r = invoke({"linespace", "--p", "0,0,1", "--V", "1,0,0"});
  const Json doc = Json::parse(r.out);
  const std::vector<double> embedded = doc.at("measurements").at("embedded_point");
  const std::vector<double> expected = {0, 0, 1, 0, -1, 0};
  for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(embedded[i], expected[i], 1e-15);
  EXPECT_TRUE(find_residual(doc, "line_isometry")->at("pass").get<bool>());
  EXPECT_TRUE(find_residual(doc, "kahler_isometry")->at("pass").get<bool>());
  EXPECT_TRUE(find_residual(doc, "frame_mean_curvature")->at("pass").get<bool>());
  // The measured mean curvature is (0, −4p), so the minimality residual fails.
  EXPECT_NEAR(find_residual(doc, "line_mean_curvature")->at("value").get<double>(), 4.0, 1e-8);
  EXPECT_EQ(r.code, kExitResidual);
  EXPECT_EQ(invoke({"linespace", "--p", "0,0,2"}).code, kExitConfig);
  EXPECT_EQ(invoke({"linespace", "--p", "0,0,1", "--V", "0,0,1"}).code, kExitConfig);
  EXPECT_EQ(invoke({"linespace", "--p", "0,x,1"}).code, kExitConfig);
}

TEST(Cli, SourceFamilies) {
  const auto minimal = invoke({"source", "--kind", "minimal", "--n", "3", "--c0", "1", "--c1", "1", "--samples", "16"});
  EXPECT_EQ(minimal.code, kExitOk) << minimal.out;
  const auto h = invoke({"source", "--kind", "hminimal", "--n", "2", "--c0", "1", "--c1", "1", "--c2", "5", "--samples", "16"});
  const Json doc = Json::parse(h.out);
  EXPECT_TRUE(find_residual(doc, "hminimal_phi")->at("pass").get<bool>());
  EXPECT_FALSE(find_residual(doc, "hminimal_residual")->at("pass").get<bool>());
  EXPECT_EQ(h.code, kExitResidual);
  EXPECT_EQ(invoke({"source", "--kind", "custom", "--n", "2", "--H", "R^2", "--samples", "8"}).code, kExitOk);
}

TEST(Cli, GeodesicPathsCsv) {
  const auto dir = std::filesystem::temp_directory_path() / "tn_neutral_cli_test";
  std::filesystem::create_directories(dir);
  const std::string prefix = (dir / "path").string();
  const auto r = invoke({"geodesic", "--manifold", "sphere2", "--samples", "2", "--steps", "200", "--paths", prefix});
  ASSERT_EQ(r.code, kExitOk) << r.out;
  const Json doc = Json::parse(r.out);
  ASSERT_EQ(doc.at("artifacts").size(), 2u);
  std::ifstream f(doc.at("artifacts")[0].get<std::string>());
  std::string line;
  std::getline(f, line);
  EXPECT_EQ(line, "t,x1,x2,v1,v2");
  int rows = 0;
  while (std::getline(f, line)) ++rows;
  EXPECT_EQ(rows, 201);
  EXPECT_NE(find_residual(doc, "convergence_ratio_min"), nullptr);
  std::filesystem::remove_all(dir);
}

TEST(Cli, CsvFormatAndOutFile) {
  const auto file = std::filesystem::temp_directory_path() / "tn_neutral_cli_report.csv";
  const auto r = invoke({"curvature", "--manifold", "euclidean2", "--samples", "2", "--format", "csv", "--out", file.string()});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_TRUE(r.out.empty());
  std::ifstream f(file);
  std::string header, first;
  std::getline(f, header);
  std::getline(f, first);
  EXPECT_EQ(header, "name,value,tolerance,comparator,pass,note");
  EXPECT_EQ(first.rfind("scalar_G[euclidean2],0,", 0), 0u) << first;
  std::filesystem::remove(file);
}

TEST(Cli, VerifyAllListsEveryCriterion) {
  const auto r = invoke({"verify-all", "--samples", "2"});
  const Json doc = Json::parse(r.out);
  ASSERT_EQ(doc.at("criteria").size(), 15u);
  bool all = true;
  for (const auto& c : doc.at("criteria")) all = all && c.at("pass").get<bool>();
  EXPECT_EQ(r.code, all ? kExitOk : kExitResidual);
  for (const auto& res : doc.at("residuals")) {
    EXPECT_TRUE(res.contains("criterion"));
    EXPECT_TRUE(res.contains("tolerance"));
  }
}

TEST(Cli, ExecutableExitCodes) {
  EXPECT_EQ(exit_status("--help"), 0);
  EXPECT_EQ(exit_status(""), 2);
  EXPECT_EQ(exit_status("curvature --manifold euclidean2 --samples 2"), 0);
  EXPECT_EQ(exit_status("lagrangian --n 2 --u x1^4"), 3);
}
