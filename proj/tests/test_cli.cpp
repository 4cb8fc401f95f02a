#include <gtest/gtest.h>

#include "qid/cli.hpp"

#include <array>
#include <cstdio>
#include <sstream>

using namespace qid;

namespace {

struct Run {
  int status;
  std::string out, err;
  [[nodiscard]] json report() const { return json::parse(out); }
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int s = cli::run(args, out, err);
  return {s, out.str(), err.str()};
}

// Through the installed binary, to cover argv handling and the exit code.
std::pair<int, std::string> shell(const std::string& args) {
  std::string cmd = std::string(QID_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  std::string out;
  std::array<char, 4096> buf{};
  while (size_t n = fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
  int st = pclose(p);
  return {WEXITSTATUS(st), out};
}

std::string src(const std::string& rel) { return std::string(QID_SOURCE_DIR) + "/" + rel; }

}  // namespace

TEST(Cli, BetaStandardModelAtSeven) {
  auto r = run({"beta", "--dimension", "7", "--matter", "sm"});
  ASSERT_EQ(r.status, 0) << r.err;
  auto j = r.report();
  EXPECT_EQ(j["outputs"]["coefficient"], "9");
  EXPECT_EQ(j["outputs"]["units"], "1/12");
  EXPECT_TRUE(j["outputs"]["asymptotically_free"].get<bool>());
}

TEST(Cli, BetaWithoutHiggsVanishesAtSix) {
  auto j = run({"beta", "--dimension", "6", "--matter", "sm", "--no-higgs"}).report();
  EXPECT_EQ(j["outputs"]["coefficient"], "0");
  EXPECT_FALSE(j["outputs"]["asymptotically_free"].get<bool>());
}

TEST(Cli, BetaCustomAndTable) {
  auto j = run({"beta", "--dimension", "4", "--matter", "custom", "--counts", "1,1,0,0,0"}).report();
  EXPECT_EQ(j["outputs"]["coefficient_formula"], "11D - 2");
  EXPECT_EQ(j["outputs"]["coefficient"], "42");
  auto t = run({"beta", "--matter", "sm", "--format", "table", "--range", "6:7"});
  EXPECT_EQ(t.status, 0);
  EXPECT_NE(t.out.find("6\t-2\t"), std::string::npos) << t.out;
  EXPECT_NE(t.out.find("7\t9\t"), std::string::npos) << t.out;
  EXPECT_NE(run({"beta", "--matter", "custom", "--counts", "1,2"}).status, 0);
  EXPECT_NE(run({"beta", "--matter", "custom", "--counts", "1,-1,0,0,0"}).status, 0);
}

TEST(Cli, DivIntegralMatchesTable) {
  auto r = run({"div-integral", "--rank", "2", "--denoms", "2"});
  ASSERT_EQ(r.status, 0);
  auto e = tensor_from_json(r.report()["outputs"]["pole_coeff"]);
  EXPECT_TRUE(equal(e, looptab::published(2, 2)->pole_coeff));
  auto n = run({"div-integral", "--rank", "0", "--denoms", "2", "--numeric"}).report();
  EXPECT_NEAR(n["outputs"]["omega4"].get<double>(), 1 / (8 * M_PI * M_PI), 1e-15);
  EXPECT_NE(run({"div-integral", "--rank", "5", "--denoms", "2"}).status, 0);
}

TEST(Cli, InnerMomentNumeric) {
  auto j = run({"inner-moment", "--degree", "0", "--dim", "4", "--cutoff", "2", "--numeric"}).report();
  EXPECT_NEAR(j["outputs"]["numeric_coefficient"].get<double>(), 16.0 / (8 * M_PI * M_PI) / 4, 1e-12);
  EXPECT_EQ(j["outputs"]["omega_exact"]["coeff"], "1/8");
  EXPECT_EQ(j["outputs"]["omega_exact"]["pi_exp"], "-2");
}

TEST(Cli, RulesOutputs) {
  auto v = run({"rules", "--vertex", "ghost"});
  ASSERT_EQ(v.status, 0);
  EXPECT_TRUE(equal(tensor_from_json(v.report()["outputs"]["vertex"]), rules::vertex_ghost(rules::default_ghost_legs()).expr));
  auto p = run({"rules", "--propagator", "gauge", "--xi", "1/2"}).report();
  auto expect = rules::gauge_propagator(Rational(1, 2), "1", lor_up("mu"), inn_up("M"), lor_up("nu"), inn_up("N"));
  EXPECT_TRUE(equal(tensor_from_json(p["outputs"]["propagator"]), expect));
  EXPECT_NE(run({"rules"}).status, 0);
  EXPECT_NE(run({"rules", "--vertex", "5"}).status, 0);
  auto l = run({"rules", "--vertex", "3", "--format", "latex"});
  EXPECT_NE(l.out.find("\\Lambda"), std::string::npos);
}

TEST(Cli, PowerCountSample) {
  auto j = run({"power-count", "--graph", src("docs/self_energy.json")}).report();
  EXPECT_EQ(j["outputs"]["superficial_degree"], 2);
  EXPECT_TRUE(j["verdicts"]["degree_formula"]["pass"].get<bool>());
  EXPECT_NE(run({"power-count", "--graph", src("docs/missing.json")}).status, 0);
}

TEST(Cli, HeatKernelCovariant) {
  auto r = run({"heat-kernel", "--covariant"});
  ASSERT_EQ(r.status, 0);
  auto j = r.report();
  EXPECT_EQ(j["outputs"]["ff"], "1/12");
  EXPECT_EQ(j["outputs"]["ee"], "1/2");
  EXPECT_TRUE(j["verdicts"]["closes"]["pass"].get<bool>());
}

TEST(Cli, BrstChecks) {
  for (const char* f : {"A", "omega", "omega-star", "h", "psi"}) {
    auto r = run({"brst-check", "--field", f});
    EXPECT_EQ(r.status, 0) << f;
    EXPECT_TRUE(r.report()["verdicts"]["nilpotent"]["pass"].get<bool>());
  }
  auto e = run({"brst-check", "--exactness"});
  EXPECT_EQ(e.status, 0);
  EXPECT_EQ(e.report()["verdicts"].size(), 3u);
  EXPECT_NE(run({"brst-check"}).status, 0);
  EXPECT_NE(run({"brst-check", "--field", "B"}).status, 0);
}

TEST(Cli, VerifyAllSuites) {
  auto r = run({"verify"});
  ASSERT_EQ(r.status, 0) << r.out;
  auto j = r.report();
  EXPECT_EQ(j["verdicts"].size(), 5u);
  for (const auto& [name, v] : j["verdicts"].items()) EXPECT_TRUE(v["pass"].get<bool>()) << name;
  EXPECT_EQ(run({"verify", "table"}).report()["verdicts"].size(), 1u);
  EXPECT_NE(run({"verify", "nonsense"}).status, 0);
}

TEST(Cli, UsageErrors) {
  EXPECT_NE(run({}).status, 0);
  EXPECT_NE(run({"frobnicate"}).status, 0);
  EXPECT_NE(run({"beta", "--wat"}).status, 0);
  EXPECT_NE(run({"beta", "--format", "xml"}).status, 0);
}

TEST(Cli, ReportsAreDeterministic) {
  for (std::vector<std::string> a : {std::vector<std::string>{"verify"}, {"rules", "--vertex", "4"}, {"brst-check", "--field", "A"}})
    EXPECT_EQ(run(a).out, run(a).out);
}

TEST(Cli, ReportDirectory) {
  auto dir = std::filesystem::temp_directory_path() / "qid_cli_reports";
  std::filesystem::remove_all(dir);
  setenv("QID_REPORT_DIR", dir.c_str(), 1);
  auto r = run({"beta", "--dimension", "7", "--matter", "sm"});
  unsetenv("QID_REPORT_DIR");
  std::ifstream f(dir / "beta.json");
  ASSERT_TRUE(f.good());
  EXPECT_EQ(json::parse(f), r.report());
}

TEST(Cli, Binary) {
  auto [s, out] = shell("beta --dimension 7 --matter sm");
  EXPECT_EQ(s, 0);
  EXPECT_EQ(json::parse(out)["outputs"]["coefficient"], "9");
  EXPECT_NE(shell("frobnicate").first, 0);
  EXPECT_NE(shell("beta --wat").first, 0);
  EXPECT_EQ(shell("verify").first, 0);
}
