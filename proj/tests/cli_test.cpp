#include "conjtime/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "conjtime/serialization.hpp"

namespace conjtime {
namespace {

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

CliRun run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  CliRun r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("conjtime_cli_test_" + name);
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);) out.push_back(line);
  return out;
}

TEST(CliTest, HeisenbergExample) {
  const CliRun r = run({"lie3d-tc", "--chi", "0", "--kappa", "0", "--h0", "2"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Json j = r.json();
  EXPECT_EQ(j["verdict"], "finite");
  EXPECT_NEAR(j["tc"].get<double>(), std::numbers::pi, 1e-12);
}

TEST(CliTest, FlatClassifyExample) {
  const CliRun r = run({"lq-classify", "--l", "2", "--kappas", "0,0"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.json()["verdict"], "infinite");
}

TEST(CliTest, LqConjugateTime) {
  const CliRun r = run({"lq-tc", "--kappas", "9,0"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NEAR(r.json()["tc"].get<double>(), 2.0 * std::numbers::pi / 3.0, 1e-8);
  const CliRun q = run({"lq-tc", "--rows", "1,1", "--Q", "4,0;0,4"});
  ASSERT_EQ(q.code, kExitOk) << q.err;
  EXPECT_NEAR(q.json()["tc"].get<double>(), std::numbers::pi / 2.0, 1e-8);
}

TEST(CliTest, UsageErrors) {
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"unknown-command"}).code, kExitUsage);
  EXPECT_EQ(run({"lq-tc"}).code, kExitUsage);
  EXPECT_EQ(run({"lq-tc", "--kappas", "1,x"}).code, kExitUsage);
  EXPECT_EQ(run({"lq-tc", "--rows", "2", "--Q", "1,2;3,4"}).code, kExitUsage);
  EXPECT_EQ(run({"lq-tc", "--kappas", "1", "--horizon", "-1"}).code, kExitUsage);
  EXPECT_EQ(run({"lq-classify", "--l", "3", "--kappas", "1,2"}).code, kExitUsage);
  EXPECT_EQ(run({"lie3d-tc", "--chi", "1", "--kappa", "0", "--h0", "1", "--h1", "0.5", "--h2", "0.5"}).code,
            kExitUsage);
  EXPECT_EQ(run({"lie3d-tc", "--chi", "0", "--kappa", "0", "--E", "1"}).code, kExitUsage);
  EXPECT_EQ(run({"lq-tc", "--kappas", "1", "--format", "xml"}).code, kExitUsage);
}

TEST(CliTest, HelpDocumentsCsvColumns) {
  const CliRun r = run({"--help"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("t,h0,h1,h2,R11,R22,detN"), std::string::npos);
  EXPECT_NE(r.out.find("lie3d-sweep"), std::string::npos);
}

TEST(CliTest, VacuousComparisonExitCode) {
  const CliRun r = run({"compare-verify", "--rows", "2", "--R", "0.5,0;0,1", "--bound",
                     "sectional-lower", "--Q", "1,0;0,0", "--horizon", "10"});
  EXPECT_EQ(r.code, kExitVacuous);
  EXPECT_EQ(r.json()["verdict"], "vacuous");
}

TEST(CliTest, PassingComparison) {
  const CliRun r = run({"compare-verify", "--rows", "2", "--R", "2,0;0,0.5", "--Q", "1,0;0,0",
                     "--horizon", "10"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.json()["verdict"], "pass");
  EXPECT_EQ(r.json()["bound"], "sectional-lower");
}

TEST(CliTest, ComparisonFromFieldFile) {
  Json field = {{"kind", "sampled"},
                {"times", {0.0, 10.0}},
                {"values", {{{2.0, 0.0}, {0.0, 1.0}}, {{1.5, 0.0}, {0.0, 1.0}}}}};
  const auto path = temp_file("field.json");
  std::ofstream(path) << field.dump();
  const CliRun r = run({"compare-verify", "--rows", "2", "--field", path.string(), "--Q", "1,0;0,0",
                     "--horizon", "10"});
  std::filesystem::remove(path);
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.json()["verdict"], "pass");
}

TEST(CliTest, JsonOutputIsDeterministic) {
  const std::vector<std::string> args = {"lie3d-sweep", "--chi", "0,1", "--kappa", "-1,0.5",
                                         "--h0", "0:2:3", "--h2", "0,0.6", "--horizon", "8"};
  auto with_jobs = [&](const char* jobs) {
    auto a = args;
    a.push_back("--jobs");
    a.push_back(jobs);
    return a;
  };
  const CliRun a = run(with_jobs("4"));
  const CliRun b = run(with_jobs("4"));
  const CliRun c = run(with_jobs("1"));
  ASSERT_EQ(a.code, kExitOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out, c.out);
  EXPECT_EQ(a.json()["points"].size(), 24u);
}

TEST(CliTest, SweepKeepsFailedPoints) {
  const auto path = temp_file("sweep.csv");
  // h2^2 > E at E = 0.1, h2 = 0.5 has no covector.
  const CliRun r = run({"lie3d-sweep", "--chi", "1", "--kappa", "0", "--E", "0.1,3", "--h2", "0,0.5",
                     "--horizon", "5", "--format", "csv", "--output", path.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::ifstream in(path);
  std::stringstream text;
  text << in.rdbuf();
  std::filesystem::remove(path);
  const auto rows = lines(text.str());
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0],
            "index,chi,kappa,E,h0,h1,h2,verdict,tc,t_lo,t_hi,witness,flagged,ebar,error");
  EXPECT_NE(rows[2].find(",invalid,"), std::string::npos);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(rows[i].rfind(std::to_string(i - 1) + ",", 0), 0u);
}

TEST(CliTest, TrajectoryCsv) {
  const CliRun r = run({"lie3d-tc", "--chi", "1", "--kappa", "0", "--E", "3", "--horizon", "2",
                     "--format", "csv"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 2002u);
  EXPECT_EQ(rows[0], "t,h0,h1,h2,R11,R22,detN");
  EXPECT_EQ(rows[1].rfind("0,", 0), 0u);
}

TEST(CliTest, ConfigFileWithFlagPrecedence) {
  const auto path = temp_file("run.cfg");
  std::ofstream(path) << "# Heisenberg\nchi = 0\nkappa = 0\nh0 = 4  # overridden below\n";
  const CliRun from_file = run({"lie3d-tc", "--config", path.string()});
  const CliRun overridden = run({"lie3d-tc", "--config", path.string(), "--h0", "2"});
  std::filesystem::remove(path);
  ASSERT_EQ(from_file.code, kExitOk) << from_file.err;
  ASSERT_EQ(overridden.code, kExitOk) << overridden.err;
  EXPECT_NEAR(from_file.json()["tc"].get<double>(), std::numbers::pi / 2.0, 1e-12);
  EXPECT_NEAR(overridden.json()["tc"].get<double>(), std::numbers::pi, 1e-12);
}

TEST(CliTest, ToleranceOverridesReachTheSolver) {
  const CliRun coarse = run({"lq-tc", "--kappas", "1,0", "--refine", "1e-3"});
  ASSERT_EQ(coarse.code, kExitOk) << coarse.err;
  const Json j = coarse.json();
  EXPECT_LE(j["t_hi"].get<double>() - j["t_lo"].get<double>(), 1e-3);
  EXPECT_EQ(run({"lq-tc", "--kappas", "1,0", "--rel", "0"}).code, kExitUsage);
}

TEST(ParseTest, ListsAndMatrices) {
  EXPECT_EQ(parse_number_list("1, 2.5,-3"), (std::vector<double>{1.0, 2.5, -3.0}));
  EXPECT_EQ(parse_number_list("0:1:3"), (std::vector<double>{0.0, 0.5, 1.0}));
  EXPECT_THROW(parse_number_list("0:1"), std::invalid_argument);
  EXPECT_THROW(parse_number_list("1,,2"), std::invalid_argument);
  Matrix want(2, 2);
  want << 1, 2, 3, 4;
  EXPECT_EQ(parse_matrix("1,2;3,4"), want);
  EXPECT_EQ(parse_matrix("[[1,2],[3,4]]"), want);
  EXPECT_THROW(parse_matrix("1,2;3"), std::invalid_argument);
}

}  // namespace
}  // namespace conjtime
