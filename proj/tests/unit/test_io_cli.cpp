#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tmlog/cli.hpp"
#include "tmlog/error.hpp"
#include "tmlog/io.hpp"

using namespace tmlog;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("tmlog_test_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

void write(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

int run_cli(const std::vector<std::string>& args, std::string* out_text = nullptr, std::string* err_text = nullptr) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return code;
}

}  // namespace

TEST(Csv, RoundTripIsBitwise) {
  TempDir t;
  const SampledFunction u =
      sample(make_interval_grid(257, 1.0, true), [](double x) { return std::exp(-x * x) / 3.0 + 1e-300; });
  save_function(t.file("u.csv"), u);
  const SampledFunction v = load_function(t.file("u.csv"));
  ASSERT_EQ(u.size(), v.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    EXPECT_EQ(u.grid()[i], v.grid()[i]);
    EXPECT_EQ(u[i], v[i]);
  }
}

TEST(Csv, MissingHeaderNamesLineOne) {
  try {
    parse_function("0,1\n1,2\n2,3\n", "f.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::io);
    EXPECT_NE(std::string(e.what()).find("line 1"), std::string::npos);
  }
}

TEST(Csv, MalformedRowNamesLine) {
  try {
    parse_function("x,value\n0,1\n1,two\n2,3\n", "f.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
  EXPECT_THROW(parse_function("x,value\n0,1\n0,2\n1,3\n"), Error);
  EXPECT_THROW(parse_function("x,value\n0,1,2\n"), Error);
}

TEST(Json, ReportHasSchemaVersion) {
  TempDir t;
  save_report(t.file("r.json"), {{"a", 1.5}});
  const json j = load_report(t.file("r.json"));
  EXPECT_EQ(j.at("schema_version").get<int>(), 1);
  EXPECT_EQ(j.at("a").get<double>(), 1.5);
  EXPECT_FALSE(fs::exists(t.file("r.json.tmp")));
}

TEST(Json, StateRoundTrip) {
  MaximizerState s;
  s.grid = make_interval_grid(5, 1.0, false);
  s.growth = "power:2";
  s.coefficients = {0.0, 0.5, 1.0, 0.5, 0.0};
  s.phi = 0.25;
  s.theta = 1.5;
  s.history.push_back({0, 0.1, 0.9});
  const MaximizerState r = state_from_json(json::parse(to_json(s).dump()));
  EXPECT_EQ(r.grid.nodes(), s.grid.nodes());
  EXPECT_EQ(r.coefficients, s.coefficients);
  EXPECT_EQ(r.growth, s.growth);
  EXPECT_EQ(r.theta, s.theta);
  ASSERT_EQ(r.history.size(), 1u);
  EXPECT_THROW(state_from_json(json{{"grid", {1, 2, 3}}}), Error);
}

TEST(Stiffness, CsvHeaderIsSize) {
  TempDir t;
  save_stiffness_csv(t.file("q.csv"), stiffness_matrix(make_interval_grid(5, 1.0, false)));
  std::ifstream in(t.file("q.csv"));
  std::string first;
  std::getline(in, first);
  EXPECT_EQ(first, "5");
}

TEST(Cli, VerifyConstants) {
  std::string out;
  EXPECT_EQ(run_cli({"verify-constants"}, &out), 0);
  const json j = json::parse(out);
  EXPECT_NEAR(j.at("C_1_half").get<double>(), 0.3183098861837907, 1e-12);
  EXPECT_EQ(j.at("schema_version").get<int>(), 1);
  EXPECT_FALSE(j.at("findings").empty());
}

TEST(Cli, FunctionalOfZero) {
  TempDir t;
  write(t.file("zero.csv"), "x,value\n-1,0\n0,0\n1,0\n");
  std::string out;
  EXPECT_EQ(run_cli({"functional", "--input", t.file("zero.csv"), "--growth", "power:2"}, &out), 0);
  EXPECT_EQ(json::parse(out).at("phi").at("phi").get<double>(), 0.0);
}

TEST(Cli, IdentityCheckFindingsDoNotFail) {
  std::string out;
  EXPECT_EQ(run_cli({"identity-check", "--plateau"}, &out), 0);
  const json j = json::parse(out);
  EXPECT_FALSE(j.at("records").empty());
  EXPECT_FALSE(j.at("findings").empty());
}

TEST(Cli, UsageErrorsExitTwo) {
  std::string err;
  EXPECT_EQ(run_cli({"functional", "--bogus"}, nullptr, &err), 2);
  EXPECT_FALSE(err.empty());
  EXPECT_EQ(run_cli({}), 2);
  TempDir t;
  write(t.file("bad.csv"), "x,value\n0,1\n1,zz\n2,0\n");
  EXPECT_EQ(run_cli({"functional", "--input", t.file("bad.csv")}, nullptr, &err), 2);
  EXPECT_NE(err.find("line 3"), std::string::npos);
}

TEST(Cli, MaximizeThenElCheck) {
  TempDir t;
  EXPECT_EQ(run_cli({"maximize", "--grid", "65", "--out", t.file("state.json"), "--csv", t.file("u.csv")}), 0);
  const json s = load_report(t.file("state.json"));
  EXPECT_EQ(s.at("schema_version").get<int>(), 1);
  EXPECT_EQ(s.at("growth").get<std::string>(), "power:2");
  EXPECT_EQ(s.at("function").at("x").size(), 65u);
  EXPECT_EQ(run_cli({"el-check", "--state", t.file("state.json"), "--out", t.file("el.json")}), 0);
  EXPECT_LE(load_report(t.file("el.json")).at("residual_w").get<double>(), 0.05);
  std::string out;
  EXPECT_EQ(run_cli({"moving-plane", "--input", t.file("u.csv"), "--lambda-min", "-0.5", "--lambda-max", "0.5"}, &out),
            0);
  EXPECT_LE(json::parse(out).at("symmetry_score").get<double>(), 1e-6);
}

TEST(Cli, DeterministicReports) {
  std::string a, b;
  run_cli({"maximize", "--grid", "33", "--seed", "3"}, &a);
  run_cli({"maximize", "--grid", "33", "--seed", "3"}, &b);
  EXPECT_EQ(a, b);
}
