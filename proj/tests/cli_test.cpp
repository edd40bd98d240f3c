#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "lowtail/cli.hpp"

using namespace lowtail;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "lowtail");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "lowtail_cli_test";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

TEST(Cli, TailEmitsEstimateWithProvenance) {
  const Result r = run_cli({"tail", "--spec", "rgg:alpha=0,t=1", "--n", "6", "--a", "1.18", "--trials", "2000",
                            "--seed", "7"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j.at("trials"), 2000);
  EXPECT_EQ(j.at("seed"), 7);
  EXPECT_GT(j.at("p_hat").get<double>(), 0.1);
  EXPECT_LT(j.at("p_hat").get<double>(), 0.4);
  EXPECT_EQ(j.at("ci95").size(), 2u);
}

TEST(Cli, ParameterErrorsExitOneWithJson) {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"tail", "--spec", "rgg:alpha=0,t=1", "--a", "1"},
           {"tail", "--spec", "bogus", "--a", "1", "--seed", "1"},
           {"tail", "--spec", "rgg:alpha=0,t=1", "--seed", "1"},
           {"sample", "--n", "abc", "--seed", "1"},
           {"frobnicate"},
           {}}) {
    const Result r = run_cli(args);
    EXPECT_EQ(r.code, 1);
    ASSERT_FALSE(r.err.empty());
    const json e = json::parse(r.err.substr(0, r.err.find('\n')));
    EXPECT_TRUE(e.contains("error"));
  }
}

TEST(Cli, RenderExhaustionExitsTwo) {
  const auto prefix = (temp_dir() / "exhaust").string();
  const Result r = run_cli({"render", "--n", "4", "--conditioned", "0", "--max-attempts", "5", "--seed", "3",
                            "--palm-trials", "10", "--out", prefix});
  EXPECT_EQ(r.code, 2);
  const json e = json::parse(r.err);
  EXPECT_EQ(e.at("error"), "exhaustion");
  EXPECT_EQ(e.at("attempts"), 5);
}

TEST(Cli, VerifyReportsViolationWithExitThree) {
  const Result bad = run_cli({"verify", "--suite", "weak-decreasing", "--trials", "200", "--seed", "1"});
  EXPECT_EQ(bad.code, 3);
  const Result good = run_cli({"verify", "--suite", "angles", "--trials", "20", "--seed", "1"});
  EXPECT_EQ(good.code, 0) << good.err;
  std::istringstream lines(good.out);
  std::string line, last;
  while (std::getline(lines, line)) last = line;
  EXPECT_TRUE(json::parse(last).at("pass").get<bool>());
}

TEST(Cli, OutputIndependentOfWorkers) {
  for (const std::vector<std::string>& base : std::vector<std::vector<std::string>>{
           {"tail", "--spec", "knn:k=2,alpha=1", "--n", "4", "--a", "1", "--trials", "200", "--seed", "5"},
           {"rate-bound", "--spec", "rgg:alpha=0,t=1", "--a", "0.785", "--lambda-lo", "0.3", "--lambda-hi", "1.5",
            "--trials", "30", "--seed", "5"},
           {"verify", "--suite", "stabilization", "--trials", "20", "--seed", "5"}}) {
    std::vector<std::string> outs;
    for (const char* w : {"1", "2", "8"}) {
      auto args = base;
      args.push_back("--workers");
      args.push_back(w);
      const Result r = run_cli(args);
      EXPECT_NE(r.code, 1) << r.err;
      outs.push_back(r.out);
    }
    EXPECT_EQ(outs[0], outs[1]) << base[0];
    EXPECT_EQ(outs[0], outs[2]) << base[0];
  }
}

TEST(Cli, ConfigFileWithFlagOverride) {
  const auto cfg = temp_dir() / "run.ini";
  std::ofstream(cfg) << "spec = \"rgg:alpha=0,t=1\"\nn = 4\na = 1.0\ntrials = 100\nseed = 11\n";
  const Result from_file = run_cli({"tail", "--config", cfg.string()});
  ASSERT_EQ(from_file.code, 0) << from_file.err;
  EXPECT_EQ(json::parse(from_file.out).at("trials"), 100);
  const Result overridden = run_cli({"tail", "--config", cfg.string(), "--trials", "50"});
  ASSERT_EQ(overridden.code, 0) << overridden.err;
  EXPECT_EQ(json::parse(overridden.out).at("trials"), 50);
  EXPECT_EQ(json::parse(overridden.out).at("seed"), 11);
}

TEST(Cli, SampleThenScoreRoundTrip) {
  const auto file = temp_dir() / "cfg.json";
  const Result s = run_cli({"sample", "--n", "4", "--margin", "1", "--seed", "2", "--out", file.string()});
  ASSERT_EQ(s.code, 0) << s.err;
  const Result sc = run_cli({"score", "--spec", "rgg:alpha=0,t=1", "--n", "4", "--input", file.string()});
  ASSERT_EQ(sc.code, 0) << sc.err;
  const json j = json::parse(sc.out);
  EXPECT_GE(j.at("h_n").get<double>(), 0);

  const auto text = temp_dir() / "cfg.txt";
  std::ofstream(text) << "2 2 4\n0 0\n0.5 0\n";
  const Result t = run_cli({"score", "--spec", "rgg:alpha=0,t=1", "--n", "4", "--input", text.string()});
  ASSERT_EQ(t.code, 0) << t.err;
  EXPECT_DOUBLE_EQ(json::parse(t.out).at("h_n").get<double>(), 1.0 / 16);
}

TEST(Cli, RenderWritesDeterministicSvgs) {
  const auto p1 = (temp_dir() / "r1").string(), p2 = (temp_dir() / "r2").string();
  for (const auto& p : {p1, p2}) {
    const Result r = run_cli({"render", "--spec", "rgg:alpha=0,t=1", "--n", "6", "--conditioned", "0.75", "--seed",
                              "3", "--palm-trials", "50", "--out", p});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  for (const char* suffix : {"_typical.svg", "_conditioned.svg"}) {
    const std::string a = slurp(p1 + suffix), b = slurp(p2 + suffix);
    EXPECT_FALSE(a.empty());
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.rfind("<svg", 0), 0u);
    EXPECT_NE(a.find("<line"), std::string::npos);
    EXPECT_NE(a.find("<circle"), std::string::npos);
  }
  EXPECT_NE(slurp(p1 + "_conditioned.svg").find("a = "), std::string::npos);
}

TEST(Cli, RateCurveWritesCsv) {
  const auto csv = temp_dir() / "curve.csv";
  const Result r = run_cli({"rate-curve", "--spec", "zero", "--a", "0.5", "--n-list", "2,3", "--margin", "1",
                            "--trials", "100", "--seed", "4", "--csv", csv.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string body = slurp(csv);
  EXPECT_EQ(body.substr(0, body.find('\n')), "n,a,trials,hits,p_hat,ci_lo,ci_hi,rate");
  EXPECT_EQ(std::count(body.begin(), body.end(), '\n'), 3);
}

TEST(Cli, CalibrateL) {
  const Result r = run_cli({"calibrate-L", "--n", "4", "--M", "6", "--L-list", "2,12", "--trials", "20", "--seed", "9"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  std::vector<json> rows;
  while (std::getline(lines, line)) rows.push_back(json::parse(line));
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_DOUBLE_EQ(rows[1].at("fraction").get<double>(), 1.0);
}
