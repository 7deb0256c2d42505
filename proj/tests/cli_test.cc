// Copyright 2026 The squeezelab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>

#include "gtest/gtest.h"
#include "json.hpp"
#include "squeezelab/cli/commands.h"
#include "squeezelab/cli/config.h"
#include "squeezelab/cli/output.h"

namespace squeezelab::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path TestDir() {
  const auto* info = testing::UnitTest::GetInstance()->current_test_info();
  fs::path dir = fs::temp_directory_path() /
                 (std::string("squeezelab_cli_") + info->test_suite_name() + "_" +
                  info->name());
  fs::remove_all(dir);
  return dir;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

json Doc(const fs::path& out, json extra = json::object()) {
  json doc = {{"output", {{"dir", out.string()}, {"prefix", "run"}}}};
  doc.merge_patch(extra);
  return doc;
}

void CollectLeaves(const json& j, const std::string& path, std::set<std::string>* out) {
  if (j.is_object()) {
    for (const auto& item : j.items()) {
      CollectLeaves(item.value(), path.empty() ? item.key() : path + "." + item.key(), out);
    }
  } else {
    out->insert(path);
  }
}

TEST(ConfigTest, UnknownKeysRejectedWithPath) {
  try {
    ParseConfig(json{{"squeeze", {{"rr", 0.5}}}});
    FAIL() << "no throw";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("squeeze.rr"), std::string::npos) << e.what();
  }
  EXPECT_THROW(ParseConfig(json{{"bogus", 1}}), ConfigError);
  EXPECT_THROW(ParseConfig(json{{"metrology", {{"t", {{"step", 1}}}}}}), ConfigError);
  EXPECT_THROW(ParseConfig(json{{"seed", -1}}), ConfigError);
  EXPECT_THROW(ParseConfig(json{{"layout", {{"cutoff", 2.5}}}}), ConfigError);
  EXPECT_THROW(ParseConfig(json{{"squeeze", 3}}), ConfigError);
  EXPECT_THROW(ParseConfig(json::array()), ConfigError);
}

TEST(ConfigTest, FrequencySugar) {
  EXPECT_DOUBLE_EQ(ParseFrequency(json("2pi*6.8e3"), "x"), 2 * std::numbers::pi * 6.8e3);
  EXPECT_DOUBLE_EQ(ParseFrequency(json(1234.5), "x"), 1234.5);
  for (const char* bad : {"6.8e3", "2pi*", "2pi*abc", "2pi*1e3Hz", "2*pi*1e3"}) {
    EXPECT_THROW(ParseFrequency(json(bad), "x"), ConfigError) << bad;
  }
  const auto c = ParseConfig(json{{"reservoir", {{"omega", {"2pi*1e3", 5.0}}}},
                                  {"sideband", {{"omega", "2pi*2e3"}}}});
  EXPECT_DOUBLE_EQ(c.reservoir.omega[0], 2 * std::numbers::pi * 1e3);
  EXPECT_DOUBLE_EQ(c.reservoir.omega[1], 5.0);
  EXPECT_DOUBLE_EQ(c.sideband.omega, 2 * std::numbers::pi * 2e3);
}

TEST(ConfigTest, EchoIsCompleteAndReparses) {
  ExperimentConfig c = ParseConfig(json::object());
  c.Resolve();
  c.Validate();
  const json echo = c.ToJson();
  EXPECT_EQ(echo["layout"]["cutoff"], 16);
  EXPECT_EQ(echo["metrology"]["qfi_cutoff"], QfiCutoff(0.79));
  EXPECT_NEAR(echo["constants"]["trap_frequency_1"].get<double>(),
              2 * std::numbers::pi * 1.12e6, 1e-6);
  EXPECT_EQ(echo["reservoir"]["omega"].size(), 2u);

  ExperimentConfig again = ParseConfig(echo);
  again.Resolve();
  EXPECT_EQ(again.ToJson(), echo);

  std::set<std::string> leaves;
  CollectLeaves(echo, "", &leaves);
  for (const char* key : {"seed", "threads", "layout.spins", "squeeze.phi",
                          "reservoir.drift_sigma", "metrology.t.spacing",
                          "sideband.exponent", "three_mode.ideal_cutoff",
                          "output.wall_clock", "constants.lamb_dicke_2"}) {
    EXPECT_TRUE(leaves.count(key)) << key;
  }
}

TEST(ConfigTest, ValidationInvariants) {
  auto check = [](json doc) {
    ExperimentConfig c = ParseConfig(doc);
    c.Resolve();
    c.Validate();
  };
  EXPECT_NO_THROW(check(json::object()));
  EXPECT_THROW(check({{"layout", {{"cutoff", 10}}}}), ConfigError);
  EXPECT_NO_THROW(check({{"layout", {{"cutoff", 10}, {"allow_truncated_cutoff", true}}}}));
  EXPECT_THROW(check({{"reservoir", {{"omega", -1.0}}}}), ConfigError);
  EXPECT_THROW(check({{"metrology", {{"omega_plus", -2.0}}}}), ConfigError);
  EXPECT_THROW(check({{"sideband", {{"omega", -2.0}}}}), ConfigError);
  EXPECT_THROW(check({{"sideband", {{"model", "quad"}}}}), ConfigError);
  EXPECT_THROW(check({{"squeeze", {{"r", -0.1}}}}), ConfigError);
  EXPECT_THROW(check({{"reservoir", {{"omega", {1.0, 2.0, 3.0}}}}}), ConfigError);
  EXPECT_THROW(check({{"output", {{"prefix", "a/b"}}}}), ConfigError);
}

TEST(ConfigTest, HashIgnoresOutputOnly) {
  auto hash = [](json doc) {
    ExperimentConfig c = ParseConfig(doc);
    c.Resolve();
    return c.Hash();
  };
  const std::string base = hash(json::object());
  EXPECT_EQ(base.size(), 16u);
  EXPECT_EQ(base, hash(json::object()));
  EXPECT_EQ(base, hash({{"output", {{"dir", "elsewhere"}}}, {"threads", 4}}));
  EXPECT_NE(base, hash({{"seed", 1}}));
  EXPECT_EQ(Fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(Fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(ConfigTest, CutoffHelpers) {
  EXPECT_EQ(ThermalCutoff(0.2), 7);
  EXPECT_EQ(QfiCutoff(0.0), 1);
  EXPECT_GT(QfiCutoff(0.79), 16);
}

TEST(OutputTest, CommitWritesAllOrNothing) {
  const fs::path dir = TestDir();
  OutputSet ok(dir.string());
  ok.Add("a.txt", "alpha");
  ok.Add("b.txt", "beta");
  EXPECT_THROW(ok.Add("a.txt", "again"), Error);
  EXPECT_EQ(ok.Commit().size(), 2u);
  EXPECT_EQ(Slurp(dir / "b.txt"), "beta");

  fs::create_directories(dir / "blocked");
  OutputSet bad(dir.string());
  bad.Add("c.txt", "gamma");
  bad.Add("blocked", "cannot replace a directory");
  EXPECT_THROW(bad.Commit(), IoError);
  for (const auto& entry : fs::directory_iterator(dir)) {
    EXPECT_EQ(entry.path().string().find(".tmp"), std::string::npos)
        << entry.path();
  }
  EXPECT_FALSE(fs::exists(dir / "c.txt"));
  EXPECT_EQ(CsvComment("0123"), "# squeezelab 0.1.0 config_hash=0123\n");
}

TEST(ParallelForTest, CoversEveryIndexAndRethrows) {
  std::vector<int> hits(50, 0);
  ParallelFor(50, 4, [&](int i) { hits[i] += 1; });
  for (int h : hits) EXPECT_EQ(h, 1);
  EXPECT_THROW(ParallelFor(10, 3,
                           [](int i) {
                             if (i == 7) throw NumericalError("boom");
                           }),
               NumericalError);
}

TEST(QfiCommandTest, ReportsAnalyticAndNumeric) {
  const fs::path dir = TestDir();
  const auto res = RunCommand("qfi", Doc(dir));
  ASSERT_EQ(res.exit_code, 0) << res.error;
  const json& p = res.report["payload"];
  EXPECT_NEAR(p["analytic"][0][0].get<double>(), 2 * std::exp(1.58), 1e-12);
  EXPECT_LE(p["max_relative_deviation"].get<double>(), 1e-4);
  EXPECT_NEAR(p["trace_inverse"].get<double>(), std::exp(-1.58), 1e-6);

  const std::string csv = Slurp(dir / "run_qfi.csv");
  const std::string comment = CsvComment(res.report["config_hash"]);
  ASSERT_EQ(csv.substr(0, comment.size()), comment);
  EXPECT_EQ(csv.substr(comment.size(), 24), "quantity,analytic,numeri");
  EXPECT_TRUE(fs::exists(dir / "run_qfi.json"));

  const auto zero = RunCommand("qfi", Doc(dir, {{"squeeze", {{"r", 0.0}}}}));
  ASSERT_EQ(zero.exit_code, 0) << zero.error;
  EXPECT_NEAR(zero.report["payload"]["numeric"][0][0].get<double>(), 2.0, 1e-12);
  EXPECT_NEAR(zero.report["payload"]["numeric"][1][1].get<double>(), 2.0, 1e-12);
}

TEST(EstimateCommandTest, ColumnsSlopeAndVacuum) {
  const fs::path dir = TestDir();
  const auto res = RunCommand("estimate", Doc(dir, {{"metrology", {{"trials", 10000}}}}));
  ASSERT_EQ(res.exit_code, 0) << res.error;
  const std::string csv = Slurp(dir / "run_estimate.csv");
  EXPECT_NE(csv.find("\nt,var_plus,var_minus,var_analytic,db_plus,db_minus\n"),
            std::string::npos);
  const json& p = res.report["payload"];
  EXPECT_NEAR(p["slope_plus"].get<double>(), -2.0, 0.05);
  EXPECT_NEAR(p["slope_minus"].get<double>(), -2.0, 0.05);
  EXPECT_NEAR(p["analytic_db"].get<double>(), 6.86, 0.005);

  // db sd per point at 200 trials is 10 log10(e) sqrt(2/199) = 0.44; the
  // mean over 2 x 8 points has sd 0.11.
  const auto vac = RunCommand("estimate", Doc(dir, {{"squeeze", {{"r", 0.0}}}}));
  ASSERT_EQ(vac.exit_code, 0) << vac.error;
  const double m = 0.5 * (vac.report["payload"]["db_plus"]["mean"].get<double>() +
                          vac.report["payload"]["db_minus"]["mean"].get<double>());
  EXPECT_NEAR(m, 0.0, 0.35);
}

TEST(DeterminismTest, ByteIdenticalReruns) {
  const fs::path dir = TestDir();
  const json sideband = {{"sideband", {{"source", "populations"},
                                       {"populations", {0.91, 0.03, 0.03, 0.01, 0.02}}}},
                         {"seed", 11}};
  for (const std::string cmd : {"estimate", "qfi", "sideband-simulate"}) {
    const json doc = Doc(dir, sideband);
    const auto first = RunCommand(cmd, doc);
    ASSERT_EQ(first.exit_code, 0) << cmd << ": " << first.error;
    std::vector<std::string> before;
    for (const auto& f : first.files) before.push_back(Slurp(f));
    const auto second = RunCommand(cmd, doc);
    ASSERT_EQ(second.files, first.files);
    for (std::size_t i = 0; i < before.size(); ++i) {
      EXPECT_EQ(Slurp(second.files[i]), before[i]) << first.files[i];
    }
  }
  const auto fit = RunCommand(
      "sideband-fit",
      Doc(dir, {{"sideband", {{"curves", {(dir / "run_curve.csv").string()}}}}}));
  ASSERT_EQ(fit.exit_code, 0) << fit.error;
  const std::string report = Slurp(dir / "run_sideband_fit.json");
  ASSERT_EQ(RunCommand("sideband-fit",
                       Doc(dir, {{"sideband", {{"curves", {(dir / "run_curve.csv").string()}}}}}))
                .exit_code,
            0);
  EXPECT_EQ(Slurp(dir / "run_sideband_fit.json"), report);
}

TEST(DeterminismTest, ThreadCountDoesNotChangeEstimates) {
  const fs::path dir = TestDir();
  ASSERT_EQ(RunCommand("estimate", Doc(dir / "one")).exit_code, 0);
  ASSERT_EQ(RunCommand("estimate", Doc(dir / "four", {{"threads", 4}})).exit_code, 0);
  EXPECT_EQ(Slurp(dir / "one" / "run_estimate.csv"),
            Slurp(dir / "four" / "run_estimate.csv"));
}

TEST(PrepareCommandTest, ZeroCyclesIsThermal) {
  const fs::path dir = TestDir();
  const auto res = RunCommand("prepare", Doc(dir, {{"reservoir", {{"cycles", 0}}}}));
  ASSERT_EQ(res.exit_code, 0) << res.error;
  EXPECT_NEAR(res.report["payload"]["epr"]["delta_epr"].get<double>(), 1.4, 1e-8);
  const std::string csv = Slurp(dir / "run_trajectory.csv");
  EXPECT_NE(csv.find("\ncycle,F_lower,F_exact,P0K1,P0K2,trace_deficit\n"), std::string::npos);
}

TEST(ExitCodeTest, ConfigErrorsWriteNothing) {
  const fs::path dir = TestDir();
  const auto res = RunCommand("prepare", Doc(dir, {{"layout", {{"cutoff", 8}}}}));
  EXPECT_EQ(res.exit_code, kExitConfig);
  EXPECT_NE(res.error.find("N_min"), std::string::npos) << res.error;
  EXPECT_FALSE(fs::exists(dir));
  EXPECT_EQ(RunCommand("prepare", Doc(dir, {{"extra", 1}})).exit_code, kExitConfig);
  EXPECT_EQ(RunCommand("nonsense", Doc(dir)).exit_code, kExitConfig);
  EXPECT_FALSE(fs::exists(dir));
}

TEST(ExitCodeTest, TruncationEscalatesWithoutFiles) {
  const fs::path dir = TestDir();
  // At the default cutoff (16) the quarter-period run leaves 5e-3 on the top
  // two Fock levels.
  const auto res = RunCommand("prepare", Doc(dir, {{"reservoir", {{"cycles", 3}}}}));
  EXPECT_EQ(res.exit_code, kExitNumerical) << res.error;
  EXPECT_FALSE(fs::exists(dir));
}

TEST(ExitCodeTest, IoFailures) {
  const fs::path dir = TestDir();
  fs::create_directories(dir);
  std::ofstream(dir / "file") << "x";
  EXPECT_EQ(RunCommand("qfi", Doc(dir / "file" / "sub")).exit_code, kExitIo);
  const auto missing = RunCommand(
      "sideband-fit", Doc(dir, {{"sideband", {{"curves", {(dir / "none.csv").string()}}}}}));
  EXPECT_EQ(missing.exit_code, kExitIo);
}

TEST(SidebandCommandTest, MalformedCurveHasLineAndColumn) {
  const fs::path dir = TestDir();
  fs::create_directories(dir);
  std::ofstream(dir / "bad.csv") << "t,p_down,shots\n0,0.5,200\n1e-5,abc,200\n";
  const auto res = RunCommand(
      "sideband-fit", Doc(dir / "out", {{"sideband", {{"curves", {(dir / "bad.csv").string()}}}}}));
  EXPECT_EQ(res.exit_code, kExitConfig);
  EXPECT_NE(res.error.find("bad.csv:3:2"), std::string::npos) << res.error;
  EXPECT_FALSE(fs::exists(dir / "out"));
}

TEST(SidebandCommandTest, FlatCurveIsFlaggedNotFatal) {
  const fs::path dir = TestDir();
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "flat.csv");
    out << "t,p_down,shots\n";
    for (int i = 0; i < 61; ++i) out << i * 500e-6 / 60 << ",0.5,200\n";
  }
  const auto res = RunCommand(
      "sideband-fit", Doc(dir, {{"sideband", {{"curves", {(dir / "flat.csv").string()}}}}}));
  EXPECT_EQ(res.exit_code, kExitNumerical);
  EXPECT_EQ(res.report["status"], "failed");
  EXPECT_TRUE(fs::exists(dir / "run_sideband_fit.json"));
  ASSERT_FALSE(res.report["warnings"].empty());
  EXPECT_EQ(res.report["warnings"][0]["kind"], "non-convergence");
}

TEST(SidebandCommandTest, SimulateFitRoundTripGivesFidelityBound) {
  const fs::path dir = TestDir();
  const json base = {{"sideband", {{"source", "populations"},
                                   {"populations", {0.91, 0.03, 0.03, 0.01, 0.02}},
                                   {"repetitions", 0}}}};
  ASSERT_EQ(RunCommand("sideband-simulate", Doc(dir, base)).exit_code, 0);
  json fit = base;
  fit["sideband"]["curves"] = {(dir / "run_curve.csv").string(),
                               (dir / "run_curve.csv").string()};
  const auto res = RunCommand("sideband-fit", Doc(dir, fit));
  ASSERT_EQ(res.exit_code, 0) << res.error;
  const json& p = res.report["payload"];
  EXPECT_NEAR(p["fits"][0]["populations"][0].get<double>(), 0.91, 1e-6);
  EXPECT_NEAR(p["fidelity_lower_bound"].get<double>(), 0.91 * 0.91, 1e-5);
}

TEST(SidebandCommandTest, IdealTwoModeSourceUsesJointPopulations) {
  const fs::path dir = TestDir();
  const auto res = RunCommand(
      "sideband-simulate",
      Doc(dir, {{"sideband", {{"model", "fock2d"}, {"points", 6}, {"repetitions", 0}}}}));
  ASSERT_EQ(res.exit_code, 0) << res.error;
  const json& pops = res.report["payload"]["curves"][0]["populations"];
  ASSERT_EQ(pops.size(), 25u);
  const double lambda = std::tanh(0.79);
  for (int n = 0; n <= 4; ++n) {
    const double expect = std::pow(lambda, 2 * n) / std::pow(std::cosh(0.79), 2);
    EXPECT_NEAR(pops[n * 5 + n].get<double>(), expect, 1e-6);
  }
  EXPECT_EQ(pops[1].get<double>(), 0.0);
}

TEST(ThreeModeCommandTest, IdealChecksAndTruncatedReservoir) {
  const fs::path dir = TestDir();
  const auto res = RunCommand("three-mode", Doc(dir, {{"three_mode", {{"cycles", 1}}}}));
  ASSERT_EQ(res.exit_code, 0) << res.error;
  const json& p = res.report["payload"];
  for (const auto& k : p["ideal"]["k_norms"]) EXPECT_LE(k.get<double>(), 1e-5);
  EXPECT_NEAR(p["ideal"]["epr"]["delta_epr"].get<double>(), 0.778, 1e-3);
  EXPECT_TRUE(p["reservoir"]["truncated"].get<bool>());
  EXPECT_TRUE(fs::exists(dir / "run_three_mode_trajectory.csv"));
}

}  // namespace
}  // namespace squeezelab::cli
