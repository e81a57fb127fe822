// Copyright 2026 The nmk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "nmk/cli.hpp"
#include "nmk/serialize.hpp"
#include "nmk/zoo.hpp"

namespace nmk {
namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
  Json report() const { return Json::parse(out); }
};

CliResult run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) { return testing::TempDir() + name; }

TEST(Cli, AnalyzeBellPair) {
  const CliResult r = run({"analyze", "zoo:bell_e0"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Json j = r.report();
  EXPECT_EQ(j.at("command"), "analyze");
  EXPECT_NEAR(j.at("results").at("entropies").at("M_I").get<double>(), 1.0, 1e-9);
  EXPECT_EQ(j.at("results").at("markov").at("verdict"), "non-markov");
  EXPECT_TRUE(j.at("timings").contains("wall_ms"));
}

TEST(Cli, AnalyzeCustomPartition) {
  const CliResult r = run({"analyze", "zoo:ghz_diag", "--a", "A", "--b", "E", "--e", "B"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.report().at("results").at("markov").at("verdict"), "markov");
}

TEST(Cli, InputErrorsExitTwo) {
  const std::string bad = temp_path("nmk_cli_bad_state.json");
  Json j = state_to_json(zoo_state("bell_e0"));
  j["matrix"]["re"][0][0] = 1.5;
  std::ofstream(bad) << j.dump();
  const CliResult r = run({"analyze", bad});
  EXPECT_EQ(r.code, kExitInput);
  EXPECT_NE(r.err.find("trace"), std::string::npos) << r.err;
  std::remove(bad.c_str());

  EXPECT_EQ(run({"analyze", "/nonexistent.json"}).code, kExitInput);
  EXPECT_EQ(run({"analyze", "zoo:nope"}).code, kExitInput);
  EXPECT_EQ(run({"frobnicate"}).code, kExitInput);
  EXPECT_EQ(run({"nmf"}).code, kExitInput);
  EXPECT_EQ(run({"fuzz", "nonsense"}).code, kExitInput);
  EXPECT_EQ(run({"nmf", "zoo:bell_e0", "--restarts", "0"}).code, kExitInput);
  EXPECT_EQ(run({"analyze", "zoo:bell_e0", "--a", "A", "--b", "A"}).code, kExitInput);
}

TEST(Cli, BudgetExitThree) {
  const char* old = std::getenv("NMK_DIM_BUDGET");
  const std::string saved = old ? old : "";
  setenv("NMK_DIM_BUDGET", "4", 1);
  const CliResult r = run({"analyze", "zoo:bell_e0"});
  if (old) {
    setenv("NMK_DIM_BUDGET", saved.c_str(), 1);
  } else {
    unsetenv("NMK_DIM_BUDGET");
  }
  EXPECT_EQ(r.code, kExitBudget) << r.err;
}

TEST(Cli, NmfIsDeterministicPerSeed) {
  const std::vector<std::string> args{"nmf", "zoo:hs_random?rank=2&seed=3", "--seed", "11",
                                      "--restarts", "4", "--max-iters", "100"};
  const CliResult a = run(args);
  ASSERT_EQ(a.code, kExitOk) << a.err;
  const CliResult b = run(args);
  std::vector<std::string> threaded = args;
  threaded.insert(threaded.end(), {"--jobs", "3"});
  const CliResult c = run(threaded);
  const std::string ra = a.report().at("results").dump();
  EXPECT_EQ(ra, b.report().at("results").dump());
  EXPECT_EQ(ra, c.report().at("results").dump());
  EXPECT_EQ(a.report().at("seed").get<std::uint64_t>(), 11u);
}

TEST(Cli, NmfReportsDrawnSeed) {
  const CliResult r = run({"nmf", "zoo:bell_e0", "--restarts", "2"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto seed = r.report().at("seed").get<std::uint64_t>();
  EXPECT_NE(r.err.find(std::to_string(seed)), std::string::npos) << r.err;
}

TEST(Cli, NmfBrackets) {
  const CliResult bell = run({"nmf", "zoo:bell_e0", "--seed", "1"});
  ASSERT_EQ(bell.code, kExitOk);
  const Json rb = bell.report().at("results");
  EXPECT_NEAR(rb.at("lower_bits").get<double>(), 1.0, 1e-9);
  EXPECT_NEAR(rb.at("upper_bits").get<double>(), 1.0, 1e-6);
  EXPECT_EQ(rb.at("status"), "CERTIFIED");
  const CliResult cc = run({"nmf", "zoo:classical_corr_e0", "--k", "2", "--seed", "1"});
  const Json rc = cc.report().at("results");
  EXPECT_NEAR(rc.at("lower_bits").get<double>(), 0.5, 1e-9);
  EXPECT_LE(rc.at("upper_bits").get<double>(), 0.5 + 1e-3);
}

TEST(Cli, NmfSeedsMarkovWitnessForComponents) {
  const CliResult r = run({"nmf", "zoo:markov_random?seed=4", "--seed", "2", "--restarts", "2"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(r.report().at("config").at("seeded_markov_witness").get<bool>());
  EXPECT_LE(r.report().at("results").at("upper_bits").get<double>(), 1e-6);
}

TEST(Cli, Esqc) {
  const CliResult r = run({"esqc", "zoo:bell", "--seed", "1"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NEAR(r.report().at("results").at("upper_bits").get<double>(), 1.0, 1e-6);
  const CliResult c = run({"esqc", "zoo:classical_corr", "--seed", "1"});
  EXPECT_LE(c.report().at("results").at("upper_bits").get<double>(), 1e-3);
}

TEST(Cli, ScriptClassifiesAndCosts) {
  const CliResult r = run({"script", "zoo:example_script?class=QEA"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Json res = r.report().at("results");
  EXPECT_EQ(res.at("classification"), "OmegaQ");
  EXPECT_DOUBLE_EQ(res.at("ledger").at("qc_bits").get<double>(), 1.0);
  EXPECT_NEAR(res.at("final_M_I").get<double>(), 1.0, 1e-9);
}

TEST(Cli, ScriptFromFile) {
  const std::string path = temp_path("nmk_cli_script.json");
  std::ofstream(path) << R"({"steps": [{"kind": "BroadcastA", "on": ["A"],
                              "measurement": {"computational": 2}}]})";
  const CliResult r = run({"script", path, "zoo:bell_e0"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.report().at("results").at("classification"), "Omega");
  EXPECT_NEAR(r.report().at("results").at("final_M_I").get<double>(), 0.0, 1e-9);
  std::remove(path.c_str());
}

TEST(Cli, MarkovBuildRoundTrip) {
  const std::string path = temp_path("nmk_cli_markov.json");
  const CliResult b = run({"markov-build", "zoo:markov_random?seed=2", "--out", path});
  ASSERT_EQ(b.code, kExitOk) << b.err;
  const CliResult a = run({"analyze", path});
  ASSERT_EQ(a.code, kExitOk) << a.err;
  EXPECT_EQ(a.report().at("results").at("markov").at("verdict"), "markov");
  std::remove(path.c_str());
}

TEST(Cli, FuzzSmallSuites) {
  const CliResult r = run({"fuzz", "ssa", "--trials", "30", "--seed", "5"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.report().at("results").at("passed").get<long>(), 30);
  const CliResult again = run({"fuzz", "ssa", "--trials", "30", "--seed", "5", "--jobs", "2"});
  EXPECT_EQ(r.report().at("results").dump(), again.report().at("results").dump());
  const CliResult d = run({"fuzz", "ssa", "--trials", "4", "--dims", "3,2,2", "--seed", "5"});
  EXPECT_EQ(d.code, kExitOk) << d.err;
}

TEST(Cli, CsvOutput) {
  const std::string path = temp_path("nmk_cli.csv");
  const CliResult r = run({"fuzz", "ssa", "--trials", "3", "--seed", "1", "--csv", path});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  EXPECT_FALSE(header.empty());
  std::remove(path.c_str());
}

TEST(Cli, Zoo) {
  const CliResult list = run({"zoo", "list"});
  ASSERT_EQ(list.code, kExitOk);
  EXPECT_EQ(list.report().at("results").at("entries").size(), zoo_catalog().size());
  const CliResult show = run({"zoo", "show", "zoo:bell"});
  ASSERT_EQ(show.code, kExitOk) << show.err;
  EXPECT_EQ(run({"zoo", "show", "zoo:missing"}).code, kExitInput);
}

}  // namespace
}  // namespace nmk
