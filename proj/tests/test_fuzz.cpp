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

#include "nmk/error.hpp"
#include "nmk/fuzz.hpp"

namespace nmk {
namespace {

FuzzReport run(FuzzSuite suite, long trials, std::uint64_t seed, int jobs = 1) {
  FuzzConfig cfg;
  cfg.suite = suite;
  cfg.trials = trials;
  cfg.seed = seed;
  cfg.jobs = jobs;
  return run_fuzz(cfg);
}

TEST(Fuzz, SuiteNames) {
  for (auto s : {FuzzSuite::Ssa, FuzzSuite::Lemma1, FuzzSuite::PSuite, FuzzSuite::MarkovClosure})
    EXPECT_EQ(fuzz_suite_from_string(to_string(s)), s);
  EXPECT_EQ(fuzz_suite_from_string("p_suite"), FuzzSuite::PSuite);
  EXPECT_THROW(fuzz_suite_from_string("nope"), Error);
  EXPECT_EQ(lemma1_classes().size(), 11u);
}

TEST(Fuzz, SsaPasses) {
  const FuzzReport r = run(FuzzSuite::Ssa, 60, 1);
  EXPECT_EQ(r.failed(), 0);
  EXPECT_EQ(r.passed(), 60);
  EXPECT_TRUE(r.counterexamples.empty());
  ASSERT_EQ(r.checks.size(), 1u);
  EXPECT_LT(r.checks[0].worst, 0.0);
}

TEST(Fuzz, SsaFixedDims) {
  FuzzConfig cfg;
  cfg.trials = 10;
  cfg.dims = std::vector<long>{3, 2, 2};
  EXPECT_EQ(run_fuzz(cfg).failed(), 0);
}

TEST(Fuzz, Lemma1CountsTrialsPerClass) {
  const FuzzReport r = run(FuzzSuite::Lemma1, 2, 2);
  EXPECT_EQ(r.failed(), 0);
  long total = 0;
  for (const auto& c : r.checks)
    if (c.name.rfind("reversible_", 0) != 0) total += c.passed + c.failed;
  EXPECT_GE(total, 22);
}

TEST(Fuzz, ClosureAndPSuitePass) {
  EXPECT_EQ(run(FuzzSuite::MarkovClosure, 5, 3).failed(), 0);
  const FuzzReport p = run(FuzzSuite::PSuite, 2, 4);
  EXPECT_EQ(p.failed(), 0);
  EXPECT_GT(p.passed(), 20);
}

TEST(Fuzz, ReportIndependentOfJobs) {
  for (auto s : {FuzzSuite::Ssa, FuzzSuite::PSuite}) {
    const Json a = fuzz_report_to_json(run(s, 4, 9, 1));
    const Json b = fuzz_report_to_json(run(s, 4, 9, 3));
    EXPECT_EQ(a.dump(), b.dump()) << to_string(s);
  }
}

TEST(Fuzz, SeedChangesTrials) {
  const FuzzReport a = run(FuzzSuite::Ssa, 5, 1);
  const FuzzReport b = run(FuzzSuite::Ssa, 5, 2);
  EXPECT_NE(a.checks[0].worst, b.checks[0].worst);
}

}  // namespace
}  // namespace nmk
