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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nmk/serialize.hpp"

namespace nmk {

enum class FuzzSuite { Ssa, Lemma1, PSuite, MarkovClosure };

std::string_view to_string(FuzzSuite s);
FuzzSuite fuzz_suite_from_string(std::string_view s);

struct FuzzConfig {
  FuzzSuite suite = FuzzSuite::Ssa;
  /// ssa, markov_closure, p_suite: total trials. lemma1: trials per class.
  long trials = 100;
  std::uint64_t seed = 0;
  int jobs = 1;
  /// ssa only: fixed (d_A, d_B, d_E); otherwise every sixth trial uses
  /// (2,2,4) and the rest (2,2,2).
  std::optional<std::vector<long>> dims;
};

struct FuzzCheck {
  std::string name;
  long passed = 0;
  long failed = 0;
  double worst = 0.0;  // largest violation margin seen (negative when all pass)
};

struct Counterexample {
  std::string check;
  long trial;
  std::uint64_t trial_seed;
  double value;
  double bound;
  Json detail;  // state and step, or the witnesses involved
};

struct FuzzReport {
  FuzzSuite suite;
  long trials;
  std::vector<FuzzCheck> checks;
  std::vector<Counterexample> counterexamples;
  /// Recorded instances relevant to an open question; never failures.
  std::vector<Json> observations;

  long passed() const;
  long failed() const;
};

/// Runs a property suite. Trials are independent, seeded by
/// derive_seed(seed, trial), and merged in trial order, so the report does
/// not depend on `jobs`.
FuzzReport run_fuzz(const FuzzConfig& config);

Json fuzz_report_to_json(const FuzzReport& r);

/// The eleven step classes exercised by the lemma1 suite.
const std::vector<std::string>& lemma1_classes();

}  // namespace nmk
