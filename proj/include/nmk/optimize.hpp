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
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "nmk/linalg.hpp"

namespace nmk {

struct SearchConfig {
  int restarts = 16;
  int max_iters = 300;
  double initial_step = 0.5;
  double min_step = 1e-6;
  double decay = 0.6;
  double growth = 1.3;
  std::uint64_t seed = 0;
  int jobs = 1;
  /// A restart stops as soon as its cost is at or below this value.
  double target = -std::numeric_limits<double>::infinity();
};

struct RestartResult {
  int restart_id;
  double objective;
  int iterations;
  bool exhausted;  // hit max_iters before the step size collapsed
  CMat w;
};

using IsometryCost = std::function<double(const CMat&)>;

/// Derivative-free local search over isometries W (out x in):
/// W <- exp(i s H) W for a random unit-norm Hermitian H, keep if better,
/// try -s on failure, shrink s geometrically when both fail.
///
/// Restart 0 starts from `first` (identity embedding when absent), the others
/// from Haar isometries. Restart r uses derive_seed(seed, stream * 4096 + r)
/// and the output is ordered by restart id, independent of `jobs`.
std::vector<RestartResult> minimize_over_isometries(const IsometryCost& cost, long out,
                                                    long in, const SearchConfig& config,
                                                    std::uint64_t stream = 0,
                                                    const std::optional<CMat>& first = {});

/// Index of the best result: min by (objective, restart_id).
std::size_t best_restart(const std::vector<RestartResult>& results);

/// Runs f(i) for i in [0, n) on up to `jobs` threads.
void parallel_for(int n, int jobs, const std::function<void(int)>& f);

}  // namespace nmk
