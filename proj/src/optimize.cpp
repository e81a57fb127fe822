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

#include "nmk/optimize.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "nmk/random.hpp"

namespace nmk {

void parallel_for(int n, int jobs, const std::function<void(int)>& f) {
  const int workers = std::max(1, std::min(jobs, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

namespace {

RestartResult run_restart(const IsometryCost& cost, long out, long in,
                          const SearchConfig& cfg, int id, std::uint64_t seed,
                          const std::optional<CMat>& first) {
  Rng rng(seed);
  CMat w;
  if (id == 0) {
    w = first ? *first : CMat(CMat::Identity(out, in));
  } else {
    w = random_isometry(rng, out, in);
  }
  double f = cost(w);
  double step = cfg.initial_step;
  int it = 0;
  for (; it < cfg.max_iters && step >= cfg.min_step && f > cfg.target; ++it) {
    const CMat h = random_hermitian(rng, out);
    CMat trial = expi_hermitian(h, step) * w;
    double ft = cost(trial);
    if (ft >= f) {
      trial = expi_hermitian(h, -step) * w;
      ft = cost(trial);
    }
    if (ft < f) {
      w = std::move(trial);
      f = ft;
      step = std::min(1.0, step * cfg.growth);
    } else {
      step *= cfg.decay;
    }
  }
  const bool exhausted = it >= cfg.max_iters && step >= cfg.min_step && f > cfg.target;
  return {id, f, it, exhausted, std::move(w)};
}

}  // namespace

std::vector<RestartResult> minimize_over_isometries(const IsometryCost& cost, long out,
                                                    long in, const SearchConfig& config,
                                                    std::uint64_t stream,
                                                    const std::optional<CMat>& first) {
  const int n = std::max(1, config.restarts);
  std::vector<RestartResult> results(static_cast<std::size_t>(n));
  parallel_for(n, config.jobs, [&](int r) {
    const std::uint64_t seed =
        derive_seed(config.seed, stream * 4096 + static_cast<std::uint64_t>(r));
    results[static_cast<std::size_t>(r)] = run_restart(cost, out, in, config, r, seed, first);
  });
  return results;
}

std::size_t best_restart(const std::vector<RestartResult>& results) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < results.size(); ++i) {
    if (results[i].objective < results[best].objective) best = i;
  }
  return best;
}

}  // namespace nmk
