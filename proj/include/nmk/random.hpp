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
#include <random>
#include <variant>
#include <vector>

#include "nmk/qstate.hpp"

namespace nmk {

/// splitmix64 of (master, counter); used for every per-restart and
/// per-trial seed so results do not depend on scheduling.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
  Complex cnormal() {
    const double re = normal();
    return {re, normal()};
  }
  /// Uniform integer in [0, n).
  long index(long n) { return std::uniform_int_distribution<long>(0, n - 1)(engine_); }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

/// Matrix of i.i.d. standard complex Gaussians.
CMat gaussian_matrix(Rng& rng, long rows, long cols);

/// Haar isometry (out x in) via QR of a Gaussian matrix with the R-diagonal
/// phases removed.
CMat random_isometry(Rng& rng, long out, long in);
CMat random_unitary(Rng& rng, long d);
/// Random Hermitian matrix with unit Frobenius norm.
CMat random_hermitian(Rng& rng, long d);

PureState random_pure(Rng& rng, const RegisterLayout& layout);

/// Hilbert-Schmidt measure G G^dag / tr; `rank` = 0 means full rank.
DensityState random_density_hs(Rng& rng, const RegisterLayout& layout, long rank = 0);

/// Channel from the Stinespring isometry in -> out (x) n_kraus.
ChannelMap random_channel(Rng& rng, long in, long out, long n_kraus);

/// Measurement with `outcomes` Kraus operators on a d-dimensional input.
std::vector<CMat> random_instrument(Rng& rng, long d, long outcomes);

/// Probability vector from normalized Exp(1) draws.
std::vector<double> random_probabilities(Rng& rng, long n);

enum class SampleKind { Pure, DensityHs, Unitary, Isometry };

using Sample = std::variant<PureState, DensityState, CMat>;

/// For pure/density_hs `dims` are register dims (labels S0, S1, ...); for
/// unitary a single dim; for isometry {in, out}.
Sample sample(SampleKind kind, const std::vector<long>& dims, std::uint64_t seed);

}  // namespace nmk
