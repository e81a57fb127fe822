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

#include <optional>
#include <string>
#include <vector>

#include "nmk/nmf.hpp"

namespace nmk {

struct AbMember {
  double p;
  DensityState sigma;  // Alice and Bob registers only
};

/// 1/2 sum_k p_k I(A:B)_{sigma_k}. Errors: BadEnsemble.
double esqc_objective(const std::vector<AbMember>& ensemble);

struct EsqcConfig {
  long e_prime = 1;  // kept environment per member; 1 gives pure members
  long k = 0;        // 0 means rank(omega)
  SearchConfig search;
};

struct EsqcEstimate {
  double upper_bits;
  double singleton_bits;  // 1/2 I(A:B) of omega itself
  std::vector<AbMember> ensemble;
  std::optional<double> msq_upper_bits;
  std::vector<RestartResult> restarts;  // matrices cleared
  /// Twice the upper bound: a single-copy bound on the dilution cost.
  double dilution_single_copy_bits() const { return 2.0 * upper_bits; }
};

/// Upper bound from decompositions produced by measuring the purifying
/// reference (isometry R -> E'K, then dephasing K). The singleton
/// decomposition is always a candidate. Requires only Alice/Bob registers
/// (LayoutMismatch) and d_A d_B <= 64 (BadDims).
EsqcEstimate estimate_esqc(const DensityState& omega, const EsqcConfig& config);

/// {p_k, Tr_{A'B'EE'} phi_k}: an ensemble for the AB marginal whose
/// objective is at most the witness objective.
std::vector<AbMember> ensemble_from_witness(const Witness& w);

struct Extension {
  DensityState state;  // omega's registers + "E~" + "K~" (Eve)
  Witness witness;     // members |phi_k>|k>, objective = esqc_objective
};

/// Classical-flag extension sum_k p_k phi_k (x) |k><k| with phi_k a
/// purification of sigma_k on AB E~.
Extension extension_from_ensemble(const std::vector<AbMember>& ensemble);

struct Lemma5Config {
  EsqcConfig esqc;
  NmfConfig nmf;
};

struct Lemma5Report {
  double esqc_ub;
  double msq_ub;
  double gap;
  std::vector<NmfCandidate> extensions;  // name and nmf upper bound
};

/// Compares the c-squashed bound with nmf bounds over a fixed family of
/// extensions: omega (x) |0>, the purification, and the classical-flag
/// extension of the best ensemble found. The gap is reported only.
Lemma5Report lemma5_check(const DensityState& omega, const Lemma5Config& config);

}  // namespace nmk
