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

#include <vector>

#include "nmk/qstate.hpp"
#include "nmk/random.hpp"

namespace nmk {

struct MarkovEntry {
  double p;
  DensityState sigma;  // on A (x) E_L
  DensityState tau;    // on B (x) E_R
};

/// Data of a Markov decomposition: sum_j p_j |j><j|^{E0} (x) sigma_j (x) tau_j.
/// Only the total dimensions of sigma and tau are used; their register
/// labels are ignored.
struct MarkovComponents {
  std::vector<MarkovEntry> entries;
  long dim_a = 1;
  long dim_b = 1;
  long dim_el = 1;
  long dim_er = 1;

  /// Throws InconsistentDims or BadProbabilities.
  void validate() const;
  long dim_e() const { return static_cast<long>(entries.size()) * dim_el * dim_er; }
};

/// State on A, B, E with E = E0 E_L E_R merged into one Eve register.
DensityState build_markov(const MarkovComponents& c);

/// Random components with Hilbert-Schmidt sigma_j, tau_j.
MarkovComponents random_markov_components(Rng& rng, long entries, long dim_a,
                                          long dim_b, long dim_el, long dim_er);

struct Recovery {
  DensityState state;  // on A u B u E, in the input's register order
  double raw_trace;    // trace before renormalization
};

/// Petz map E -> BE applied to rho^{AE}, with pseudo-inverses on supports.
Recovery petz_recover(const DensityState& s, const Labels& a, const Labels& b,
                      const Labels& e);

struct MarkovScore {
  double cqmi_bits;
  double recovery_fidelity;
  bool verdict;  // cqmi_bits <= tol
  double tol;
};

MarkovScore markov_score(const DensityState& s, const Labels& a, const Labels& b,
                         const Labels& e, double tol = tol::kMarkov);

}  // namespace nmk
