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

#include <string>
#include <vector>

#include "nmk/markov.hpp"
#include "nmk/optimize.hpp"
#include "nmk/qstate.hpp"

namespace nmk {

/// Dimensions of the extension registers A', B', E' and of the flag K.
struct ExtDims {
  long a = 1;
  long b = 1;
  long e = 1;
  long k = 1;

  long ext() const { return a * b * e; }
  bool operator==(const ExtDims&) const = default;
};

inline const std::string kAPrime = "A'";
inline const std::string kBPrime = "B'";
inline const std::string kEPrime = "E'";
inline const std::string kFlag = "K";

struct WitnessMember {
  double weight;
  CVec amplitudes;  // on target (x) A' (x) B' (x) E'
};

/// Feasible point of the witness infimum: an ensemble {p_k, |phi_k>} on the
/// target registers plus A', B', E'. The target registers carry party tags
/// Alice/Bob/Eve, which fix the groups A, B, E.
class Witness {
 public:
  /// Validates labels (A', B', E', K reserved: LayoutClash), parties, member
  /// norms and weights (BadEnsemble), and members.size() <= ext.k.
  Witness(RegisterLayout target, ExtDims ext, std::vector<WitnessMember> members);

  const RegisterLayout& target() const { return target_; }
  const ExtDims& ext() const { return ext_; }
  const std::vector<WitnessMember>& members() const { return members_; }

  /// target + A'(Alice) + B'(Bob) + E'(Eve).
  RegisterLayout member_layout() const;
  PureState member_state(std::size_t k) const;

  /// sum_k p_k Tr_{A'B'E'} phi_k, on the target layout.
  DensityState reduced() const;

  /// The classical-flag state sum_k p_k phi_k (x) |k><k|^K on
  /// target + A' + B' + E' + K (K tagged Reference).
  DensityState realize() const;

  /// 1/2 [I(AA':BB'|K) + I(AB:E'K|E)] on the flagged state, from marginal
  /// spectra of the members.
  double objective() const;

 private:
  RegisterLayout target_;
  ExtDims ext_;
  std::vector<WitnessMember> members_;
};

/// The same objective through ensemble terms:
/// 1/2 [S(AB|E)_rho + sum_k p_k (S(AA') + S(BB') - S(A'B'))_{phi_k}].
struct FormationTerms {
  double s_ab_given_e;
  double ensemble_term;
  double value;
};
FormationTerms formation_terms(const Witness& w);

/// W maps the purifying reference R (dim rank rho) into A'B'E'K; the K
/// index is least significant. Errors: DimensionTooSmall, InvalidChannel
/// (W not an isometry), DimensionMismatch.
Witness witness_from_isometry(const DensityState& rho, const CMat& w, const ExtDims& ext);

/// (i) B' purifies, all else trivial; (ii) the mirror with A'.
std::vector<Witness> baseline_witnesses(const DensityState& rho);

/// Zero-objective witness for build_markov(c).
Witness markov_witness(const MarkovComponents& c);

struct NmfConfig {
  ExtDims ext{1, 1, 1, 0};  // k = 0 means rank(rho)
  SearchConfig search;
  /// Second stage at A'B'E' = 2x2x2 with restarts/4 when the first stage
  /// leaves a gap and the size fits the budget.
  bool escalate = true;
  double tol = 1e-6;  // gap below which the bracket counts as certified
  std::vector<Witness> seeds;
};

struct NmfTraceEntry {
  int stage;
  int restart_id;
  double objective;
  int iterations;
  bool exhausted;
  ExtDims ext;
};

struct NmfCandidate {
  std::string name;
  double objective;
};

struct NmfEstimate {
  double lower_bits;
  double upper_bits;
  Witness best;
  std::string best_source;
  std::vector<NmfCandidate> candidates;
  std::vector<NmfTraceEntry> trace;
  bool exhausted = false;  // some restart ran out of iterations
  double s_a = 0.0;
  double s_b = 0.0;

  double gap() const { return upper_bits - lower_bits; }
};

/// Bracket [M_I, best witness objective]. Errors: DimensionTooSmall,
/// BudgetExceeded, LayoutMismatch (seed for another state).
NmfEstimate estimate_nmf(const DensityState& rho, const NmfConfig& config);

/// 4 sqrt(eps) log2(dA dB) + 3 (1 + sqrt(eps)) h(sqrt(eps) / (1 + sqrt(eps))).
double continuity_bound(double eps, long dim_a, long dim_b);

/// Product ensemble for rho (x) sigma. Target labels must be disjoint.
Witness witness_tensor(const Witness& w1, const Witness& w2);

struct MixPart {
  double weight;
  Witness witness;
};

/// Witness for sum_m r_m rho_m (x) |m><m|^M with M (label `m_label`) an Eve
/// register after the target registers.
Witness witness_mix(const std::vector<MixPart>& parts, const std::string& m_label = "M");

/// Same ensemble with one target register moved to another party.
Witness witness_retag(const Witness& w, const std::string& label, Party p);

/// Moves an Alice register into Eve's group. The objective cannot increase.
Witness witness_regroup(const Witness& w, const std::string& label);

/// Moves an Eve register of dimension d into Alice's group; the objective
/// rises by at most log2 d.
Witness witness_move_to_alice(const Witness& w, const std::string& label);

/// Transports a witness through an isometry V on Eve registers `on`.
Witness witness_apply_eve_isometry(const Witness& w, const CMat& v, const Labels& on,
                                   const RegisterLayout& out);

/// Transports a witness through a channel on Alice (or Bob) registers; the
/// Stinespring environment joins A' (or B'). The result is a witness for
/// the output state whose objective is no larger.
Witness witness_apply_local(const Witness& w, const ChannelMap& c, const Labels& on,
                            const RegisterLayout& out, Party p);

struct TensorPowerBracket {
  double lower_bits;        // M_I(rho), additive
  double single_upper;      // estimate on rho
  double two_copy_upper;    // estimate on rho (x) rho, halved
};

/// n = 2 bracket; total dimension of rho (x) rho at most 64.
TensorPowerBracket tensor_power_bracket(const DensityState& rho, const NmfConfig& config);

}  // namespace nmk
