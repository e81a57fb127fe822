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

#include "nmk/markov.hpp"
#include "nmk/qstate.hpp"

namespace nmk {

struct CostLedger {
  double qc_bits = 0.0;     // quantum Eve -> Alice/Bob
  double cdown_bits = 0.0;  // classical Eve -> Alice/Bob

  CostLedger& operator+=(const CostLedger& o) {
    qc_bits += o.qc_bits;
    cdown_bits += o.cdown_bits;
    return *this;
  }
  bool operator==(const CostLedger&) const = default;
};

struct Scenario {
  DensityState state;
  CostLedger ledger;
};

enum class StepKind {
  LocalA,
  LocalB,
  ReversibleE,
  QuantumToE,
  QuantumFromE,
  BroadcastA,
  BroadcastB,
  ClassicalAE,
  ClassicalBE,
  SecretAB,
  QuantumAB,
};

enum class Route { AToE, EToA, BToE, EToB, AToB, BToA };

std::string_view to_string(StepKind k);
StepKind step_kind_from_string(std::string_view s);
std::string_view to_string(Route r);
/// Accepts "A->E", "E->A", ... (case-insensitive).
Route route_from_string(std::string_view s);

/// One operation of a script. Which fields matter depends on `kind`:
///
///   LocalA/LocalB/ReversibleE: `channel` on `on` producing `out` (parties
///     in `out` are overwritten with the acting party), or `discard`.
///   QuantumToE/QuantumFromE/QuantumAB: `reg` changes hands; `to` names the
///     receiver of QuantumFromE, `route` the direction of QuantumAB.
///   BroadcastA/B, ClassicalAE/BE with sender A or B, SecretAB: the sender
///     measures `on` with `measurement`; the outcome is copied into fresh
///     classical registers `<message>.X`, one per party that learns it.
///   ClassicalAE/BE with sender E: Eve copies the classical register
///     `source` to the receiver.
struct Step {
  StepKind kind = StepKind::LocalA;
  std::optional<ChannelMap> channel;
  Labels on;
  RegisterLayout out;
  Labels discard;
  std::string reg;
  Party to = Party::Alice;
  Route route = Route::AToE;
  std::vector<CMat> measurement;
  std::string source;
  std::string message;
  /// Apply a ReversibleE channel without the reversibility check; the
  /// script is then NonFree.
  bool bypass = false;
};

/// Applies one step. Errors: IrreversibleEveOp, DimensionMismatch,
/// LayoutMismatch (register held by the wrong party), UnknownLabel.
Scenario apply_step(const Scenario& sc, const Step& step);

enum class ScriptClass { Omega, OmegaStar, OmegaQ, NonFree };
std::string_view to_string(ScriptClass c);

/// Most specific class containing the script. A script mixing classical
/// Eve -> A/B messages with QuantumFromE is NonFree.
ScriptClass classify_script(const std::vector<Step>& steps);

struct StepRecord {
  StepKind kind;
  double mi_before;
  double mi_after;
  CostLedger cost;
};

struct ScriptRun {
  Scenario final;
  std::vector<StepRecord> records;
  ScriptClass cls;
};

/// M_I before/after each step uses the party tags of the current state.
ScriptRun run_script(const Scenario& sc, const std::vector<Step>& steps);

struct DilutionCost {
  std::vector<double> per_step_bits;
  double total_bits;
  double lemma6_bound;
};

/// Per round log2 ceil(sqrt(mu^l)); bound (l/2 + 1) sum log2 mu. Throws BadMu
/// for mu < 2 and BadRange for l < 1.
DilutionCost dilution_conversion_cost(const std::vector<long>& mu, long l);

/// |0><0| on A, B, E of dimension `dim` each.
DensityState dummy_state(long dim = 2);

/// Free script turning the dummy state into build_markov(c) (x) |0> on an
/// extra Eve register "E_anc": Alice draws J, broadcasts it, both prepare
/// their components conditioned on J, send E_L and E_R to Eve, discard J,
/// and Eve reorders her registers.
std::vector<Step> markov_preparation_script(const MarkovComponents& c, long dummy_dim = 2);

}  // namespace nmk
