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

#include <json.hpp>

#include "nmk/csquashed.hpp"
#include "nmk/entropy.hpp"
#include "nmk/markov.hpp"
#include "nmk/nmf.hpp"
#include "nmk/scenario.hpp"

namespace nmk {

using Json = nlohmann::json;

/// {"re": [[...]], "im": [[...]]}, row-major; "im" may be omitted.
Json matrix_to_json(const CMat& m);
CMat matrix_from_json(const Json& j);

Json layout_to_json(const RegisterLayout& layout);
RegisterLayout layout_from_json(const Json& j);

/// {"registers": [...], "matrix": {...}}. Reading validates the state and
/// reports the violated invariant (InvalidState) or the malformed field
/// (ParseError).
Json state_to_json(const DensityState& s);
DensityState state_from_json(const Json& j);

/// {"dims": {"a","b","el","er"}, "entries": [{"p", "sigma", "tau"}]}.
Json components_to_json(const MarkovComponents& c);
MarkovComponents components_from_json(const Json& j);

/// One of {"kraus": [M...], "inverse": channel}, {"unitary": M},
/// {"isometry": M}, {"identity": d}, {"dephase": d}, {"discard": d},
/// {"prepare": M}, {"mixed_unitary": {"probs": [...], "unitaries": [M...]}}.
ChannelMap channel_from_json(const Json& j);
Json channel_to_json(const ChannelMap& c);

/// {"steps": [{"kind", "on", "out", "channel", "discard", "register", "to",
/// "route", "measurement", "source", "message", "bypass"}]}. A measurement is
/// a list of matrices or {"computational": d}.
std::vector<Step> script_from_json(const Json& j);
Json step_to_json(const Step& s);

Json witness_to_json(const Witness& w);
Json entropy_report_to_json(const EntropyReport& r);
Json markov_score_to_json(const MarkovScore& s);
Json ledger_to_json(const CostLedger& l);
Json script_run_to_json(const ScriptRun& run);
Json nmf_estimate_to_json(const NmfEstimate& e);
Json esqc_estimate_to_json(const EsqcEstimate& e);

/// Reads and parses a JSON file; ParseError on I/O or syntax problems.
Json read_json_file(const std::string& path);

}  // namespace nmk
