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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "nmk/markov.hpp"
#include "nmk/scenario.hpp"

namespace nmk {

/// Raw JSON text of data/zoo.json.
const char* zoo_manifest_json();

using ZooParams = std::map<std::string, std::string>;

struct ZooEntryInfo {
  std::string name;
  std::string kind;  // state | components | script
  std::string description;
  std::map<std::string, std::string> defaults;
  std::optional<double> m_i;
  std::map<std::string, double> m_i_by_class;
};

const std::vector<ZooEntryInfo>& zoo_catalog();

struct ScriptCase {
  DensityState initial;
  std::vector<Step> steps;
};

using ZooValue = std::variant<DensityState, MarkovComponents, ScriptCase>;

/// Deterministic per (name, params, seed). Errors: UnknownName, BadParams.
ZooValue zoo(const std::string& name, const ZooParams& params = {}, std::uint64_t seed = 0);

/// A state view of any entry: components are built, scripts are run.
DensityState zoo_state(const std::string& name, const ZooParams& params = {},
                       std::uint64_t seed = 0);

struct ZooRef {
  std::string name;
  ZooParams params;
  std::uint64_t seed = 0;
};

/// Parses "zoo:name?key=value&seed=n" (the "zoo:" prefix is required).
ZooRef parse_zoo_ref(std::string_view ref);
bool is_zoo_ref(std::string_view ref);

}  // namespace nmk
