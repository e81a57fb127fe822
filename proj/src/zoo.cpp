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

#include "nmk/zoo.hpp"

#include <cmath>

#include <json.hpp>

#include "nmk/error.hpp"
#include "nmk/random.hpp"

namespace nmk {
namespace {

const ZooEntryInfo& info(const std::string& name) {
  for (const auto& e : zoo_catalog()) {
    if (e.name == name) return e;
  }
  throw Error(Errc::UnknownName, "no zoo entry '" + name + "'");
}

// Defaults overridden by `params`; unknown keys are rejected.
std::map<std::string, std::string> resolve(const ZooEntryInfo& e, const ZooParams& params) {
  std::map<std::string, std::string> out = e.defaults;
  for (const auto& [k, v] : params) {
    if (!out.count(k)) {
      throw Error(Errc::BadParams, "entry '" + e.name + "' has no parameter '" + k + "'");
    }
    out[k] = v;
  }
  return out;
}

long as_long(const std::map<std::string, std::string>& p, const std::string& key, long min) {
  const std::string& s = p.at(key);
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty() || v < min) {
    throw Error(Errc::BadParams, "parameter '" + key + "' must be an integer >= " +
                                     std::to_string(min) + ", got '" + s + "'");
  }
  return v;
}

DensityState from_diagonal(const RegisterLayout& layout,
                           const std::vector<std::pair<std::vector<long>, double>>& terms) {
  CMat m = CMat::Zero(layout.total_dim(), layout.total_dim());
  for (const auto& [digits, p] : terms) m += p * basis_state(layout, digits).matrix();
  return DensityState(layout, std::move(m));
}

DensityState from_vector(const RegisterLayout& layout, CVec v) {
  v.normalize();
  return DensityState(layout, v * v.adjoint());
}

CMat pauli_x() {
  CMat x = CMat::Zero(2, 2);
  x(0, 1) = x(1, 0) = 1.0;
  return x;
}

ScriptCase example_script(const std::string& cls) {
  ScriptCase sc{dummy_state(2), {}};
  if (cls == "LE_minus_RE") {
    sc.initial = zoo_state("ghz_diag");
    Step s;
    s.kind = StepKind::ReversibleE;
    s.bypass = true;
    s.on = {"E"};
    s.channel = ChannelMap::mixed_unitary({0.5, 0.5}, {CMat::Identity(2, 2), pauli_x()});
    s.out = RegisterLayout({{"E", 2, Party::Eve}});
    sc.steps.push_back(s);
  } else if (cls == "QEA" || cls == "QEB") {
    const bool alice = cls == "QEA";
    const RegisterLayout layout({{"A", 2, Party::Alice}, {"B", 2, Party::Bob},
                                 {"E", 2, Party::Eve}, {"E'", 2, Party::Eve}});
    // Bell pair between E' and the receiver's partner register.
    CVec v = CVec::Zero(16);
    for (long x = 0; x < 2; ++x) {
      const long a = alice ? 0 : x;
      const long b = alice ? x : 0;
      v(((a * 2 + b) * 2 + 0) * 2 + x) = 1.0;
    }
    sc.initial = from_vector(layout, v);
    Step send;
    send.kind = StepKind::QuantumFromE;
    send.reg = "E'";
    send.to = alice ? Party::Alice : Party::Bob;
    sc.steps.push_back(send);
    Step drop;
    drop.kind = alice ? StepKind::LocalA : StepKind::LocalB;
    drop.discard = {alice ? "A" : "B"};
    sc.steps.push_back(drop);
  } else if (cls == "SAB") {
    Step coin;
    coin.kind = StepKind::LocalA;
    coin.channel = ChannelMap::prepare(CMat::Identity(2, 2) / 2.0);
    coin.out = RegisterLayout({{"C", 2, Party::Alice}});
    sc.steps.push_back(coin);
    Step secret;
    secret.kind = StepKind::SecretAB;
    secret.route = Route::AToB;
    secret.on = {"C"};
    secret.message = "s";
    for (long i = 0; i < 2; ++i) {
      CMat proj = CMat::Zero(2, 2);
      proj(i, i) = 1.0;
      secret.measurement.push_back(proj);
    }
    sc.steps.push_back(secret);
    Step drop_a;
    drop_a.kind = StepKind::LocalA;
    drop_a.discard = {"A", "C"};
    sc.steps.push_back(drop_a);
    Step drop_b;
    drop_b.kind = StepKind::LocalB;
    drop_b.discard = {"B"};
    sc.steps.push_back(drop_b);
  } else if (cls == "QAB") {
    const RegisterLayout layout({{"A", 2, Party::Alice}, {"A2", 2, Party::Alice},
                                 {"B", 2, Party::Bob}, {"E", 2, Party::Eve}});
    CVec v = CVec::Zero(16);
    v(0) = 1.0;                  // |0000>
    v(((1 * 2 + 1) * 2) * 2) = 1.0;  // |1100>
    sc.initial = from_vector(layout, v);
    Step send;
    send.kind = StepKind::QuantumAB;
    send.route = Route::AToB;
    send.reg = "A2";
    sc.steps.push_back(send);
    Step drop;
    drop.kind = StepKind::LocalB;
    drop.discard = {"B"};
    sc.steps.push_back(drop);
  } else {
    throw Error(Errc::BadParams, "unknown script class '" + cls + "'");
  }
  return sc;
}

}  // namespace

const std::vector<ZooEntryInfo>& zoo_catalog() {
  static const std::vector<ZooEntryInfo> catalog = [] {
    const auto j = nlohmann::json::parse(zoo_manifest_json());
    std::vector<ZooEntryInfo> out;
    for (const auto& e : j.at("entries")) {
      ZooEntryInfo info;
      info.name = e.at("name").get<std::string>();
      info.kind = e.at("kind").get<std::string>();
      info.description = e.value("description", "");
      for (const auto& [k, v] : e.at("params").items()) {
        info.defaults[k] = v.is_string() ? v.get<std::string>() : v.dump();
      }
      if (e.contains("m_i")) info.m_i = e.at("m_i").get<double>();
      if (e.contains("m_i_by_class")) {
        for (const auto& [k, v] : e.at("m_i_by_class").items())
          info.m_i_by_class[k] = v.get<double>();
      }
      out.push_back(std::move(info));
    }
    return out;
  }();
  return catalog;
}

ZooValue zoo(const std::string& name, const ZooParams& params, std::uint64_t seed) {
  const ZooEntryInfo& e = info(name);
  const auto p = resolve(e, params);
  const RegisterLayout qubits = abe_layout(2, 2, 2);
  const RegisterLayout ab({{"A", 2, Party::Alice}, {"B", 2, Party::Bob}});

  if (name == "ghz_diag") return from_diagonal(qubits, {{{0, 0, 0}, 0.5}, {{1, 1, 1}, 0.5}});
  if (name == "ghz_xmix") {
    return from_diagonal(qubits, {{{0, 0, 0}, 0.25}, {{0, 0, 1}, 0.25},
                                  {{1, 1, 0}, 0.25}, {{1, 1, 1}, 0.25}});
  }
  if (name == "bell_e0") {
    CVec v = CVec::Zero(8);
    v(0) = v(6) = 1.0;
    return from_vector(qubits, v);
  }
  if (name == "classical_corr_e0") {
    return from_diagonal(qubits, {{{0, 0, 0}, 0.5}, {{1, 1, 0}, 0.5}});
  }
  if (name == "dummy") return dummy_state(as_long(p, "dim", 1));
  if (name == "bell") {
    CVec v = CVec::Zero(4);
    v(0) = v(3) = 1.0;
    return from_vector(ab, v);
  }
  if (name == "classical_corr") return from_diagonal(ab, {{{0, 0}, 0.5}, {{1, 1}, 0.5}});
  if (name == "product_pure") return from_diagonal(ab, {{{0, 0}, 1.0}});
  if (name == "markov_random") {
    Rng rng(seed);
    return random_markov_components(rng, as_long(p, "entries", 1), as_long(p, "dim_a", 1),
                                    as_long(p, "dim_b", 1), as_long(p, "dim_el", 1),
                                    as_long(p, "dim_er", 1));
  }
  if (name == "hs_random") {
    Rng rng(seed);
    return random_density_hs(
        rng, abe_layout(as_long(p, "dim_a", 1), as_long(p, "dim_b", 1), as_long(p, "dim_e", 1)),
        as_long(p, "rank", 0));
  }
  if (name == "pure_random") {
    Rng rng(seed);
    return random_pure(rng, abe_layout(as_long(p, "dim_a", 1), as_long(p, "dim_b", 1),
                                       as_long(p, "dim_e", 1)))
        .density();
  }
  if (name == "example_script") return example_script(p.at("class"));
  throw Error(Errc::UnknownName, "no builder for zoo entry '" + name + "'");
}

DensityState zoo_state(const std::string& name, const ZooParams& params, std::uint64_t seed) {
  ZooValue v = zoo(name, params, seed);
  if (auto* s = std::get_if<DensityState>(&v)) return *s;
  if (auto* c = std::get_if<MarkovComponents>(&v)) return build_markov(*c);
  const auto& sc = std::get<ScriptCase>(v);
  return run_script({sc.initial, {}}, sc.steps).final.state;
}

bool is_zoo_ref(std::string_view ref) { return ref.rfind("zoo:", 0) == 0; }

ZooRef parse_zoo_ref(std::string_view ref) {
  if (!is_zoo_ref(ref)) throw Error(Errc::ParseError, "zoo references start with 'zoo:'");
  ref.remove_prefix(4);
  ZooRef out;
  const auto q = ref.find('?');
  out.name = std::string(ref.substr(0, q));
  if (out.name.empty()) throw Error(Errc::ParseError, "missing zoo entry name");
  if (q == std::string_view::npos) return out;
  std::string_view rest = ref.substr(q + 1);
  while (!rest.empty()) {
    const auto amp = rest.find('&');
    const std::string_view kv = rest.substr(0, amp);
    const auto eq = kv.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw Error(Errc::ParseError, "expected key=value in '" + std::string(kv) + "'");
    }
    const std::string key(kv.substr(0, eq));
    const std::string value(kv.substr(eq + 1));
    if (key == "seed") {
      try {
        std::size_t used = 0;
        out.seed = std::stoull(value, &used);
        if (used != value.size() || value.find_first_not_of("0123456789") != std::string::npos)
          throw std::invalid_argument(value);
      } catch (const std::exception&) {
        throw Error(Errc::ParseError, "seed must be a non-negative integer");
      }
    } else {
      out.params[key] = value;
    }
    if (amp == std::string_view::npos) break;
    rest.remove_prefix(amp + 1);
  }
  return out;
}

}  // namespace nmk
