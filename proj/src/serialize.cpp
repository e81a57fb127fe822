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

#include "nmk/serialize.hpp"

#include <fstream>
#include <sstream>

#include "nmk/error.hpp"

namespace nmk {
namespace {

[[noreturn]] void parse_fail(const std::string& what) { throw Error(Errc::ParseError, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) parse_fail(std::string("missing field '") + key + "'");
  return j.at(key);
}

long as_long(const Json& j, const char* what) {
  if (!j.is_number_integer()) parse_fail(std::string(what) + " must be an integer");
  return j.get<long>();
}

Labels labels_from(const Json& j, const char* what) {
  if (j.is_null()) return {};
  if (!j.is_array()) parse_fail(std::string(what) + " must be an array of labels");
  Labels out;
  for (const auto& x : j) {
    if (!x.is_string()) parse_fail(std::string(what) + " must contain strings");
    out.push_back(x.get<std::string>());
  }
  return out;
}

std::vector<std::vector<double>> rows_of(const Json& j, const char* what) {
  if (!j.is_array()) parse_fail(std::string(what) + " must be an array of rows");
  std::vector<std::vector<double>> out;
  for (const auto& row : j) {
    if (!row.is_array()) parse_fail(std::string(what) + " rows must be arrays");
    std::vector<double> r;
    for (const auto& x : row) {
      if (!x.is_number()) parse_fail(std::string(what) + " entries must be numbers");
      r.push_back(x.get<double>());
    }
    out.push_back(std::move(r));
  }
  return out;
}

Json vector_to_json(const CVec& v) {
  Json re = Json::array(), im = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    re.push_back(v(i).real());
    im.push_back(v(i).imag());
  }
  return {{"re", re}, {"im", im}};
}

std::vector<CMat> matrices_from(const Json& j, const char* what) {
  if (!j.is_array()) parse_fail(std::string(what) + " must be an array of matrices");
  std::vector<CMat> out;
  for (const auto& m : j) out.push_back(matrix_from_json(m));
  return out;
}

}  // namespace

Json matrix_to_json(const CMat& m) {
  Json re = Json::array(), im = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json r = Json::array(), c = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      r.push_back(m(i, j).real());
      c.push_back(m(i, j).imag());
    }
    re.push_back(r);
    im.push_back(c);
  }
  return {{"re", re}, {"im", im}};
}

CMat matrix_from_json(const Json& j) {
  const auto re = rows_of(field(j, "re"), "matrix.re");
  std::vector<std::vector<double>> im;
  if (j.contains("im")) im = rows_of(j.at("im"), "matrix.im");
  const long rows = static_cast<long>(re.size());
  if (rows == 0) parse_fail("matrix has no rows");
  const long cols = static_cast<long>(re.front().size());
  if (!im.empty() && static_cast<long>(im.size()) != rows) parse_fail("re and im differ in shape");
  CMat m(rows, cols);
  for (long i = 0; i < rows; ++i) {
    if (static_cast<long>(re[i].size()) != cols) parse_fail("matrix rows differ in length");
    if (!im.empty() && static_cast<long>(im[i].size()) != cols)
      parse_fail("re and im differ in shape");
    for (long c = 0; c < cols; ++c) m(i, c) = Complex(re[i][c], im.empty() ? 0.0 : im[i][c]);
  }
  return m;
}

Json layout_to_json(const RegisterLayout& layout) {
  Json regs = Json::array();
  for (const auto& r : layout.registers()) {
    regs.push_back(
        {{"label", r.label}, {"dim", r.dim}, {"party", std::string(to_string(r.party))}});
  }
  return regs;
}

RegisterLayout layout_from_json(const Json& j) {
  if (!j.is_array()) parse_fail("registers must be an array");
  std::vector<Register> regs;
  for (const auto& r : j) {
    const Json& label = field(r, "label");
    if (!label.is_string()) parse_fail("register label must be a string");
    Register reg{label.get<std::string>(), as_long(field(r, "dim"), "register dim"),
                 Party::Reference};
    if (r.contains("party")) {
      if (!r.at("party").is_string()) parse_fail("party must be a string");
      reg.party = party_from_string(r.at("party").get<std::string>());
    }
    regs.push_back(std::move(reg));
  }
  return RegisterLayout(std::move(regs));
}

Json state_to_json(const DensityState& s) {
  return {{"registers", layout_to_json(s.layout())}, {"matrix", matrix_to_json(s.matrix())}};
}

DensityState state_from_json(const Json& j) {
  return DensityState(layout_from_json(field(j, "registers")),
                      matrix_from_json(field(j, "matrix")));
}

Json components_to_json(const MarkovComponents& c) {
  Json entries = Json::array();
  for (const auto& e : c.entries) {
    entries.push_back(
        {{"p", e.p}, {"sigma", state_to_json(e.sigma)}, {"tau", state_to_json(e.tau)}});
  }
  return {{"dims", {{"a", c.dim_a}, {"b", c.dim_b}, {"el", c.dim_el}, {"er", c.dim_er}}},
          {"entries", entries}};
}

MarkovComponents components_from_json(const Json& j) {
  MarkovComponents c;
  const Json& dims = field(j, "dims");
  c.dim_a = as_long(field(dims, "a"), "dims.a");
  c.dim_b = as_long(field(dims, "b"), "dims.b");
  c.dim_el = as_long(field(dims, "el"), "dims.el");
  c.dim_er = as_long(field(dims, "er"), "dims.er");
  const Json& entries = field(j, "entries");
  if (!entries.is_array()) parse_fail("entries must be an array");
  for (const auto& e : entries) {
    const Json& p = field(e, "p");
    if (!p.is_number()) parse_fail("p must be a number");
    c.entries.push_back({p.get<double>(), state_from_json(field(e, "sigma")),
                         state_from_json(field(e, "tau"))});
  }
  c.validate();
  return c;
}

ChannelMap channel_from_json(const Json& j) {
  if (!j.is_object()) parse_fail("channel must be an object");
  if (j.contains("kraus")) {
    ChannelMap c(matrices_from(j.at("kraus"), "kraus"));
    if (j.contains("inverse")) return c.with_inverse(channel_from_json(j.at("inverse")));
    return c;
  }
  if (j.contains("unitary")) return ChannelMap::unitary(matrix_from_json(j.at("unitary")));
  if (j.contains("isometry")) return ChannelMap::isometry(matrix_from_json(j.at("isometry")));
  if (j.contains("identity")) return ChannelMap::identity(as_long(j.at("identity"), "identity"));
  if (j.contains("dephase")) return ChannelMap::dephase(as_long(j.at("dephase"), "dephase"));
  if (j.contains("discard")) return ChannelMap::discard(as_long(j.at("discard"), "discard"));
  if (j.contains("prepare")) return ChannelMap::prepare(matrix_from_json(j.at("prepare")));
  if (j.contains("mixed_unitary")) {
    const Json& mu = j.at("mixed_unitary");
    const Json& probs = field(mu, "probs");
    if (!probs.is_array()) parse_fail("probs must be an array");
    std::vector<double> p;
    for (const auto& x : probs) p.push_back(x.get<double>());
    return ChannelMap::mixed_unitary(p, matrices_from(field(mu, "unitaries"), "unitaries"));
  }
  parse_fail("unrecognized channel description");
}

Json channel_to_json(const ChannelMap& c) {
  Json kraus = Json::array();
  for (const auto& k : c.kraus()) kraus.push_back(matrix_to_json(k));
  Json out{{"kraus", kraus}};
  if (c.has_inverse()) out["inverse"] = channel_to_json(c.inverse());
  return out;
}

std::vector<Step> script_from_json(const Json& j) {
  const Json& steps = field(j, "steps");
  if (!steps.is_array()) parse_fail("steps must be an array");
  std::vector<Step> out;
  for (const auto& s : steps) {
    Step st;
    const Json& kind = field(s, "kind");
    if (!kind.is_string()) parse_fail("step kind must be a string");
    st.kind = step_kind_from_string(kind.get<std::string>());
    if (s.contains("on")) st.on = labels_from(s.at("on"), "on");
    if (s.contains("out")) st.out = layout_from_json(s.at("out"));
    if (s.contains("channel")) st.channel = channel_from_json(s.at("channel"));
    if (s.contains("discard")) st.discard = labels_from(s.at("discard"), "discard");
    if (s.contains("register")) st.reg = s.at("register").get<std::string>();
    if (s.contains("to")) st.to = party_from_string(s.at("to").get<std::string>());
    if (s.contains("route")) st.route = route_from_string(s.at("route").get<std::string>());
    if (s.contains("measurement")) {
      const Json& m = s.at("measurement");
      if (m.is_object() && m.contains("computational")) {
        const long d = as_long(m.at("computational"), "computational");
        for (long i = 0; i < d; ++i) {
          CMat p = CMat::Zero(d, d);
          p(i, i) = 1.0;
          st.measurement.push_back(p);
        }
      } else {
        st.measurement = matrices_from(m, "measurement");
      }
    }
    if (s.contains("source")) st.source = s.at("source").get<std::string>();
    if (s.contains("message")) st.message = s.at("message").get<std::string>();
    if (s.contains("bypass")) st.bypass = s.at("bypass").get<bool>();
    out.push_back(std::move(st));
  }
  return out;
}

Json step_to_json(const Step& s) {
  Json j{{"kind", std::string(to_string(s.kind))}};
  if (!s.on.empty()) j["on"] = s.on;
  if (!s.out.empty()) j["out"] = layout_to_json(s.out);
  if (s.channel) j["channel"] = channel_to_json(*s.channel);
  if (!s.discard.empty()) j["discard"] = s.discard;
  if (!s.reg.empty()) j["register"] = s.reg;
  if (s.kind == StepKind::QuantumFromE) j["to"] = std::string(to_string(s.to));
  if (s.kind == StepKind::ClassicalAE || s.kind == StepKind::ClassicalBE ||
      s.kind == StepKind::SecretAB || s.kind == StepKind::QuantumAB) {
    j["route"] = std::string(to_string(s.route));
  }
  if (!s.measurement.empty()) {
    Json m = Json::array();
    for (const auto& k : s.measurement) m.push_back(matrix_to_json(k));
    j["measurement"] = m;
  }
  if (!s.source.empty()) j["source"] = s.source;
  if (!s.message.empty()) j["message"] = s.message;
  if (s.bypass) j["bypass"] = true;
  return j;
}

Json witness_to_json(const Witness& w) {
  Json members = Json::array();
  for (const auto& m : w.members()) {
    members.push_back({{"weight", m.weight}, {"amplitudes", vector_to_json(m.amplitudes)}});
  }
  return {{"target", layout_to_json(w.target())},
          {"ext", {{"a", w.ext().a}, {"b", w.ext().b}, {"e", w.ext().e}, {"k", w.ext().k}}},
          {"member_layout", layout_to_json(w.member_layout())},
          {"objective_bits", w.objective()},
          {"members", members}};
}

Json entropy_report_to_json(const EntropyReport& r) {
  return {{"partition", {{"A", r.a}, {"B", r.b}, {"E", r.e}}},
          {"S_A", r.s_a},
          {"S_B", r.s_b},
          {"S_E", r.s_e},
          {"S_AB", r.s_ab},
          {"S_AE", r.s_ae},
          {"S_BE", r.s_be},
          {"S_ABE", r.s_abe},
          {"S_AB_given_E", r.s_ab_given_e},
          {"I_A_B", r.i_ab},
          {"I_A_B_given_E", r.cqmi},
          {"M_I", r.m_i}};
}

Json markov_score_to_json(const MarkovScore& s) {
  return {{"cqmi_bits", s.cqmi_bits},
          {"recovery_fidelity", s.recovery_fidelity},
          {"verdict", s.verdict ? "markov" : "non-markov"},
          {"threshold_bits", s.tol},
          {"threshold_note", "Markovianity is decided by a CQMI threshold; fidelity is advisory"}};
}

Json ledger_to_json(const CostLedger& l) {
  return {{"qc_bits", l.qc_bits}, {"cdown_bits", l.cdown_bits}};
}

Json script_run_to_json(const ScriptRun& run) {
  Json steps = Json::array();
  for (const auto& r : run.records) {
    steps.push_back({{"kind", std::string(to_string(r.kind))},
                     {"M_I_before", r.mi_before},
                     {"M_I_after", r.mi_after},
                     {"cost", ledger_to_json(r.cost)}});
  }
  return {{"classification", std::string(to_string(run.cls))},
          {"ledger", ledger_to_json(run.final.ledger)},
          {"steps", steps},
          {"final_registers", layout_to_json(run.final.state.layout())},
          {"final_M_I", m_i_parties(run.final.state)}};
}

Json nmf_estimate_to_json(const NmfEstimate& e) {
  Json cands = Json::array();
  for (const auto& c : e.candidates)
    cands.push_back({{"name", c.name}, {"objective_bits", c.objective}});
  Json trace = Json::array();
  for (const auto& t : e.trace) {
    trace.push_back({{"stage", t.stage},
                     {"restart_id", t.restart_id},
                     {"objective_bits", t.objective},
                     {"iterations", t.iterations},
                     {"exhausted", t.exhausted},
                     {"ext", {t.ext.a, t.ext.b, t.ext.e, t.ext.k}}});
  }
  return {{"lower_bits", e.lower_bits},
          {"upper_bits", e.upper_bits},
          {"gap_bits", e.gap()},
          {"S_A", e.s_a},
          {"S_B", e.s_b},
          {"best_source", e.best_source},
          {"iteration_budget_exhausted", e.exhausted},
          {"candidates", cands},
          {"trace", trace},
          {"best_witness", witness_to_json(e.best)},
          {"annotations",
           {"M_F lies in [lower_bits, upper_bits]; the regularized quantity and M_C are not "
            "computed"}}};
}

Json esqc_estimate_to_json(const EsqcEstimate& e) {
  Json ens = Json::array();
  for (const auto& m : e.ensemble) ens.push_back({{"p", m.p}, {"sigma", state_to_json(m.sigma)}});
  Json restarts = Json::array();
  for (const auto& r : e.restarts) {
    restarts.push_back({{"restart_id", r.restart_id},
                        {"objective_bits", r.objective},
                        {"iterations", r.iterations},
                        {"exhausted", r.exhausted}});
  }
  Json out{{"upper_bits", e.upper_bits},
           {"singleton_bits", e.singleton_bits},
           {"single_copy_bound_on_dilution_cost_bits", e.dilution_single_copy_bits()},
           {"ensemble", ens},
           {"trace", restarts}};
  if (e.msq_upper_bits) out["msq_upper_bits"] = *e.msq_upper_bits;
  return out;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) parse_fail("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const Json::parse_error& e) {
    parse_fail("'" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace nmk
