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

#include "nmk/cli.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "nmk/csquashed.hpp"
#include "nmk/entropy.hpp"
#include "nmk/error.hpp"
#include "nmk/fuzz.hpp"
#include "nmk/markov.hpp"
#include "nmk/nmf.hpp"
#include "nmk/scenario.hpp"
#include "nmk/serialize.hpp"
#include "nmk/zoo.hpp"

namespace nmk {
namespace {

using Clock = std::chrono::steady_clock;

struct Common {
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  std::string csv;
};

void add_common(CLI::App* cmd, Common& c, bool with_seed) {
  if (with_seed) cmd->add_option("--seed", c.seed, "Master seed; drawn and printed when absent");
  cmd->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--csv", c.csv, "Also write a CSV table to this file");
}

std::uint64_t resolve_seed(const Common& c, std::ostream& err) {
  if (c.seed) return *c.seed;
  std::random_device rd;
  const std::uint64_t s = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  err << "nmk: no --seed given; using seed " << s << "\n";
  return s;
}

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void row(std::vector<std::string> cells) { rows_.push_back(std::move(cells)); }

  void write(const std::string& path) const {
    std::ofstream f(path);
    if (!f) throw Error(Errc::ParseError, "cannot write '" + path + "'");
    write_row(f, header_);
    for (const auto& r : rows_) write_row(f, r);
  }

 private:
  static void write_row(std::ostream& o, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) o << (i ? "," : "") << cells[i];
    o << "\n";
  }

  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

std::string num(double x) {
  std::ostringstream o;
  o << std::setprecision(17) << x;
  return o.str();
}

std::vector<long> parse_dims(const std::string& s, std::size_t n, const char* what) {
  std::vector<long> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const long v = std::stol(item, &used);
      if (used != item.size() || v < 1) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw Error(Errc::BadParams,
                  std::string(what) + " expects positive integers, got '" + s + "'");
    }
  }
  if (out.size() != n) {
    throw Error(Errc::BadParams, std::string(what) + " expects " + std::to_string(n) + " values");
  }
  return out;
}

Labels split_labels(const std::string& s) {
  Labels out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// A state, and the components it was built from when there are any.
struct Input {
  DensityState state;
  std::optional<MarkovComponents> components;
};

bool looks_like_components(const Json& j) { return j.is_object() && j.contains("entries"); }

Input load_input(const std::string& ref) {
  if (is_zoo_ref(ref)) {
    const ZooRef z = parse_zoo_ref(ref);
    ZooValue v = zoo(z.name, z.params, z.seed);
    if (auto* c = std::get_if<MarkovComponents>(&v)) return {build_markov(*c), *c};
    if (auto* s = std::get_if<DensityState>(&v)) return {*s, std::nullopt};
    const auto& sc = std::get<ScriptCase>(v);
    return {run_script({sc.initial, {}}, sc.steps).final.state, std::nullopt};
  }
  const Json j = read_json_file(ref);
  if (looks_like_components(j)) {
    MarkovComponents c = components_from_json(j);
    return {build_markov(c), c};
  }
  return {state_from_json(j), std::nullopt};
}

MarkovComponents load_components(const std::string& ref) {
  if (is_zoo_ref(ref)) {
    const ZooRef z = parse_zoo_ref(ref);
    ZooValue v = zoo(z.name, z.params, z.seed);
    if (auto* c = std::get_if<MarkovComponents>(&v)) return *c;
    throw Error(Errc::BadParams, "zoo entry '" + z.name + "' does not describe Markov components");
  }
  return components_from_json(read_json_file(ref));
}

Json registers_summary(const DensityState& s) { return layout_to_json(s.layout()); }

Json state_summary(const DensityState& s) {
  const auto g = party_groups(s.layout());
  return {{"registers", registers_summary(s)},
          {"entropies", entropy_report_to_json(entropy_report(s, g.a, g.b, g.e))},
          {"markov", markov_score_to_json(markov_score(s, g.a, g.b, g.e))}};
}

struct Outcome {
  Json results;
  Json config = Json::object();
  Json counterexamples = Json::array();
  int code = kExitOk;
};

// ------------------------------------------------------------ commands

struct AnalyzeArgs {
  std::string state;
  std::string a, b, e;
  Common common;
};

Outcome cmd_analyze(const AnalyzeArgs& args, std::ostream& err) {
  const Input in = load_input(args.state);
  auto g = party_groups(in.state.layout());
  if (!args.a.empty()) g.a = split_labels(args.a);
  if (!args.b.empty()) g.b = split_labels(args.b);
  if (!args.e.empty()) g.e = split_labels(args.e);
  const EntropyReport rep = entropy_report(in.state, g.a, g.b, g.e);
  const MarkovScore score = markov_score(in.state, g.a, g.b, g.e);
  Outcome o;
  o.config = {{"state", args.state}};
  o.results = {{"registers", registers_summary(in.state)},
               {"entropies", entropy_report_to_json(rep)},
               {"markov", markov_score_to_json(score)}};
  err << "M_I = " << num(rep.m_i) << " bits; I(A:B|E) = " << num(rep.cqmi) << "; verdict "
      << (score.verdict ? "markov" : "non-markov") << "; recovery fidelity "
      << num(score.recovery_fidelity) << "\n";
  if (!args.common.csv.empty()) {
    CsvTable t({"quantity", "value"});
    const Json& j = o.results["entropies"];
    for (const auto& [k, v] : j.items()) {
      if (v.is_number()) t.row({k, num(v.get<double>())});
    }
    t.row({"recovery_fidelity", num(score.recovery_fidelity)});
    t.write(args.common.csv);
  }
  return o;
}

struct NmfArgs {
  std::string state;
  long k = 0;
  std::string ext = "1,1,1";
  int restarts = 16;
  int max_iters = 300;
  double tol = 1e-6;
  bool no_escalate = false;
  Common common;
};

Outcome cmd_nmf(const NmfArgs& args, std::uint64_t seed, std::ostream& err) {
  const Input in = load_input(args.state);
  const auto ext = parse_dims(args.ext, 3, "--ext");
  NmfConfig cfg;
  cfg.ext = {ext[0], ext[1], ext[2], args.k};
  cfg.search.restarts = args.restarts;
  cfg.search.max_iters = args.max_iters;
  cfg.search.seed = seed;
  cfg.search.jobs = args.common.jobs;
  cfg.escalate = !args.no_escalate;
  cfg.tol = args.tol;
  if (in.components) cfg.seeds.push_back(markov_witness(*in.components));

  const NmfEstimate est = estimate_nmf(in.state, cfg);
  const bool certified = est.gap() <= cfg.tol;
  Outcome o;
  o.config = {{"state", args.state},
              {"ext", {ext[0], ext[1], ext[2]}},
              {"k", args.k},
              {"restarts", args.restarts},
              {"max_iters", args.max_iters},
              {"tol", args.tol},
              {"escalate", cfg.escalate},
              {"seeded_markov_witness", in.components.has_value()}};
  o.results = nmf_estimate_to_json(est);
  o.results["status"] = certified ? "CERTIFIED" : "UNCERTIFIED";
  err << "M_F in [" << num(est.lower_bits) << ", " << num(est.upper_bits) << "] bits, gap "
      << num(est.gap()) << (certified ? "" : "  UNCERTIFIED") << "\n";
  if (!args.common.csv.empty()) {
    CsvTable t({"stage", "restart_id", "objective_bits", "iterations", "exhausted"});
    for (const auto& r : est.trace) {
      t.row({std::to_string(r.stage), std::to_string(r.restart_id), num(r.objective),
             std::to_string(r.iterations), r.exhausted ? "1" : "0"});
    }
    t.write(args.common.csv);
  }
  return o;
}

struct EsqcArgs {
  std::string state;
  long e_prime = 1;
  long k = 0;
  int restarts = 16;
  int max_iters = 300;
  bool lemma5 = false;
  Common common;
};

Outcome cmd_esqc(const EsqcArgs& args, std::uint64_t seed, std::ostream& err) {
  Input in = load_input(args.state);
  Labels keep = in.state.layout().labels_of(Party::Alice);
  const Labels bob = in.state.layout().labels_of(Party::Bob);
  keep.insert(keep.end(), bob.begin(), bob.end());
  Labels dropped;
  for (const auto& l : in.state.layout().labels()) {
    if (std::find(keep.begin(), keep.end(), l) == keep.end()) dropped.push_back(l);
  }
  const DensityState omega = dropped.empty() ? in.state : partial_trace(in.state, keep);

  EsqcConfig cfg;
  cfg.e_prime = args.e_prime;
  cfg.k = args.k;
  cfg.search.restarts = args.restarts;
  cfg.search.max_iters = args.max_iters;
  cfg.search.seed = seed;
  cfg.search.jobs = args.common.jobs;
  EsqcEstimate est = estimate_esqc(omega, cfg);

  Outcome o;
  o.config = {{"state", args.state},
              {"e_prime", args.e_prime},
              {"k", args.k},
              {"restarts", args.restarts},
              {"max_iters", args.max_iters},
              {"traced_out", dropped}};
  if (args.lemma5) {
    Lemma5Config l5;
    l5.esqc = cfg;
    l5.nmf.search = cfg.search;
    const Lemma5Report rep = lemma5_check(omega, l5);
    est.msq_upper_bits = rep.msq_ub;
    o.results = esqc_estimate_to_json(est);
    Json exts = Json::array();
    for (const auto& e : rep.extensions)
      exts.push_back({{"name", e.name}, {"upper_bits", e.objective}});
    o.results["lemma5"] = {{"esqc_upper_bits", rep.esqc_ub},
                           {"msq_upper_bits", rep.msq_ub},
                           {"gap_bits", rep.gap},
                           {"extensions", exts}};
  } else {
    o.results = esqc_estimate_to_json(est);
  }
  err << "E_sq,c <= " << num(est.upper_bits) << " bits over " << est.ensemble.size()
      << " ensemble members\n";
  if (!args.common.csv.empty()) {
    CsvTable t({"restart_id", "objective_bits", "iterations", "exhausted"});
    for (const auto& r : est.restarts) {
      t.row({std::to_string(r.restart_id), num(r.objective), std::to_string(r.iterations),
             r.exhausted ? "1" : "0"});
    }
    t.write(args.common.csv);
  }
  return o;
}

struct MarkovBuildArgs {
  std::string components;
  std::string out;
  bool verify_script = false;
  long dummy_dim = 2;
  Common common;
};

Outcome cmd_markov_build(const MarkovBuildArgs& args, std::ostream& err) {
  const MarkovComponents c = load_components(args.components);
  const DensityState rho = build_markov(c);
  Outcome o;
  o.config = {{"components", args.components}, {"verify_script", args.verify_script}};
  o.results = state_summary(rho);
  o.results["components"] = {{"entries", c.entries.size()},
                             {"dim_a", c.dim_a},
                             {"dim_b", c.dim_b},
                             {"dim_el", c.dim_el},
                             {"dim_er", c.dim_er}};
  if (args.verify_script) {
    const ScriptRun run =
        run_script({dummy_state(args.dummy_dim), {}}, markov_preparation_script(c, args.dummy_dim));
    const Labels labels = rho.layout().labels();
    Labels order = labels;
    order.push_back("E_anc");
    const DensityState anc =
        basis_state(RegisterLayout({{"E_anc", args.dummy_dim, Party::Eve}}), {0});
    const double dist = trace_distance(reorder(run.final.state, order), tensor(rho, anc));
    o.results["script_check"] = {{"classification", std::string(to_string(run.cls))},
                                 {"ledger", ledger_to_json(run.final.ledger)},
                                 {"trace_distance", dist}};
    err << "preparation script: class " << to_string(run.cls) << ", distance " << num(dist)
        << "\n";
  }
  if (!args.out.empty()) {
    std::ofstream f(args.out);
    if (!f) throw Error(Errc::ParseError, "cannot write '" + args.out + "'");
    f << state_to_json(rho).dump(2) << "\n";
  }
  err << "built Markov state of dimension " << rho.dim() << "\n";
  return o;
}

struct ScriptArgs {
  std::string script;
  std::string state;
  Common common;
};

Outcome cmd_script(const ScriptArgs& args, std::ostream& err) {
  std::optional<DensityState> initial;
  std::vector<Step> steps;
  if (is_zoo_ref(args.script)) {
    const ZooRef z = parse_zoo_ref(args.script);
    ZooValue v = zoo(z.name, z.params, z.seed);
    if (auto* sc = std::get_if<ScriptCase>(&v)) {
      initial = sc->initial;
      steps = sc->steps;
    } else if (auto* c = std::get_if<MarkovComponents>(&v)) {
      initial = dummy_state(2);
      steps = markov_preparation_script(*c, 2);
    } else {
      throw Error(Errc::BadParams, "zoo entry '" + z.name + "' is not a script");
    }
  } else {
    const Json j = read_json_file(args.script);
    if (looks_like_components(j)) {
      initial = dummy_state(2);
      steps = markov_preparation_script(components_from_json(j), 2);
    } else {
      steps = script_from_json(j);
      if (j.contains("initial")) {
        const Json& init = j.at("initial");
        initial = init.is_string() ? load_input(init.get<std::string>()).state
                                   : state_from_json(init);
      }
    }
  }
  if (!args.state.empty()) initial = load_input(args.state).state;
  if (!initial) throw Error(Errc::BadParams, "no initial state: pass a state reference");

  const ScriptRun run = run_script({*initial, {}}, steps);
  Outcome o;
  o.config = {{"script", args.script}, {"state", args.state}, {"steps", steps.size()}};
  o.results = script_run_to_json(run);
  o.results["initial"] = state_summary(*initial);
  o.results["final"] = state_summary(run.final.state);
  err << "class " << to_string(run.cls) << "; Qc = " << num(run.final.ledger.qc_bits)
      << " bits, C_down = " << num(run.final.ledger.cdown_bits) << " bits; M_I "
      << num(m_i_parties(*initial)) << " -> " << num(m_i_parties(run.final.state)) << "\n";
  if (!args.common.csv.empty()) {
    CsvTable t({"step", "kind", "M_I_before", "M_I_after", "qc_bits", "cdown_bits"});
    for (std::size_t i = 0; i < run.records.size(); ++i) {
      const auto& r = run.records[i];
      t.row({std::to_string(i), std::string(to_string(r.kind)), num(r.mi_before),
             num(r.mi_after), num(r.cost.qc_bits), num(r.cost.cdown_bits)});
    }
    t.write(args.common.csv);
  }
  return o;
}

struct FuzzArgs {
  std::string suite;
  long trials = -1;
  std::string dims;
  std::string cex_dir = ".";
  Common common;
};

long default_trials(FuzzSuite s) {
  switch (s) {
    case FuzzSuite::Ssa: return 1000;
    case FuzzSuite::Lemma1: return 300;
    case FuzzSuite::MarkovClosure: return 200;
    case FuzzSuite::PSuite: return 20;
  }
  return 100;
}

Outcome cmd_fuzz(const FuzzArgs& args, std::uint64_t seed, std::ostream& err) {
  FuzzConfig cfg;
  cfg.suite = fuzz_suite_from_string(args.suite);
  cfg.trials = args.trials >= 0 ? args.trials : default_trials(cfg.suite);
  cfg.seed = seed;
  cfg.jobs = args.common.jobs;
  if (!args.dims.empty()) cfg.dims = parse_dims(args.dims, 3, "--dims");
  const FuzzReport rep = run_fuzz(cfg);

  Outcome o;
  o.config = {{"suite", args.suite}, {"trials", cfg.trials}};
  if (cfg.dims) o.config["dims"] = *cfg.dims;
  Json full = fuzz_report_to_json(rep);
  o.counterexamples = full["counterexamples"];
  full.erase("counterexamples");
  o.results = full;

  for (const auto& c : rep.checks) {
    err << c.name << ": " << c.passed << " pass, " << c.failed << " fail\n";
  }
  if (!rep.observations.empty()) err << rep.observations.size() << " observations recorded\n";
  if (!rep.counterexamples.empty()) {
    std::filesystem::create_directories(args.cex_dir);
    for (const auto& c : o.counterexamples) {
      std::string name = c["check"].get<std::string>();
      std::replace_if(name.begin(), name.end(), [](char ch) { return !std::isalnum(ch); }, '_');
      const auto path =
          std::filesystem::path(args.cex_dir) /
          ("nmk-cex-" + name + "-" + std::to_string(c["trial"].get<long>()) + ".json");
      std::ofstream(path) << c.dump(2) << "\n";
    }
    err << rep.counterexamples.size() << " counterexamples written to " << args.cex_dir << "\n";
    o.code = kExitViolation;
  }
  if (!args.common.csv.empty()) {
    CsvTable t({"check", "passed", "failed", "worst_margin"});
    for (const auto& c : rep.checks) {
      t.row({c.name, std::to_string(c.passed), std::to_string(c.failed), num(c.worst)});
    }
    t.write(args.common.csv);
  }
  return o;
}

Json zoo_value_json(const ZooValue& v) {
  if (auto* s = std::get_if<DensityState>(&v)) return {{"state", state_to_json(*s)}};
  if (auto* c = std::get_if<MarkovComponents>(&v)) return {{"components", components_to_json(*c)}};
  const auto& sc = std::get<ScriptCase>(v);
  Json steps = Json::array();
  for (const auto& st : sc.steps) steps.push_back(step_to_json(st));
  return {{"initial", state_to_json(sc.initial)}, {"steps", steps}};
}

Json entry_json(const ZooEntryInfo& e) {
  Json j{
      {"name", e.name}, {"kind", e.kind}, {"description", e.description}, {"params", e.defaults}};
  if (e.m_i) j["M_I"] = *e.m_i;
  if (!e.m_i_by_class.empty()) j["M_I_by_class"] = e.m_i_by_class;
  return j;
}

Outcome cmd_zoo_list(std::ostream& err) {
  Outcome o;
  Json entries = Json::array();
  for (const auto& e : zoo_catalog()) {
    entries.push_back(entry_json(e));
    err << e.name << " (" << e.kind << ")  " << e.description << "\n";
  }
  o.results = {{"entries", entries}};
  return o;
}

Outcome cmd_zoo_show(const std::string& ref, std::ostream& err) {
  const ZooRef z = parse_zoo_ref(is_zoo_ref(ref) ? ref : "zoo:" + ref);
  const ZooValue v = zoo(z.name, z.params, z.seed);
  Outcome o;
  o.config = {{"ref", ref}};
  for (const auto& e : zoo_catalog()) {
    if (e.name == z.name) o.results["entry"] = entry_json(e);
  }
  o.results["value"] = zoo_value_json(v);
  err << z.name << "\n";
  return o;
}

int exit_code_for(Errc c) { return c == Errc::BudgetExceeded ? kExitBudget : kExitInput; }

}  // namespace

DensityState load_state_ref(const std::string& ref) { return load_input(ref).state; }

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Non-Markovianity measures for tripartite quantum states", "nmk"};
  app.require_subcommand(1);

  AnalyzeArgs analyze;
  auto* c_analyze = app.add_subcommand("analyze", "Entropies and Markov verdict of a state");
  c_analyze->add_option("state", analyze.state, "State file or zoo:name?params")->required();
  c_analyze->add_option("--a", analyze.a, "Comma-separated labels of group A");
  c_analyze->add_option("--b", analyze.b, "Comma-separated labels of group B");
  c_analyze->add_option("--e", analyze.e, "Comma-separated labels of group E");
  add_common(c_analyze, analyze.common, false);

  NmfArgs nmf;
  auto* c_nmf = app.add_subcommand("nmf", "Bracket the non-Markovianity of formation");
  c_nmf->add_option("state", nmf.state, "State file, components file or zoo reference")->required();
  c_nmf->add_option("--k", nmf.k, "Ensemble size (0 = rank)")->check(CLI::NonNegativeNumber);
  c_nmf->add_option("--ext", nmf.ext, "Extension dimensions a,b,e");
  c_nmf->add_option("--restarts", nmf.restarts, "Random restarts of the isometry search")
      ->check(CLI::PositiveNumber);
  c_nmf->add_option("--max-iters", nmf.max_iters, "Iteration cap per restart")
      ->check(CLI::PositiveNumber);
  c_nmf->add_option("--tol", nmf.tol, "Gap counted as certified");
  c_nmf->add_flag("--no-escalate", nmf.no_escalate, "Skip the 2x2x2 extension stage");
  add_common(c_nmf, nmf.common, true);

  EsqcArgs esqc;
  auto* c_esqc = app.add_subcommand("esqc", "Upper-bound the c-squashed entanglement");
  c_esqc->add_option("state", esqc.state, "State file or zoo reference")->required();
  c_esqc->add_option("--eprime", esqc.e_prime, "Dimension of E'")->check(CLI::PositiveNumber);
  c_esqc->add_option("--k", esqc.k, "Ensemble size (0 = rank)")->check(CLI::NonNegativeNumber);
  c_esqc->add_option("--restarts", esqc.restarts, "Random restarts of the isometry search")
      ->check(CLI::PositiveNumber);
  c_esqc->add_option("--max-iters", esqc.max_iters, "Iteration cap per restart")
      ->check(CLI::PositiveNumber);
  c_esqc->add_flag("--lemma5", esqc.lemma5, "Compare with nmf bounds over fixed extensions");
  add_common(c_esqc, esqc.common, true);

  MarkovBuildArgs mb;
  auto* c_mb = app.add_subcommand("markov-build", "Assemble a Markov state from components");
  c_mb->add_option("components", mb.components, "Components file or zoo reference")->required();
  c_mb->add_option("--out", mb.out, "Write the state JSON here");
  c_mb->add_flag("--verify-script", mb.verify_script,
                 "Also run the free preparation script from a dummy state");
  c_mb->add_option("--dummy-dim", mb.dummy_dim, "Register dimension of the dummy start state")
      ->check(CLI::PositiveNumber);
  add_common(c_mb, mb.common, false);

  ScriptArgs script;
  auto* c_script = app.add_subcommand("script", "Run an operation script and account its cost");
  c_script->add_option("script", script.script, "Script file or zoo reference")->required();
  c_script->add_option("state", script.state, "Initial state (overrides the script's)");
  add_common(c_script, script.common, false);

  FuzzArgs fuzz;
  auto* c_fuzz = app.add_subcommand("fuzz", "Run a property suite");
  c_fuzz->add_option("suite", fuzz.suite, "ssa | lemma1 | p_suite | markov_closure")
      ->required()
      ->check(CLI::IsMember({"ssa", "lemma1", "p_suite", "markov_closure"}));
  c_fuzz->add_option("--trials", fuzz.trials, "Trials (per class for lemma1)")
      ->check(CLI::NonNegativeNumber);
  c_fuzz->add_option("--dims", fuzz.dims, "ssa only: d_A,d_B,d_E");
  c_fuzz->add_option("--cex-dir", fuzz.cex_dir, "Directory for counterexample files");
  add_common(c_fuzz, fuzz.common, true);

  auto* c_zoo = app.add_subcommand("zoo", "List or show catalog entries");
  c_zoo->require_subcommand(1);
  auto* c_zoo_list = c_zoo->add_subcommand("list", "List entries");
  std::string zoo_ref;
  auto* c_zoo_show = c_zoo->add_subcommand("show", "Show one entry");
  c_zoo_show->add_option("ref", zoo_ref, "name or zoo:name?params")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "nmk: " << e.what() << "\n";
    return kExitInput;
  }

  const auto start = Clock::now();
  std::string command;
  std::optional<std::uint64_t> seed;
  Outcome outcome;
  try {
    if (c_analyze->parsed()) {
      command = "analyze";
      outcome = cmd_analyze(analyze, err);
    } else if (c_nmf->parsed()) {
      command = "nmf";
      seed = resolve_seed(nmf.common, err);
      outcome = cmd_nmf(nmf, *seed, err);
    } else if (c_esqc->parsed()) {
      command = "esqc";
      seed = resolve_seed(esqc.common, err);
      outcome = cmd_esqc(esqc, *seed, err);
    } else if (c_mb->parsed()) {
      command = "markov-build";
      outcome = cmd_markov_build(mb, err);
    } else if (c_script->parsed()) {
      command = "script";
      outcome = cmd_script(script, err);
    } else if (c_fuzz->parsed()) {
      command = "fuzz";
      seed = resolve_seed(fuzz.common, err);
      outcome = cmd_fuzz(fuzz, *seed, err);
    } else if (c_zoo_list->parsed()) {
      command = "zoo list";
      outcome = cmd_zoo_list(err);
    } else if (c_zoo_show->parsed()) {
      command = "zoo show";
      outcome = cmd_zoo_show(zoo_ref, err);
    }
  } catch (const Error& e) {
    err << "nmk: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "nmk: " << e.what() << "\n";
    return kExitInput;
  }
  const double ms =
      std::chrono::duration<double, std::milli>(Clock::now() - start).count();

  Json report{{"command", command},
              {"args", args},
              {"seed", seed.value_or(0)},
              {"config", outcome.config},
              {"results", outcome.results},
              {"counterexamples", outcome.counterexamples},
              {"timings", {{"wall_ms", ms}}}};
  out << report.dump(2) << "\n";
  return outcome.code;
}

}  // namespace nmk
