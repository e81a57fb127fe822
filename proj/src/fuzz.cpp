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

#include "nmk/fuzz.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "nmk/error.hpp"
#include "nmk/random.hpp"

namespace nmk {
namespace {

constexpr double kTol = 1e-9;
constexpr long kClosureDimCap = 512;

struct Outcome {
  std::string check;
  bool pass;
  double margin;
};

struct TrialResult {
  std::vector<Outcome> outcomes;
  std::vector<Counterexample> cex;
  std::vector<Json> obs;
};

class Recorder {
 public:
  Recorder(long trial, std::uint64_t seed, TrialResult& out)
      : trial_(trial), seed_(seed), out_(out) {}

  // Passes when value <= bound.
  void check(const std::string& name, double value, double bound,
             const std::function<Json()>& detail) {
    const bool pass = value <= bound;
    out_.outcomes.push_back({name, pass, value - bound});
    if (!pass) out_.cex.push_back({name, trial_, seed_, value, bound, detail()});
  }

  void observe(Json j) {
    j["trial"] = trial_;
    j["trial_seed"] = seed_;
    out_.obs.push_back(std::move(j));
  }

 private:
  long trial_;
  std::uint64_t seed_;
  TrialResult& out_;
};

long pick(Rng& rng, long lo, long hi) { return lo + rng.index(hi - lo + 1); }

Json state_step_detail(const DensityState& s, const Step& step) {
  return {{"state", state_to_json(s)}, {"step", step_to_json(step)}};
}

// ---------------------------------------------------------------- ssa

void ssa_trial(Rng& rng, long trial, const FuzzConfig& cfg, Recorder& rec) {
  std::vector<long> dims{2, 2, 2};
  if (cfg.dims) {
    dims = *cfg.dims;
  } else if (trial % 6 == 5) {
    dims = {2, 2, 4};
  }
  if (dims.size() != 3) throw Error(Errc::BadDims, "ssa dims must be (d_A, d_B, d_E)");
  const DensityState rho = random_density_hs(rng, abe_layout(dims[0], dims[1], dims[2]));
  const double c = cqmi(rho, {"A"}, {"B"}, {"E"});
  rec.check("ssa", -c, kTol, [&] { return Json{{"state", state_to_json(rho)}, {"cqmi", c}}; });
}

// ---------------------------------------------------------------- lemma1

const std::vector<std::string> kLemma1Classes = {
    "LocalA",      "LocalB",      "ReversibleE",  "QuantumToE:A", "QuantumToE:B", "BroadcastA",
    "BroadcastB",  "Classical:A->E", "Classical:E->A", "Classical:B->E", "Classical:E->B"};

DensityState with_classical_eve_register(Rng& rng) {
  const RegisterLayout base = abe_layout(2, 2, 2);
  const RegisterLayout m({{"M", 2, Party::Eve}});
  const auto p = random_probabilities(rng, 2);
  CMat total = CMat::Zero(base.total_dim() * 2, base.total_dim() * 2);
  for (long k = 0; k < 2; ++k) {
    const DensityState part = tensor(random_density_hs(rng, base), basis_state(m, {k}));
    total += p[static_cast<std::size_t>(k)] * part.matrix();
  }
  return DensityState(base.concat(m), std::move(total));
}

DensityState random_markov_state(Rng& rng) {
  return build_markov(random_markov_components(rng, pick(rng, 1, 2), 2, 2, pick(rng, 1, 2),
                                               pick(rng, 1, 2)));
}

void lemma1_trial(Rng& rng, const std::string& cls, Recorder& rec) {
  const long da = pick(rng, 2, 3);
  const long db = pick(rng, 2, 3);
  DensityState rho = random_density_hs(rng, abe_layout(da, db, 2));
  Step step;

  if (cls == "LocalA" || cls == "LocalB") {
    const bool alice = cls == "LocalA";
    const long din = alice ? da : db;
    const long dout = pick(rng, 1, 3);
    step.kind = alice ? StepKind::LocalA : StepKind::LocalB;
    step.on = {alice ? "A" : "B"};
    step.channel =
        random_channel(rng, din, dout, std::max(pick(rng, 1, 4), (din + dout - 1) / dout));
    step.out = RegisterLayout({{alice ? "A1" : "B1", dout, alice ? Party::Alice : Party::Bob}});
  } else if (cls == "ReversibleE") {
    if (rng.index(2) == 0) rho = random_markov_state(rng);
    const long de = rho.layout().at("E").dim;
    const long dout = de + rng.index(2);
    step.kind = StepKind::ReversibleE;
    step.on = {"E"};
    step.channel = ChannelMap::isometry(random_isometry(rng, dout, de));
    step.out = RegisterLayout({{"E1", dout, Party::Eve}});
  } else if (cls == "QuantumToE:A" || cls == "QuantumToE:B") {
    const bool alice = cls == "QuantumToE:A";
    const RegisterLayout layout({{"A", 2, Party::Alice},
                                 {"B", 2, Party::Bob},
                                 {alice ? "A2" : "B2", 2, alice ? Party::Alice : Party::Bob},
                                 {"E", 2, Party::Eve}});
    rho = random_density_hs(rng, layout);
    step.kind = StepKind::QuantumToE;
    step.reg = alice ? "A2" : "B2";
  } else if (cls == "BroadcastA" || cls == "BroadcastB" || cls == "Classical:A->E" ||
             cls == "Classical:B->E") {
    const bool alice = cls == "BroadcastA" || cls == "Classical:A->E";
    const bool broadcast = cls.rfind("Broadcast", 0) == 0;
    step.kind = broadcast ? (alice ? StepKind::BroadcastA : StepKind::BroadcastB)
                          : (alice ? StepKind::ClassicalAE : StepKind::ClassicalBE);
    step.route = alice ? Route::AToE : Route::BToE;
    step.on = {alice ? "A" : "B"};
    step.measurement = random_instrument(rng, alice ? da : db, pick(rng, 2, 3));
    step.message = "m";
  } else if (cls == "Classical:E->A" || cls == "Classical:E->B") {
    const bool alice = cls == "Classical:E->A";
    rho = with_classical_eve_register(rng);
    step.kind = alice ? StepKind::ClassicalAE : StepKind::ClassicalBE;
    step.route = alice ? Route::EToA : Route::EToB;
    step.source = "M";
    step.message = "m";
  } else {
    throw Error(Errc::UnknownName, "unknown lemma1 class '" + cls + "'");
  }

  const double before = m_i_parties(rho);
  const Scenario after = apply_step({rho, {}}, step);
  const double mi_after = m_i_parties(after.state);
  rec.check("lemma1/" + cls, mi_after - before, kTol, [&] {
    Json j = state_step_detail(rho, step);
    j["M_I_before"] = before;
    j["M_I_after"] = mi_after;
    return j;
  });
  if (cls == "ReversibleE") {
    rec.check("reversible_invariance", std::abs(mi_after - before), kTol,
              [&] { return state_step_detail(rho, step); });
    const auto g0 = party_groups(rho.layout());
    const auto g1 = party_groups(after.state.layout());
    const bool v0 = markov_score(rho, g0.a, g0.b, g0.e).verdict;
    const bool v1 = markov_score(after.state, g1.a, g1.b, g1.e).verdict;
    rec.check("reversible_verdict", v0 == v1 ? 0.0 : 1.0, 0.0,
              [&] { return state_step_detail(rho, step); });
  }
}

// ---------------------------------------------------------------- markov_closure

Labels owned(const DensityState& s, Party p) { return s.layout().labels_of(p); }

std::string any_of(Rng& rng, const Labels& l) {
  return l[static_cast<std::size_t>(rng.index(static_cast<long>(l.size())))];
}

Step random_omega_step(Rng& rng, const DensityState& s, int counter) {
  const long dim = s.dim();
  const auto fits = [&](double factor) { return dim * factor <= kClosureDimCap + 0.5; };
  Step step;
  const long choice = rng.index(7);
  const bool alice = rng.index(2) == 0;
  const Party party = alice ? Party::Alice : Party::Bob;
  const Labels mine = owned(s, party);

  if (choice == 0 && !mine.empty()) {
    const std::string reg = any_of(rng, mine);
    const long din = s.layout().at(reg).dim;
    const long dout = pick(rng, 1, 3);
    if (fits(static_cast<double>(dout) / din)) {
      step.kind = alice ? StepKind::LocalA : StepKind::LocalB;
      step.on = {reg};
      step.channel =
          random_channel(rng, din, dout, std::max(pick(rng, 1, 3), (din + dout - 1) / dout));
      step.out = RegisterLayout({{reg + "'" + std::to_string(counter), dout, party}});
      return step;
    }
  }
  if (choice == 1 && mine.size() > 1) {
    step.kind = StepKind::QuantumToE;
    step.reg = any_of(rng, mine);
    return step;
  }
  if ((choice == 2 || choice == 3) && !mine.empty()) {
    const std::string reg = any_of(rng, mine);
    const long n = pick(rng, 2, 3);
    const bool broadcast = choice == 2;
    if (fits(std::pow(static_cast<double>(n), broadcast ? 3 : 2))) {
      step.kind = broadcast ? (alice ? StepKind::BroadcastA : StepKind::BroadcastB)
                            : (alice ? StepKind::ClassicalAE : StepKind::ClassicalBE);
      step.route = alice ? Route::AToE : Route::BToE;
      step.on = {reg};
      step.measurement = random_instrument(rng, s.layout().at(reg).dim, n);
      step.message = "m" + std::to_string(counter);
      return step;
    }
  }
  if (choice == 4 && mine.size() > 1) {
    step.kind = alice ? StepKind::LocalA : StepKind::LocalB;
    step.discard = {any_of(rng, mine)};
    return step;
  }
  const Labels eve = owned(s, Party::Eve);
  const std::string reg = any_of(rng, eve);
  const long de = s.layout().at(reg).dim;
  const long dout = choice == 5 && fits(static_cast<double>(de + 1) / de) ? de + 1 : de;
  step.kind = StepKind::ReversibleE;
  step.on = {reg};
  step.channel = ChannelMap::isometry(random_isometry(rng, dout, de));
  step.out = RegisterLayout({{reg + "'" + std::to_string(counter), dout, Party::Eve}});
  return step;
}

void closure_trial(Rng& rng, Recorder& rec) {
  const MarkovComponents c = random_markov_components(rng, pick(rng, 1, 3), 2, 2,
                                                      pick(rng, 1, 2), pick(rng, 1, 2));
  const DensityState rho = build_markov(c);
  const long length = pick(rng, 1, 4);
  std::vector<Step> steps;
  Scenario sc{rho, {}};
  for (long i = 0; i < length; ++i) {
    steps.push_back(random_omega_step(rng, sc.state, static_cast<int>(i)));
    sc = apply_step(sc, steps.back());
  }
  const auto detail = [&] {
    Json js = Json::array();
    for (const auto& st : steps) js.push_back(step_to_json(st));
    return Json{{"state", state_to_json(rho)}, {"steps", js}};
  };
  const bool omega = classify_script(steps) == ScriptClass::Omega;
  rec.check("closure/class_omega", omega ? 0.0 : 1.0, 0.0, detail);
  const auto g = party_groups(sc.state.layout());
  const MarkovScore score = markov_score(sc.state, g.a, g.b, g.e);
  rec.check("closure/cqmi", score.cqmi_bits, tol::kMarkov, detail);
}

// ---------------------------------------------------------------- p_suite

Witness random_witness(Rng& rng, const DensityState& rho, ExtDims ext) {
  const long r = purify(rho, "R").layout().at("R").dim;
  if (ext.k == 0) ext.k = r;
  return witness_from_isometry(rho, random_isometry(rng, ext.ext() * ext.k, r), ext);
}

RegisterLayout suffixed(const std::string& sfx) {
  return RegisterLayout(
      {{"A" + sfx, 2, Party::Alice}, {"B" + sfx, 2, Party::Bob}, {"E" + sfx, 2, Party::Eve}});
}

NmfConfig light_nmf(std::uint64_t seed) {
  NmfConfig cfg;
  cfg.search.restarts = 4;
  cfg.search.max_iters = 150;
  cfg.search.seed = seed;
  cfg.escalate = false;
  return cfg;
}

void p_trial(Rng& rng, Recorder& rec) {
  const RegisterLayout abe = abe_layout(2, 2, 2);
  const auto witness_detail = [](const Witness& w) {
    return [&w] { return Json{{"witness", witness_to_json(w)}}; };
  };

  {  // sandwich
    const DensityState rho = random_density_hs(rng, abe, 2);
    const NmfEstimate est = estimate_nmf(rho, light_nmf(rng.engine()()));
    const auto detail = [&] { return Json{{"state", state_to_json(rho)}}; };
    rec.check("sandwich/lower", est.lower_bits - est.upper_bits, kTol, detail);
    rec.check("sandwich/upper", est.upper_bits, std::min(est.s_a, est.s_b) + kTol, detail);
  }
  {  // pure-state exactness
    const DensityState psi = random_pure(rng, abe).density();
    const NmfEstimate est = estimate_nmf(psi, light_nmf(rng.engine()()));
    const double half_i = 0.5 * mutual_information(psi, {"A"}, {"B"});
    const auto detail = [&] { return Json{{"state", state_to_json(psi)}}; };
    rec.check("pure/gap", est.gap(), 1e-6, detail);
    rec.check("pure/value", std::abs(est.upper_bits - half_i), 1e-6, detail);
  }
  {  // faithfulness with the Markov witness seeded
    const MarkovComponents c = random_markov_components(rng, 2, 2, 2, 1, 2);
    const DensityState rho = build_markov(c);
    NmfConfig cfg = light_nmf(rng.engine()());
    cfg.seeds.push_back(markov_witness(c));
    const NmfEstimate est = estimate_nmf(rho, cfg);
    rec.check("markov/upper", est.upper_bits, 1e-3,
              [&] { return Json{{"components", components_to_json(c)}}; });
  }
  {  // objective through three routes
    const DensityState rho = random_density_hs(rng, abe, 4);
    const Witness w = random_witness(rng, rho, {1, 2, 2, 4});
    const double obj = w.objective();
    rec.check("witness/formation_terms", std::abs(obj - formation_terms(w).value), 1e-8,
              witness_detail(w));
    const DensityState flagged = w.realize();
    const Labels a{"A", kAPrime}, b{"B", kBPrime};
    const double direct = 0.5 * (cqmi(flagged, a, b, {kFlag}) +
                                 cqmi(flagged, {"A", "B"}, {kEPrime, kFlag}, {"E"}));
    rec.check("witness/realized", std::abs(obj - direct), 1e-8, witness_detail(w));
  }
  {  // tensor additivity
    const DensityState r1 = random_density_hs(rng, suffixed("1"), 2);
    const DensityState r2 = random_density_hs(rng, suffixed("2"), 2);
    const Witness w1 = random_witness(rng, r1, {2, 1, 1, 2});
    const Witness w2 = random_witness(rng, r2, {1, 2, 1, 2});
    const Witness t = witness_tensor(w1, w2);
    rec.check("witness/tensor", std::abs(t.objective() - w1.objective() - w2.objective()), kTol,
              witness_detail(t));
  }
  {  // mix linearity
    const ExtDims ext{1, 2, 1, 2};
    const Witness w1 = random_witness(rng, random_density_hs(rng, abe, 2), ext);
    const Witness w2 = random_witness(rng, random_density_hs(rng, abe, 2), ext);
    const double r = rng.uniform();
    const Witness m = witness_mix({{r, w1}, {1.0 - r, w2}});
    const double expect = r * w1.objective() + (1.0 - r) * w2.objective();
    rec.check("witness/mix", std::abs(m.objective() - expect), kTol, witness_detail(m));
  }
  {  // regroup monotonicity
    const RegisterLayout l({{"A", 2, Party::Alice}, {"C", 2, Party::Alice}, {"B", 2, Party::Bob},
                            {"E", 2, Party::Eve}});
    const Witness w = random_witness(rng, random_density_hs(rng, l, 2), {1, 1, 2, 2});
    const Witness g = witness_regroup(w, "C");
    rec.check("witness/regroup", g.objective() - w.objective(), kTol, witness_detail(w));
  }
  {  // reversible Eve isometry
    const Witness w = random_witness(rng, random_density_hs(rng, abe, 2), {1, 1, 2, 2});
    const Witness v = witness_apply_eve_isometry(w, random_isometry(rng, 3, 2), {"E"},
                                                 RegisterLayout({{"E", 3, Party::Eve}}));
    rec.check("witness/eve_isometry", std::abs(v.objective() - w.objective()), kTol,
              witness_detail(w));
  }
  {  // moving an Eve register to Alice
    const long dq = rng.index(2) == 0 ? 2 : 4;
    const RegisterLayout l({{"A", 2, Party::Alice}, {"B", 2, Party::Bob}, {"E", 2, Party::Eve},
                            {"Q", dq, Party::Eve}});
    const Witness w = random_witness(rng, random_density_hs(rng, l, 2), {1, 1, 1, 2});
    const Witness m = witness_move_to_alice(w, "Q");
    rec.check("witness/move_to_alice", m.objective() - w.objective(),
              std::log2(static_cast<double>(dq)) + kTol, witness_detail(w));
  }
  {  // local channel on Bob
    const DensityState rho = random_density_hs(rng, abe, 2);
    const Witness w = random_witness(rng, rho, {1, 1, 1, 2});
    const ChannelMap ch = random_channel(rng, 2, 2, 2);
    const RegisterLayout out({{"B", 2, Party::Bob}});
    const Witness t = witness_apply_local(w, ch, {"B"}, out, Party::Bob);
    rec.check("witness/local_b", t.objective() - w.objective(), kTol, witness_detail(w));
    const DensityState expect = apply_channel(rho, ch, {"B"}, out);
    rec.check("witness/local_b_state", trace_distance(t.reduced(), expect), kTol,
              witness_detail(w));
  }
  {  // continuity on nearby pure states
    const PureState psi = random_pure(rng, abe);
    const double delta = 1e-4 + 0.3 * rng.uniform();
    CVec v = psi.amplitudes() + delta * gaussian_matrix(rng, abe.total_dim(), 1).col(0);
    v.normalize();
    const PureState phi(abe, v);
    const DensityState a = psi.density(), b = phi.density();
    const double eps = trace_distance(a, b);
    const double diff = 0.5 * std::abs(mutual_information(a, {"A"}, {"B"}) -
                                       mutual_information(b, {"A"}, {"B"}));
    rec.check("continuity", diff, continuity_bound(eps, 2, 2) + kTol, [&] {
      return Json{{"psi", state_to_json(a)}, {"phi", state_to_json(b)}};
    });
  }
  {  // linearity across a classical Eve register: recorded, not judged
    const DensityState r1 = random_density_hs(rng, abe, 2);
    const DensityState r2 = random_density_hs(rng, abe, 2);
    const double r = rng.uniform();
    const NmfEstimate e1 = estimate_nmf(r1, light_nmf(rng.engine()()));
    const NmfEstimate e2 = estimate_nmf(r2, light_nmf(rng.engine()()));
    const Witness seeded = witness_mix({{r, e1.best}, {1.0 - r, e2.best}});
    NmfConfig cfg = light_nmf(rng.engine()());
    cfg.seeds.push_back(seeded);
    const NmfEstimate mix = estimate_nmf(seeded.reduced(), cfg);
    const double combined = r * e1.upper_bits + (1.0 - r) * e2.upper_bits;
    if (mix.upper_bits < combined - 1e-6) {
      const double tol = cfg.tol;
      rec.observe({{"kind", "mix_below_parts"},
                   {"weight", r},
                   {"mix_upper_bits", mix.upper_bits},
                   {"parts_upper_bits", combined},
                   {"parts_certified", e1.gap() <= tol && e2.gap() <= tol}});
    }
  }
}

TrialResult run_trial(const FuzzConfig& cfg, long trial) {
  TrialResult out;
  const std::uint64_t seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(trial));
  Rng rng(seed);
  Recorder rec(trial, seed, out);
  switch (cfg.suite) {
    case FuzzSuite::Ssa: ssa_trial(rng, trial, cfg, rec); break;
    case FuzzSuite::Lemma1:
      lemma1_trial(rng, kLemma1Classes[static_cast<std::size_t>(trial) % kLemma1Classes.size()],
                   rec);
      break;
    case FuzzSuite::MarkovClosure: closure_trial(rng, rec); break;
    case FuzzSuite::PSuite: p_trial(rng, rec); break;
  }
  return out;
}

}  // namespace

std::string_view to_string(FuzzSuite s) {
  switch (s) {
    case FuzzSuite::Ssa: return "ssa";
    case FuzzSuite::Lemma1: return "lemma1";
    case FuzzSuite::PSuite: return "p_suite";
    case FuzzSuite::MarkovClosure: return "markov_closure";
  }
  return "?";
}

FuzzSuite fuzz_suite_from_string(std::string_view s) {
  for (auto f : {FuzzSuite::Ssa, FuzzSuite::Lemma1, FuzzSuite::PSuite, FuzzSuite::MarkovClosure}) {
    if (to_string(f) == s) return f;
  }
  throw Error(Errc::UnknownName, "unknown fuzz suite '" + std::string(s) + "'");
}

const std::vector<std::string>& lemma1_classes() { return kLemma1Classes; }

long FuzzReport::passed() const {
  long n = 0;
  for (const auto& c : checks) n += c.passed;
  return n;
}

long FuzzReport::failed() const {
  long n = 0;
  for (const auto& c : checks) n += c.failed;
  return n;
}

FuzzReport run_fuzz(const FuzzConfig& config) {
  if (config.trials < 0) throw Error(Errc::BadRange, "trials must be non-negative");
  const long total = config.suite == FuzzSuite::Lemma1
                         ? config.trials * static_cast<long>(kLemma1Classes.size())
                         : config.trials;
  std::vector<TrialResult> results(static_cast<std::size_t>(total));
  parallel_for(static_cast<int>(total), config.jobs,
               [&](int t) { results[static_cast<std::size_t>(t)] = run_trial(config, t); });

  FuzzReport report{config.suite, config.trials, {}, {}, {}};
  std::map<std::string, std::size_t> index;
  for (auto& r : results) {
    for (const auto& o : r.outcomes) {
      auto it = index.find(o.check);
      if (it == index.end()) {
        it = index.emplace(o.check, report.checks.size()).first;
        report.checks.push_back({o.check, 0, 0, o.margin});
      }
      FuzzCheck& c = report.checks[it->second];
      (o.pass ? c.passed : c.failed) += 1;
      c.worst = std::max(c.worst, o.margin);
    }
    for (auto& c : r.cex) report.counterexamples.push_back(std::move(c));
    for (auto& o : r.obs) report.observations.push_back(std::move(o));
  }
  return report;
}

Json fuzz_report_to_json(const FuzzReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    checks.push_back(
        {{"name", c.name}, {"passed", c.passed}, {"failed", c.failed}, {"worst_margin", c.worst}});
  }
  Json cex = Json::array();
  for (const auto& c : r.counterexamples) {
    cex.push_back({{"check", c.check},
                   {"trial", c.trial},
                   {"trial_seed", c.trial_seed},
                   {"value", c.value},
                   {"bound", c.bound},
                   {"detail", c.detail}});
  }
  return {{"suite", std::string(to_string(r.suite))},
          {"trials", r.trials},
          {"passed", r.passed()},
          {"failed", r.failed()},
          {"checks", checks},
          {"counterexamples", cex},
          {"observations", r.observations}};
}

}  // namespace nmk
