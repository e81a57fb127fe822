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

// Acceptance runner: one PASS/FAIL line per criterion, runtime limits
// included. Exit status is nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "nmk/cli.hpp"
#include "nmk/csquashed.hpp"
#include "nmk/entropy.hpp"
#include "nmk/fuzz.hpp"
#include "nmk/nmf.hpp"
#include "nmk/random.hpp"
#include "nmk/zoo.hpp"
#include "oracle.hpp"

namespace {

using namespace nmk;
using Clock = std::chrono::steady_clock;

constexpr std::uint64_t kSeed = 20261016;

struct Verdict {
  bool ok = true;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& name, double limit_s,
               const std::function<Verdict()>& body) {
  const auto t0 = Clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double s = std::chrono::duration<double>(Clock::now() - t0).count();
  const bool in_time = s < limit_s;
  const bool pass = v.ok && in_time;
  if (!pass) ++failures;
  std::printf("[%s] AC-%d %s: %s; %.2f s (limit %.0f s%s)\n", pass ? "PASS" : "FAIL", id,
              name.c_str(), v.detail.c_str(), s, limit_s, in_time ? "" : ", exceeded");
  std::fflush(stdout);
}

std::string fmt(double x) {
  std::ostringstream o;
  o.precision(3);
  o << x;
  return o.str();
}

Witness random_witness(Rng& rng, const DensityState& rho, ExtDims ext) {
  const long r = purify(rho, "R").layout().at("R").dim;
  if (ext.k == 0) ext.k = r;
  return witness_from_isometry(rho, random_isometry(rng, ext.ext() * ext.k, r), ext);
}

NmfConfig nmf_config(std::uint64_t seed) {
  NmfConfig cfg;
  cfg.search.seed = seed;
  return cfg;
}

double script_output_mi(const std::string& cls) {
  const auto sc = std::get<ScriptCase>(zoo("example_script", {{"class", cls}}));
  return m_i_parties(run_script({sc.initial, {}}, sc.steps).final.state);
}

Verdict examples() {
  const double ghz = m_i_parties(zoo_state("ghz_diag"));
  const double flip = script_output_mi("LE_minus_RE");
  const double secret = script_output_mi("SAB");
  const double bell = m_i_parties(zoo_state("bell_e0"));
  const double err = std::max({std::abs(ghz), std::abs(flip - 0.5), std::abs(secret - 0.5),
                               std::abs(bell - 1.0)});
  return {err <= 1e-9, "ghz_diag " + fmt(ghz) + ", flip-mixed " + fmt(flip) + ", secret bit " +
                           fmt(secret) + ", bell_e0 " + fmt(bell) + ", max error " + fmt(err) +
                           " (tol 1e-9)"};
}

Verdict ssa() {
  FuzzConfig a;
  a.suite = FuzzSuite::Ssa;
  a.trials = 1000;
  a.seed = kSeed;
  a.dims = std::vector<long>{2, 2, 2};
  FuzzConfig b = a;
  b.trials = 200;
  b.seed = kSeed + 1;
  b.dims = std::vector<long>{2, 2, 4};
  const FuzzReport ra = run_fuzz(a);
  const FuzzReport rb = run_fuzz(b);
  const long failed = ra.failed() + rb.failed();
  return {failed == 0 && ra.passed() == 1000 && rb.passed() == 200,
          std::to_string(ra.passed()) + " on (2,2,2) + " + std::to_string(rb.passed()) +
              " on (2,2,4) with cqmi >= -1e-9, " + std::to_string(failed) + " violations"};
}

Verdict lemma1() {
  FuzzConfig c;
  c.suite = FuzzSuite::Lemma1;
  c.trials = 300;
  c.seed = kSeed;
  const FuzzReport r = run_fuzz(c);
  long reversible = 0;
  for (const auto& ch : r.checks)
    if (ch.name.rfind("reversible_", 0) == 0) reversible += ch.passed + ch.failed;
  return {r.failed() == 0 && r.trials == 300,
          "300 per class x " + std::to_string(lemma1_classes().size()) + " classes, " +
              std::to_string(r.passed()) + " checks passed (" + std::to_string(reversible) +
              " reversible-invariance), " + std::to_string(r.failed()) +
              " violations (tol 1e-9)"};
}

Verdict closure() {
  FuzzConfig c;
  c.suite = FuzzSuite::MarkovClosure;
  c.trials = 200;
  c.seed = kSeed;
  const FuzzReport r = run_fuzz(c);
  double worst = 0.0;
  for (const auto& ch : r.checks)
    if (ch.name == "closure/cqmi") worst = ch.worst + tol::kMarkov;
  return {r.failed() == 0, "200 free scripts on Markov states, max final cqmi " + fmt(worst) +
                               " (tol 1e-8), " + std::to_string(r.failed()) + " violations"};
}

Verdict pure_exactness() {
  Rng rng(kSeed);
  double worst_gap = 0.0, worst_value = 0.0;
  for (int t = 0; t < 100; ++t) {
    const DensityState psi = random_pure(rng, abe_layout(2, 2, 2)).density();
    const NmfEstimate e = estimate_nmf(psi, nmf_config(rng.engine()()));
    worst_gap = std::max(worst_gap, e.gap());
    worst_value = std::max(worst_value,
                           std::abs(e.upper_bits - 0.5 * mutual_information(psi, {"A"}, {"B"})));
  }
  return {worst_gap <= 1e-6 && worst_value <= 1e-6,
          "100 pure states, max width " + fmt(worst_gap) + ", max |upper - I(A:B)/2| " +
              fmt(worst_value) + " (tol 1e-6)"};
}

Verdict faithfulness() {
  Rng rng(kSeed);
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const MarkovComponents c = random_markov_components(rng, 1 + rng.index(3), 2, 2,
                                                        1 + rng.index(2), 1 + rng.index(2));
    NmfConfig cfg = nmf_config(rng.engine()());
    cfg.seeds.push_back(markov_witness(c));
    worst = std::max(worst, estimate_nmf(build_markov(c), cfg).upper_bits);
  }
  return {worst <= 1e-3, "50 Markov states, max upper " + fmt(worst) + " (tol 1e-3)"};
}

Verdict classical_benchmark() {
  NmfConfig cfg = nmf_config(kSeed);
  cfg.ext.k = 2;
  const NmfEstimate e = estimate_nmf(zoo_state("classical_corr_e0"), cfg);
  const bool ok = std::abs(e.lower_bits - 0.5) <= 1e-9 && e.upper_bits <= 0.5 + 1e-3 &&
                  e.upper_bits >= e.lower_bits - 1e-9;
  return {ok, "bracket [" + fmt(e.lower_bits) + ", " + fmt(e.upper_bits) +
                  "] vs [0.5, 0.5 + 1e-3]"};
}

Verdict witness_identities() {
  Rng rng(kSeed);
  double formation = 0.0;
  for (int t = 0; t < 200; ++t) {
    const DensityState rho = random_density_hs(rng, abe_layout(2, 2, 2), 1 + rng.index(4));
    const Witness w = random_witness(rng, rho, {1 + rng.index(2), 1 + rng.index(2), 2, 0});
    std::vector<double> p;
    std::vector<oracle::Vec> phi;
    for (const auto& m : w.members()) {
      p.push_back(m.weight);
      phi.push_back(m.amplitudes);
    }
    std::vector<long> dims;
    for (const auto& r : w.member_layout().registers()) dims.push_back(r.dim);
    const double ref = oracle::formation_objective(p, phi, dims, {{0}, {1}, {2}, 3, 4, 5});
    const double obj = w.objective();
    formation =
        std::max({formation, std::abs(obj - ref), std::abs(obj - formation_terms(w).value)});
  }
  const auto suffixed = [](const std::string& s) {
    return RegisterLayout({{"A" + s, 2, Party::Alice}, {"B" + s, 2, Party::Bob},
                           {"E" + s, 2, Party::Eve}});
  };
  double tensor_err = 0.0, mix_err = 0.0, regroup = -1.0;
  for (int t = 0; t < 100; ++t) {
    const Witness w1 = random_witness(rng, random_density_hs(rng, suffixed("1"), 2), {2, 1, 1, 2});
    const Witness w2 = random_witness(rng, random_density_hs(rng, suffixed("2"), 2), {1, 2, 1, 2});
    tensor_err = std::max(tensor_err, std::abs(witness_tensor(w1, w2).objective() -
                                               w1.objective() - w2.objective()));
    const ExtDims ext{1, 2, 1, 2};
    const Witness m1 = random_witness(rng, random_density_hs(rng, abe_layout(2, 2, 2), 2), ext);
    const Witness m2 = random_witness(rng, random_density_hs(rng, abe_layout(2, 2, 2), 2), ext);
    const double r = rng.uniform();
    mix_err = std::max(mix_err, std::abs(witness_mix({{r, m1}, {1.0 - r, m2}}).objective() -
                                         r * m1.objective() - (1.0 - r) * m2.objective()));
    const RegisterLayout l({{"A", 2, Party::Alice}, {"C", 2, Party::Alice},
                            {"B", 2, Party::Bob}, {"E", 2, Party::Eve}});
    const Witness g = random_witness(rng, random_density_hs(rng, l, 2), {1, 1, 2, 2});
    regroup = std::max(regroup, witness_regroup(g, "C").objective() - g.objective());
  }
  const bool ok = formation <= 1e-8 && tensor_err <= 1e-9 && mix_err <= 1e-9 && regroup <= 1e-9;
  return {ok, "200 formation recomputations max diff " + fmt(formation) +
                  " (tol 1e-8); 100 tensor/mix max diff " + fmt(tensor_err) + "/" +
                  fmt(mix_err) + " (tol 1e-9); 100 regroups max increase " + fmt(regroup)};
}

Verdict move_to_alice() {
  Rng rng(kSeed);
  double worst = -1e9;
  for (int t = 0; t < 100; ++t) {
    const long dq = t % 2 == 0 ? 2 : 4;
    const RegisterLayout l({{"A", 2, Party::Alice}, {"B", 2, Party::Bob},
                            {"E", 2, Party::Eve}, {"Q", dq, Party::Eve}});
    const Witness w = random_witness(rng, random_density_hs(rng, l, 2), {1, 1, 1, 2});
    const double rise = witness_move_to_alice(w, "Q").objective() - w.objective();
    worst = std::max(worst, rise - std::log2(static_cast<double>(dq)));
  }
  return {worst <= 1e-9, "100 moves with d_Q in {2,4}, max (increase - log2 d_Q) " + fmt(worst) +
                             " (tol 1e-9)"};
}

Verdict continuity() {
  Rng rng(kSeed);
  const RegisterLayout abe = abe_layout(2, 2, 2);
  double worst = -1e9;
  for (int t = 0; t < 200; ++t) {
    const PureState psi = random_pure(rng, abe);
    const double delta = 1e-4 + 0.3 * rng.uniform();
    CVec v = psi.amplitudes() + delta * gaussian_matrix(rng, abe.total_dim(), 1).col(0);
    v.normalize();
    const DensityState a = psi.density(), b = PureState(abe, v).density();
    const double diff = 0.5 * std::abs(mutual_information(a, {"A"}, {"B"}) -
                                       mutual_information(b, {"A"}, {"B"}));
    worst = std::max(worst, diff - continuity_bound(trace_distance(a, b), 2, 2));
  }
  return {worst <= 1e-9, "200 nearby pure pairs, max (difference - bound) " + fmt(worst)};
}

Verdict esqc() {
  EsqcConfig cfg;
  cfg.search.seed = kSeed;
  const double phi = estimate_esqc(zoo_state("bell"), cfg).upper_bits;
  const double cc = estimate_esqc(zoo_state("classical_corr"), cfg).upper_bits;
  Lemma5Config l5;
  l5.esqc = cfg;
  l5.nmf = nmf_config(kSeed);
  const double g1 = lemma5_check(zoo_state("bell"), l5).gap;
  const double g2 = lemma5_check(zoo_state("classical_corr"), l5).gap;
  const bool ok = std::abs(phi - 1.0) <= 1e-6 && cc <= 1e-3 && g1 <= 1e-3 && g2 <= 1e-3;
  return {ok, "maximally entangled " + fmt(phi) + " (1 +- 1e-6), classical " + fmt(cc) +
                  " (<= 1e-3), nmf comparison gaps " + fmt(g1) + "/" + fmt(g2) + " (<= 1e-3)"};
}

std::string results_of(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  if (run_cli(args, out, err) != kExitOk) throw std::runtime_error("cli failed: " + err.str());
  return Json::parse(out.str()).at("results").dump();
}

Verdict determinism() {
  const std::vector<std::string> nmf{"nmf", "zoo:hs_random?rank=2&seed=5", "--seed", "7"};
  const std::vector<std::string> fuzz{"fuzz", "p_suite", "--trials", "3", "--seed", "7"};
  std::vector<std::string> nmf_jobs = nmf, fuzz_jobs = fuzz;
  nmf_jobs.insert(nmf_jobs.end(), {"--jobs", "2"});
  fuzz_jobs.insert(fuzz_jobs.end(), {"--jobs", "2"});
  const std::string n1 = results_of(nmf), n2 = results_of(nmf), n3 = results_of(nmf_jobs);
  const std::string f1 = results_of(fuzz), f2 = results_of(fuzz), f3 = results_of(fuzz_jobs);
  const bool ok = n1 == n2 && n1 == n3 && f1 == f2 && f1 == f3;
  return {ok, "nmf and fuzz result payloads identical across 3 runs each (" +
                  std::to_string(n1.size()) + " and " + std::to_string(f1.size()) + " bytes)"};
}

}  // namespace

int main() {
  criterion(1, "example values", 1, examples);
  criterion(2, "strong subadditivity", 30, ssa);
  criterion(3, "free steps never increase M_I", 120, lemma1);
  criterion(4, "Markov closure under free scripts", 120, closure);
  criterion(5, "pure-state exactness", 60, pure_exactness);
  criterion(6, "zero on Markov states", 120, faithfulness);
  criterion(7, "classical-correlated benchmark", 60, classical_benchmark);
  criterion(8, "witness identities", 120, witness_identities);
  criterion(9, "witness transport E to A", 60, move_to_alice);
  criterion(10, "continuity cross-check", 30, continuity);
  criterion(11, "c-squashed entanglement", 60, esqc);
  criterion(12, "determinism", 600, determinism);
  std::printf("%d of 12 criteria passed\n", 12 - failures);
  return failures == 0 ? 0 : 1;
}
