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

#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "nmk/csquashed.hpp"
#include "nmk/entropy.hpp"
#include "nmk/error.hpp"
#include "nmk/random.hpp"
#include "nmk/zoo.hpp"

namespace nmk {
namespace {

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return Errc::ParseError;
}

const RegisterLayout kAB({{"A", 2, Party::Alice}, {"B", 2, Party::Bob}});

EsqcConfig quick(std::uint64_t seed) {
  EsqcConfig cfg;
  cfg.search.restarts = 6;
  cfg.search.max_iters = 200;
  cfg.search.seed = seed;
  return cfg;
}

TEST(EsqcObjective, Examples) {
  EXPECT_NEAR(esqc_objective({{1.0, zoo_state("bell")}}), 1.0, 1e-12);
  EXPECT_NEAR(esqc_objective({{1.0, zoo_state("classical_corr")}}), 0.5, 1e-12);
  EXPECT_NEAR(esqc_objective({{0.5, basis_state(kAB, {0, 0})}, {0.5, basis_state(kAB, {1, 1})}}),
              0.0, 1e-12);
  EXPECT_EQ(code_of([] { esqc_objective({{0.4, basis_state(kAB, {0, 0})}}); }),
            Errc::BadEnsemble);
  EXPECT_EQ(code_of([] { esqc_objective({}); }), Errc::BadEnsemble);
}

TEST(EstimateEsqc, Examples) {
  const EsqcEstimate bell = estimate_esqc(zoo_state("bell"), quick(1));
  EXPECT_NEAR(bell.upper_bits, 1.0, 1e-6);
  EXPECT_NEAR(bell.singleton_bits, 1.0, 1e-12);
  EXPECT_LE(estimate_esqc(zoo_state("classical_corr"), quick(2)).upper_bits, 1e-3);
  EXPECT_LE(estimate_esqc(zoo_state("product_pure"), quick(3)).upper_bits, 1e-9);
}

TEST(EstimateEsqc, EnsembleAveragesToInput) {
  Rng rng(4);
  for (int t = 0; t < 5; ++t) {
    const DensityState omega = random_density_hs(rng, kAB, 2);
    EsqcConfig cfg = quick(rng.engine()());
    cfg.e_prime = 1 + rng.index(2);
    const EsqcEstimate e = estimate_esqc(omega, cfg);
    CMat sum = CMat::Zero(4, 4);
    for (const auto& m : e.ensemble) sum += m.p * m.sigma.matrix();
    EXPECT_LT(max_abs(sum - omega.matrix()), 1e-9);
    EXPECT_NEAR(esqc_objective(e.ensemble), e.upper_bits, 1e-9);
    EXPECT_LE(e.upper_bits, e.singleton_bits + 1e-12);
    EXPECT_NEAR(e.dilution_single_copy_bits(), 2.0 * e.upper_bits, 0.0);
  }
}

TEST(EstimateEsqc, Errors) {
  EXPECT_EQ(code_of([] { estimate_esqc(zoo_state("bell_e0"), EsqcConfig{}); }),
            Errc::LayoutMismatch);
  const RegisterLayout big({{"A", 16, Party::Alice}, {"B", 8, Party::Bob}});
  EXPECT_EQ(code_of([&] { estimate_esqc(maximally_mixed(big), EsqcConfig{}); }),
            Errc::BadDims);
}

TEST(EstimateEsqc, Deterministic) {
  const DensityState omega = partial_trace(zoo_state("hs_random", {}, 8), {"A", "B"});
  const EsqcEstimate a = estimate_esqc(omega, quick(42));
  EsqcConfig cfg = quick(42);
  cfg.search.jobs = 2;
  const EsqcEstimate b = estimate_esqc(omega, cfg);
  EXPECT_EQ(a.upper_bits, b.upper_bits);
  ASSERT_EQ(a.restarts.size(), b.restarts.size());
  for (std::size_t i = 0; i < a.restarts.size(); ++i)
    EXPECT_EQ(a.restarts[i].objective, b.restarts[i].objective);
}

TEST(Ensembles, FromWitnessNeverExceedsObjective) {
  Rng rng(5);
  for (int t = 0; t < 10; ++t) {
    const DensityState rho = random_density_hs(rng, abe_layout(2, 2, 2), 2);
    const long r = 2;
    const ExtDims ext{1, 2, 2, 2};
    const Witness w = witness_from_isometry(rho, random_isometry(rng, ext.ext() * ext.k, r), ext);
    const auto ens = ensemble_from_witness(w);
    EXPECT_LE(esqc_objective(ens), w.objective() + 1e-9);
    CMat sum = CMat::Zero(4, 4);
    for (const auto& m : ens) sum += m.p * m.sigma.matrix();
    EXPECT_LT(max_abs(sum - partial_trace(rho, {"A", "B"}).matrix()), 1e-9);
  }
}

TEST(Ensembles, ExtensionRoundTrip) {
  Rng rng(6);
  for (int t = 0; t < 5; ++t) {
    std::vector<AbMember> ens;
    const auto p = random_probabilities(rng, 3);
    for (double pk : p) ens.push_back({pk, random_density_hs(rng, kAB, 1 + rng.index(2))});
    const Extension ext = extension_from_ensemble(ens);
    EXPECT_NEAR(ext.witness.objective(), esqc_objective(ens), 1e-9);
    CMat sum = CMat::Zero(4, 4);
    for (const auto& m : ens) sum += m.p * m.sigma.matrix();
    EXPECT_LT(max_abs(partial_trace(ext.state, {"A", "B"}).matrix() - sum), 1e-10);
    EXPECT_TRUE(ext.state.layout().contains("E~"));
    EXPECT_TRUE(ext.state.layout().contains("K~"));
    // Any extension's M_I lower-bounds the ensemble objective.
    EXPECT_LE(m_i_parties(ext.state), esqc_objective(ens) + 1e-9);
  }
}

TEST(Lemma5Check, GapIsSmallOnExamples) {
  Lemma5Config cfg;
  cfg.esqc = quick(7);
  cfg.nmf.search.restarts = 4;
  cfg.nmf.search.max_iters = 150;
  cfg.nmf.search.seed = 7;
  cfg.nmf.escalate = false;
  for (const char* name : {"bell", "classical_corr", "product_pure"}) {
    const Lemma5Report r = lemma5_check(zoo_state(name), cfg);
    EXPECT_NEAR(r.gap, std::abs(r.esqc_ub - r.msq_ub), 1e-12) << name;
    EXPECT_LE(r.gap, 1e-3) << name;
    EXPECT_EQ(r.extensions.size(), 3u) << name;
  }
}

}  // namespace
}  // namespace nmk
