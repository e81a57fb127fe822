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

#include "nmk/entropy.hpp"
#include "nmk/error.hpp"
#include "nmk/nmf.hpp"
#include "nmk/random.hpp"
#include "nmk/zoo.hpp"
#include "oracle.hpp"

namespace nmk {
namespace {

constexpr double kTol = 1e-9;

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return Errc::ParseError;
}

long rank_of(const DensityState& rho) { return purify(rho, "R").layout().at("R").dim; }

Witness random_witness(Rng& rng, const DensityState& rho, ExtDims ext) {
  const long r = rank_of(rho);
  if (ext.k == 0) ext.k = r;
  return witness_from_isometry(rho, random_isometry(rng, ext.ext() * ext.k, r), ext);
}

NmfConfig quick(std::uint64_t seed, int restarts = 4) {
  NmfConfig cfg;
  cfg.search.restarts = restarts;
  cfg.search.max_iters = 200;
  cfg.search.seed = seed;
  cfg.escalate = false;
  return cfg;
}

std::vector<long> dims_of(const RegisterLayout& l) {
  std::vector<long> d;
  for (const auto& r : l.registers()) d.push_back(r.dim);
  return d;
}

TEST(Witness, ReservedLabelsAndBadWeights) {
  const RegisterLayout clash({{"A'", 2, Party::Alice}, {"B", 2, Party::Bob}});
  CVec v = CVec::Zero(4);
  v(0) = 1.0;
  EXPECT_EQ(code_of([&] { Witness(clash, {1, 1, 1, 1}, {{1.0, v}}); }), Errc::LayoutClash);
  const RegisterLayout ab({{"A", 2, Party::Alice}, {"B", 2, Party::Bob}});
  EXPECT_EQ(code_of([&] { Witness(ab, {1, 1, 1, 1}, {{0.7, v}}); }), Errc::BadEnsemble);
  EXPECT_EQ(code_of([&] { Witness(ab, {1, 1, 1, 1}, {{1.0, 2.0 * v}}); }), Errc::BadEnsemble);
  EXPECT_EQ(code_of([&] { Witness(ab, {1, 1, 1, 1}, {{0.5, v}, {0.5, v}}); }),
            Errc::BadEnsemble);
}

TEST(Witness, ReducedStateMatchesInput) {
  Rng rng(10);
  for (int t = 0; t < 20; ++t) {
    const DensityState rho = random_density_hs(rng, abe_layout(2, 2, 2), 1 + rng.index(4));
    const Witness w = random_witness(rng, rho, {2, 1, 2, 0});
    EXPECT_LT(trace_distance(w.reduced(), rho), 1e-10);
  }
}

TEST(Witness, ObjectiveMatchesFormationOracle) {
  Rng rng(11);
  for (int t = 0; t < 30; ++t) {
    const DensityState rho = random_density_hs(rng, abe_layout(2, 2, 2), 1 + rng.index(3));
    const Witness w = random_witness(rng, rho, {1 + rng.index(2), 1 + rng.index(2), 2, 0});
    std::vector<double> p;
    std::vector<oracle::Vec> phi;
    for (const auto& m : w.members()) {
      p.push_back(m.weight);
      phi.push_back(m.amplitudes);
    }
    const oracle::MemberGroups g{{0}, {1}, {2}, 3, 4, 5};
    const double want = oracle::formation_objective(p, phi, dims_of(w.member_layout()), g);
    EXPECT_NEAR(w.objective(), want, 1e-8);
    EXPECT_NEAR(formation_terms(w).value, want, 1e-8);
  }
}

TEST(Witness, ObjectiveMatchesRealizedConditionalInformation) {
  Rng rng(12);
  for (int t = 0; t < 20; ++t) {
    const DensityState rho = random_density_hs(rng, abe_layout(2, 2, 2), 2);
    const Witness w = random_witness(rng, rho, {2, 2, 1, 0});
    const DensityState f = w.realize();
    const double direct = 0.5 * (cqmi(f, {"A", kAPrime}, {"B", kBPrime}, {kFlag}) +
                                 cqmi(f, {"A", "B"}, {kEPrime, kFlag}, {"E"}));
    EXPECT_NEAR(w.objective(), direct, 1e-8);
  }
}

TEST(Witness, ObjectiveBoundedByMiAndMarginalEntropies) {
  Rng rng(13);
  for (int t = 0; t < 30; ++t) {
    const DensityState rho = random_density_hs(rng, abe_layout(2, 2, 2), 1 + rng.index(4));
    const Witness w = random_witness(rng, rho, {2, 2, 2, 0});
    EXPECT_GE(w.objective(), m_i_parties(rho) - kTol);
  }
}

TEST(Witness, BaselinesReduceToInput) {
  Rng rng(14);
  const DensityState rho = random_density_hs(rng, abe_layout(2, 2, 2), 3);
  const auto base = baseline_witnesses(rho);
  ASSERT_EQ(base.size(), 2u);
  for (const auto& w : base) EXPECT_LT(trace_distance(w.reduced(), rho), 1e-10);
  // With B' purifying, the objective is 1/2 [S(A) + S(A|E)]; mirrored for A'.
  const double sa = entropy(rho, {"A"}) + conditional_entropy(rho, {"A"}, {"E"});
  const double sb = entropy(rho, {"B"}) + conditional_entropy(rho, {"B"}, {"E"});
  EXPECT_NEAR(base[0].objective(), 0.5 * sa, 1e-9);
  EXPECT_NEAR(base[1].objective(), 0.5 * sb, 1e-9);
}

TEST(Witness, FromIsometryErrors) {
  const DensityState rho = zoo_state("classical_corr_e0");
  EXPECT_EQ(code_of([&] { witness_from_isometry(rho, CMat::Ones(4, 2), {2, 1, 1, 2}); }),
            Errc::InvalidChannel);
  EXPECT_EQ(code_of([&] { witness_from_isometry(rho, CMat::Identity(4, 2), {2, 2, 1, 2}); }),
            Errc::DimensionMismatch);
}

TEST(Witness, MarkovWitnessIsExact) {
  Rng rng(15);
  for (int t = 0; t < 10; ++t) {
    const MarkovComponents c = random_markov_components(rng, 1 + rng.index(3), 2, 2,
                                                        1 + rng.index(2), 1 + rng.index(2));
    const Witness w = markov_witness(c);
    EXPECT_NEAR(w.objective(), 0.0, 1e-9);
    EXPECT_LT(trace_distance(w.reduced(), build_markov(c)), 1e-10);
  }
}

TEST(WitnessOps, TensorIsAdditive) {
  Rng rng(16);
  const auto layout = [](const std::string& s) {
    return RegisterLayout({{"A" + s, 2, Party::Alice}, {"B" + s, 2, Party::Bob},
                           {"E" + s, 2, Party::Eve}});
  };
  for (int t = 0; t < 10; ++t) {
    const DensityState r1 = random_density_hs(rng, layout("1"), 2);
    const DensityState r2 = random_density_hs(rng, layout("2"), 2);
    const Witness w1 = random_witness(rng, r1, {2, 1, 1, 2});
    const Witness w2 = random_witness(rng, r2, {1, 2, 1, 2});
    const Witness w = witness_tensor(w1, w2);
    EXPECT_NEAR(w.objective(), w1.objective() + w2.objective(), kTol);
    EXPECT_LT(trace_distance(w.reduced(), tensor(r1, r2)), 1e-10);
  }
}

TEST(WitnessOps, MixIsLinear) {
  Rng rng(17);
  for (int t = 0; t < 10; ++t) {
    const ExtDims ext{1, 2, 1, 2};
    const DensityState r1 = random_density_hs(rng, abe_layout(2, 2, 2), 2);
    const DensityState r2 = random_density_hs(rng, abe_layout(2, 2, 2), 2);
    const Witness w1 = random_witness(rng, r1, ext);
    const Witness w2 = random_witness(rng, r2, ext);
    const double r = rng.uniform();
    const Witness m = witness_mix({{r, w1}, {1.0 - r, w2}});
    EXPECT_NEAR(m.objective(), r * w1.objective() + (1.0 - r) * w2.objective(), kTol);
    const RegisterLayout flag({{"M", 2, Party::Eve}});
    CMat want = r * kron(r1.matrix(), basis_state(flag, {0}).matrix()) +
                (1.0 - r) * kron(r2.matrix(), basis_state(flag, {1}).matrix());
    EXPECT_LT(max_abs(m.reduced().matrix() - want), 1e-10);
  }
}

TEST(WitnessOps, RegroupDoesNotIncrease) {
  Rng rng(18);
  const RegisterLayout l({{"A", 2, Party::Alice}, {"C", 2, Party::Alice}, {"B", 2, Party::Bob},
                          {"E", 2, Party::Eve}});
  for (int t = 0; t < 10; ++t) {
    const Witness w = random_witness(rng, random_density_hs(rng, l, 2), {1, 1, 2, 2});
    EXPECT_LE(witness_regroup(w, "C").objective(), w.objective() + kTol);
  }
}

TEST(WitnessOps, MoveToAliceCostsAtMostLogDim) {
  Rng rng(19);
  for (long dq : {2L, 4L}) {
    const RegisterLayout l({{"A", 2, Party::Alice}, {"B", 2, Party::Bob},
                            {"E", 2, Party::Eve}, {"Q", dq, Party::Eve}});
    for (int t = 0; t < 5; ++t) {
      const Witness w = random_witness(rng, random_density_hs(rng, l, 2), {1, 1, 1, 2});
      const Witness m = witness_move_to_alice(w, "Q");
      EXPECT_EQ(m.target().at("Q").party, Party::Alice);
      EXPECT_LE(m.objective() - w.objective(), std::log2(static_cast<double>(dq)) + kTol);
    }
  }
}

TEST(WitnessOps, EveIsometryKeepsObjective) {
  Rng rng(20);
  for (int t = 0; t < 10; ++t) {
    const Witness w = random_witness(rng, random_density_hs(rng, abe_layout(2, 2, 2), 2),
                                     {1, 1, 2, 2});
    const Witness v = witness_apply_eve_isometry(w, random_isometry(rng, 3, 2), {"E"},
                                                 RegisterLayout({{"E", 3, Party::Eve}}));
    EXPECT_NEAR(v.objective(), w.objective(), kTol);
  }
}

TEST(WitnessOps, LocalChannelTransportsState) {
  Rng rng(21);
  for (int t = 0; t < 10; ++t) {
    const DensityState rho = random_density_hs(rng, abe_layout(2, 2, 2), 2);
    const Witness w = random_witness(rng, rho, {1, 1, 1, 2});
    const ChannelMap ch = random_channel(rng, 2, 2, 2);
    const RegisterLayout out({{"A", 2, Party::Alice}});
    const Witness t2 = witness_apply_local(w, ch, {"A"}, out, Party::Alice);
    EXPECT_LE(t2.objective(), w.objective() + kTol);
    EXPECT_LT(trace_distance(t2.reduced(), apply_channel(rho, ch, {"A"}, out)), 1e-10);
  }
}

TEST(EstimateNmf, BellPairIsOne) {
  const NmfEstimate e = estimate_nmf(zoo_state("bell_e0"), quick(1));
  EXPECT_NEAR(e.lower_bits, 1.0, 1e-9);
  EXPECT_NEAR(e.upper_bits, 1.0, 1e-6);
}

TEST(EstimateNmf, MarkovStatesAreZero) {
  const NmfEstimate e = estimate_nmf(zoo_state("ghz_diag"), quick(2));
  EXPECT_NEAR(e.lower_bits, 0.0, 1e-9);
  EXPECT_LE(e.upper_bits, 1e-6);
  Rng rng(22);
  const MarkovComponents c = random_markov_components(rng, 2, 2, 2, 1, 2);
  NmfConfig cfg = quick(3);
  cfg.seeds.push_back(markov_witness(c));
  const NmfEstimate s = estimate_nmf(build_markov(c), cfg);
  EXPECT_LE(s.upper_bits, 1e-3);
  EXPECT_GE(s.upper_bits, s.lower_bits - kTol);
}

TEST(EstimateNmf, ClassicalCorrelationBracket) {
  NmfConfig cfg = quick(4, 8);
  cfg.ext.k = 2;
  const NmfEstimate e = estimate_nmf(zoo_state("classical_corr_e0"), cfg);
  EXPECT_NEAR(e.lower_bits, 0.5, 1e-9);
  EXPECT_LE(e.upper_bits, 0.5 + 1e-3);
}

TEST(EstimateNmf, PureStatesAreExact) {
  Rng rng(23);
  for (int t = 0; t < 10; ++t) {
    const DensityState psi = random_pure(rng, abe_layout(2, 2, 2)).density();
    const NmfEstimate e = estimate_nmf(psi, quick(rng.engine()()));
    EXPECT_LE(e.gap(), 1e-6);
    EXPECT_NEAR(e.upper_bits, 0.5 * mutual_information(psi, {"A"}, {"B"}), 1e-6);
  }
}

TEST(EstimateNmf, SandwichedBetweenMiAndMarginals) {
  Rng rng(24);
  for (int t = 0; t < 5; ++t) {
    const DensityState rho = random_density_hs(rng, abe_layout(2, 2, 2), 2);
    const NmfEstimate e = estimate_nmf(rho, quick(rng.engine()()));
    EXPECT_NEAR(e.lower_bits, m_i_parties(rho), 1e-12);
    EXPECT_GE(e.upper_bits, e.lower_bits - kTol);
    EXPECT_LE(e.upper_bits, std::min(e.s_a, e.s_b) + kTol);
    EXPECT_NEAR(e.best.objective(), e.upper_bits, 1e-12);
    EXPECT_LT(trace_distance(e.best.reduced(), rho), 1e-9);
  }
}

TEST(EstimateNmf, DeterministicAndJobIndependent) {
  const DensityState rho = zoo_state("hs_random", {{"rank", "2"}}, 5);
  NmfConfig a = quick(99);
  NmfConfig b = a;
  b.search.jobs = 3;
  const NmfEstimate x = estimate_nmf(rho, a);
  const NmfEstimate y = estimate_nmf(rho, a);
  const NmfEstimate z = estimate_nmf(rho, b);
  EXPECT_EQ(x.upper_bits, y.upper_bits);
  EXPECT_EQ(x.upper_bits, z.upper_bits);
  ASSERT_EQ(x.trace.size(), z.trace.size());
  for (std::size_t i = 0; i < x.trace.size(); ++i) {
    EXPECT_EQ(x.trace[i].objective, z.trace[i].objective);
    EXPECT_EQ(x.trace[i].restart_id, z.trace[i].restart_id);
  }
}

TEST(EstimateNmf, Errors) {
  NmfConfig cfg = quick(5);
  cfg.ext.k = 1;
  EXPECT_EQ(code_of([&] { estimate_nmf(zoo_state("classical_corr_e0"), cfg); }),
            Errc::DimensionTooSmall);
  NmfConfig seeded = quick(5);
  seeded.seeds.push_back(baseline_witnesses(zoo_state("bell_e0"))[0]);
  EXPECT_EQ(code_of([&] { estimate_nmf(zoo_state("ghz_diag"), seeded); }),
            Errc::LayoutMismatch);
}

TEST(Continuity, BoundShape) {
  EXPECT_DOUBLE_EQ(continuity_bound(0.0, 2, 2), 0.0);
  double prev = 0.0;
  for (double eps = 1e-4; eps <= 1.0; eps *= 1.7) {
    const double b = continuity_bound(eps, 2, 2);
    EXPECT_GT(b, prev);
    prev = b;
  }
  const double s = std::sqrt(0.01);
  const double want = 4 * s * 2.0 + 3 * (1 + s) * binary_entropy(s / (1 + s));
  EXPECT_NEAR(continuity_bound(0.01, 2, 2), want, 1e-12);
  EXPECT_NEAR(continuity_bound(0.01, 2, 2), 2.25034, 1e-5);
  EXPECT_GT(continuity_bound(0.01, 4, 2), continuity_bound(0.01, 2, 2));
}

TEST(Continuity, HoldsOnNearbyPureStates) {
  Rng rng(25);
  for (int t = 0; t < 50; ++t) {
    const RegisterLayout abe = abe_layout(2, 2, 2);
    const PureState psi = random_pure(rng, abe);
    CVec v = psi.amplitudes() + (0.3 * rng.uniform()) * gaussian_matrix(rng, 8, 1).col(0);
    v.normalize();
    const DensityState a = psi.density(), b = PureState(abe, v).density();
    const double diff = std::abs(m_i_parties(a) - m_i_parties(b));
    EXPECT_LE(diff, continuity_bound(trace_distance(a, b), 2, 2) + kTol);
  }
}

TEST(TensorPower, TwoCopyBracket) {
  NmfConfig cfg = quick(6, 2);
  const DensityState rho = zoo_state("classical_corr_e0");
  cfg.ext.k = 2;
  const TensorPowerBracket b = tensor_power_bracket(rho, cfg);
  EXPECT_NEAR(b.lower_bits, 0.5, 1e-9);
  EXPECT_GE(b.single_upper, b.lower_bits - kTol);
  EXPECT_GE(b.two_copy_upper, b.lower_bits - kTol);
  EXPECT_LE(b.two_copy_upper, b.single_upper + 1e-6);
}

}  // namespace
}  // namespace nmk
