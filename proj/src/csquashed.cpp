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

#include "nmk/csquashed.hpp"

#include <algorithm>
#include <cmath>

#include "nmk/entropy.hpp"
#include "nmk/error.hpp"

namespace nmk {
namespace {

void require_ab(const RegisterLayout& layout) {
  for (const auto& r : layout.registers()) {
    if (r.party != Party::Alice && r.party != Party::Bob) {
      throw Error(Errc::LayoutMismatch,
                  "register '" + r.label + "' must belong to Alice or Bob");
    }
  }
}

double half_mi(const DensityState& s) {
  const auto g = party_groups(s.layout());
  return 0.5 * mutual_information(s, g.a, g.b);
}

// Members of the decomposition induced by W: R -> E'K, as unnormalized
// vectors on omega's registers (x) E'.
struct Decomposition {
  std::vector<double> p;
  std::vector<CVec> v;
};

Decomposition decompose(const CMat& psi, const CMat& w, long ep, long k) {
  const long d = psi.rows();
  const CMat full = psi * w.transpose();
  Decomposition out;
  double total = 0.0;
  for (long kk = 0; kk < k; ++kk) {
    CVec amp(d * ep);
    for (long x = 0; x < d; ++x)
      for (long j = 0; j < ep; ++j) amp(x * ep + j) = full(x, j * k + kk);
    const double weight = amp.squaredNorm();
    if (weight <= 1e-14) continue;
    out.p.push_back(weight);
    out.v.push_back(amp / std::sqrt(weight));
    total += weight;
  }
  for (auto& x : out.p) x /= total;
  return out;
}

}  // namespace

double esqc_objective(const std::vector<AbMember>& ensemble) {
  if (ensemble.empty()) throw Error(Errc::BadEnsemble, "empty ensemble");
  double total = 0.0, value = 0.0;
  for (const auto& m : ensemble) {
    if (!(m.p >= 0.0)) throw Error(Errc::BadEnsemble, "negative weight");
    if (!m.sigma.layout().same_shape(ensemble.front().sigma.layout())) {
      throw Error(Errc::BadEnsemble, "members live on different layouts");
    }
    total += m.p;
    value += m.p * half_mi(m.sigma);
  }
  if (std::abs(total - 1.0) > tol::kProbability) {
    throw Error(Errc::BadEnsemble, "weights sum to " + std::to_string(total));
  }
  return value;
}

EsqcEstimate estimate_esqc(const DensityState& omega, const EsqcConfig& config) {
  require_ab(omega.layout());
  if (omega.dim() > 64) throw Error(Errc::BadDims, "d_A d_B must be at most 64");
  if (config.e_prime < 1) throw Error(Errc::BadDims, "e' must be positive");

  const PureState psi_state = purify(omega, "R");
  const long d = omega.dim();
  const long r = psi_state.amplitudes().size() / d;
  CMat psi(d, r);
  for (long x = 0; x < d; ++x)
    for (long i = 0; i < r; ++i) psi(x, i) = psi_state.amplitudes()(x * r + i);

  const long k = config.k > 0 ? config.k : r;
  const long ep = config.e_prime;
  const long dd = ep * k;
  if (dd < r) {
    throw Error(Errc::DimensionTooSmall, "e'k = " + std::to_string(dd) + " is below rank " +
                                             std::to_string(r));
  }

  EsqcEstimate out;
  out.singleton_bits = half_mi(omega);
  out.upper_bits = out.singleton_bits;
  out.ensemble = {{1.0, omega}};

  if (r > 1 || ep > 1) {
    const RegisterLayout layout =
        omega.layout().concat(RegisterLayout({{"E'", ep, Party::Eve}}));
    const auto g = party_groups(layout);
    const auto pa = layout.positions_of(g.a);
    const auto pb = layout.positions_of(g.b);
    const std::vector<std::size_t> pe{layout.size() - 1};
    auto cost = [&](const CMat& w) {
      const Decomposition dec = decompose(psi, w, ep, k);
      double value = 0.0;
      for (std::size_t i = 0; i < dec.p.size(); ++i) {
        const double mi = spectrum_entropy(pure_marginal_spectrum(layout, dec.v[i], pa)) +
                          spectrum_entropy(pure_marginal_spectrum(layout, dec.v[i], pb)) -
                          spectrum_entropy(pure_marginal_spectrum(layout, dec.v[i], pe));
        value += dec.p[i] * 0.5 * mi;
      }
      return value;
    };
    SearchConfig search = config.search;
    search.target = 1e-10;
    auto results = minimize_over_isometries(cost, dd, r, search);
    const auto& best = results[best_restart(results)];
    if (best.objective < out.upper_bits) {
      const Decomposition dec = decompose(psi, best.w, ep, k);
      std::vector<AbMember> ensemble;
      for (std::size_t i = 0; i < dec.p.size(); ++i) {
        const PureState member(layout, dec.v[i]);
        ensemble.push_back({dec.p[i], partial_trace(member, omega.layout().labels())});
      }
      const double value = esqc_objective(ensemble);
      if (value < out.upper_bits) {
        out.upper_bits = value;
        out.ensemble = std::move(ensemble);
      }
    }
    for (auto& res : results) res.w.resize(0, 0);
    out.restarts = std::move(results);
  }
  return out;
}

std::vector<AbMember> ensemble_from_witness(const Witness& w) {
  Labels keep = w.target().labels_of(Party::Alice);
  const Labels bob = w.target().labels_of(Party::Bob);
  keep.insert(keep.end(), bob.begin(), bob.end());
  std::vector<AbMember> out;
  for (std::size_t k = 0; k < w.members().size(); ++k) {
    out.push_back({w.members()[k].weight, partial_trace(w.member_state(k), keep)});
  }
  return out;
}

Extension extension_from_ensemble(const std::vector<AbMember>& ensemble) {
  esqc_objective(ensemble);
  const RegisterLayout& ab = ensemble.front().sigma.layout();
  require_ab(ab);
  const long n = static_cast<long>(ensemble.size());
  const long d = ab.total_dim();

  std::vector<Eigh> spectra;
  long m = 1;
  for (const auto& mem : ensemble) {
    spectra.push_back(eigh(mem.sigma.matrix()));
    long rank = 0;
    while (rank < d && spectra.back().values(rank) > tol::kRank) ++rank;
    m = std::max(m, rank);
  }
  const RegisterLayout target =
      ab.concat(RegisterLayout({{"E~", m, Party::Eve}, {"K~", n, Party::Eve}}));
  const long dt = target.total_dim();

  CMat rho = CMat::Zero(dt, dt);
  std::vector<WitnessMember> members;
  for (long k = 0; k < n; ++k) {
    const Eigh& e = spectra[static_cast<std::size_t>(k)];
    CVec amp = CVec::Zero(dt);
    for (long i = 0; i < m; ++i) {
      if (e.values(i) <= tol::kRank) continue;
      for (long x = 0; x < d; ++x)
        amp((x * m + i) * n + k) = std::sqrt(e.values(i)) * e.vectors(x, i);
    }
    amp.normalize();
    const double p = ensemble[static_cast<std::size_t>(k)].p;
    rho += p * amp * amp.adjoint();
    members.push_back({p, std::move(amp)});
  }
  std::vector<WitnessMember> kept;
  for (auto& mem : members) {
    if (mem.weight > 0.0) kept.push_back(std::move(mem));
  }
  return {DensityState(target, std::move(rho)), Witness(target, {1, 1, 1, n}, std::move(kept))};
}

Lemma5Report lemma5_check(const DensityState& omega, const Lemma5Config& config) {
  const EsqcEstimate es = estimate_esqc(omega, config.esqc);
  Lemma5Report out{es.upper_bits, 0.0, 0.0, {}};

  {
    const DensityState ext =
        tensor(omega, basis_state(RegisterLayout({{"E", 1, Party::Eve}}), {0}));
    out.extensions.push_back({"product", estimate_nmf(ext, config.nmf).upper_bits});
  }
  {
    PureState p = purify(omega, "E");
    const DensityState ext = p.density().with_party("E", Party::Eve);
    out.extensions.push_back({"purification", estimate_nmf(ext, config.nmf).upper_bits});
  }
  {
    const Extension ext = extension_from_ensemble(es.ensemble);
    NmfConfig cfg = config.nmf;
    cfg.seeds.push_back(ext.witness);
    out.extensions.push_back({"classical_flag", estimate_nmf(ext.state, cfg).upper_bits});
  }
  out.msq_ub = out.extensions.front().objective;
  for (const auto& e : out.extensions) out.msq_ub = std::min(out.msq_ub, e.objective);
  out.gap = std::abs(out.esqc_ub - out.msq_ub);
  return out;
}

}  // namespace nmk
