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

#include "nmk/markov.hpp"

#include <cmath>

#include "nmk/entropy.hpp"
#include "nmk/error.hpp"

namespace nmk {

void MarkovComponents::validate() const {
  if (entries.empty()) throw Error(Errc::InconsistentDims, "no entries");
  if (dim_a < 1 || dim_b < 1 || dim_el < 1 || dim_er < 1) {
    throw Error(Errc::InconsistentDims, "dimensions must be positive");
  }
  double total = 0.0;
  for (std::size_t j = 0; j < entries.size(); ++j) {
    const auto& en = entries[j];
    if (en.sigma.dim() != dim_a * dim_el) {
      throw Error(Errc::InconsistentDims, "sigma_" + std::to_string(j) + " has dimension " +
                                              std::to_string(en.sigma.dim()) +
                                              ", expected dim_a*dim_el");
    }
    if (en.tau.dim() != dim_b * dim_er) {
      throw Error(Errc::InconsistentDims, "tau_" + std::to_string(j) + " has dimension " +
                                              std::to_string(en.tau.dim()) +
                                              ", expected dim_b*dim_er");
    }
    if (!(en.p >= 0.0)) throw Error(Errc::BadProbabilities, "negative probability");
    total += en.p;
  }
  if (std::abs(total - 1.0) > tol::kProbability) {
    throw Error(Errc::BadProbabilities, "probabilities sum to " + std::to_string(total));
  }
}

DensityState build_markov(const MarkovComponents& c) {
  c.validate();
  const long n = static_cast<long>(c.entries.size());
  const long a = c.dim_a, b = c.dim_b, el = c.dim_el, er = c.dim_er;
  const long de = n * el * er;
  RegisterLayout layout = abe_layout(a, b, de);
  if (layout.total_dim() > dimension_budget()) {
    throw Error(Errc::BudgetExceeded, "Markov state exceeds the dimension budget");
  }
  const long d = layout.total_dim();
  CMat m = CMat::Zero(d, d);
  auto index = [&](long x, long y, long j, long l, long r) {
    return ((x * b + y) * n + j) * el * er + l * er + r;
  };
  for (long j = 0; j < n; ++j) {
    const double p = c.entries[static_cast<std::size_t>(j)].p;
    if (p == 0.0) continue;
    const CMat& sg = c.entries[static_cast<std::size_t>(j)].sigma.matrix();
    const CMat& ta = c.entries[static_cast<std::size_t>(j)].tau.matrix();
    for (long x = 0; x < a; ++x)
      for (long l = 0; l < el; ++l)
        for (long x2 = 0; x2 < a; ++x2)
          for (long l2 = 0; l2 < el; ++l2) {
            const Complex s = p * sg(x * el + l, x2 * el + l2);
            if (s == Complex(0.0)) continue;
            for (long y = 0; y < b; ++y)
              for (long r = 0; r < er; ++r)
                for (long y2 = 0; y2 < b; ++y2)
                  for (long r2 = 0; r2 < er; ++r2) {
                    m(index(x, y, j, l, r), index(x2, y2, j, l2, r2)) =
                        s * ta(y * er + r, y2 * er + r2);
                  }
          }
  }
  return DensityState(std::move(layout), std::move(m));
}

MarkovComponents random_markov_components(Rng& rng, long entries, long dim_a,
                                          long dim_b, long dim_el, long dim_er) {
  MarkovComponents c;
  c.dim_a = dim_a;
  c.dim_b = dim_b;
  c.dim_el = dim_el;
  c.dim_er = dim_er;
  const auto p = random_probabilities(rng, entries);
  const RegisterLayout left({{"A", dim_a, Party::Alice}, {"EL", dim_el, Party::Eve}});
  const RegisterLayout right({{"B", dim_b, Party::Bob}, {"ER", dim_er, Party::Eve}});
  for (long j = 0; j < entries; ++j) {
    DensityState sigma = random_density_hs(rng, left);
    DensityState tau = random_density_hs(rng, right);
    c.entries.push_back({p[static_cast<std::size_t>(j)], std::move(sigma), std::move(tau)});
  }
  return c;
}

Recovery petz_recover(const DensityState& s, const Labels& a, const Labels& b,
                      const Labels& e) {
  Labels all = a;
  all.insert(all.end(), b.begin(), b.end());
  all.insert(all.end(), e.begin(), e.end());
  const DensityState reduced = partial_trace(s, all);

  Labels ae = a;
  ae.insert(ae.end(), e.begin(), e.end());
  Labels be = b;
  be.insert(be.end(), e.begin(), e.end());
  const long da = s.layout().dim_of(a);
  const long db = s.layout().dim_of(b);
  const long de = s.layout().dim_of(e);

  auto grouped = [&](const Labels& keep) {
    const DensityState r = partial_trace(reduced, keep);
    return keep.empty() ? r.matrix() : reorder(r, keep).matrix();
  };
  const CMat rho_ae = grouped(ae);
  const CMat rho_be = grouped(be);
  const CMat rho_e = grouped(e);

  const CMat left = kron(CMat::Identity(da, da), psd_inv_sqrt(rho_e));
  const CMat y = left * rho_ae * left;
  // Embed Y (on A,E) as Y (x) I_B on (A,B,E).
  CMat z = CMat::Zero(da * db * de, da * db * de);
  for (long x = 0; x < da; ++x)
    for (long x2 = 0; x2 < da; ++x2)
      for (long yb = 0; yb < db; ++yb)
        z.block((x * db + yb) * de, (x2 * db + yb) * de, de, de) =
            y.block(x * de, x2 * de, de, de);
  const CMat outer = kron(CMat::Identity(da, da), psd_sqrt(rho_be));
  CMat out = outer * z * outer;
  const double raw = out.trace().real();
  if (raw > 0.0) out /= raw;

  // Back from (A,B,E) to the reduced state's order.
  RegisterLayout grouped_layout = reduced.layout().reordered(all);
  DensityState g = DensityState::trusted(grouped_layout, std::move(out));
  return {reorder(g, reduced.layout().labels()), raw};
}

MarkovScore markov_score(const DensityState& s, const Labels& a, const Labels& b,
                         const Labels& e, double tol) {
  const double c = cqmi(s, a, b, e);
  Labels all = a;
  all.insert(all.end(), b.begin(), b.end());
  all.insert(all.end(), e.begin(), e.end());
  const Recovery rec = petz_recover(s, a, b, e);
  const double f = fidelity(rec.state, partial_trace(s, all));
  return {c, f, c <= tol, tol};
}

}  // namespace nmk
