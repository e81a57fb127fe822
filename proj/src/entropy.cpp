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

#include "nmk/entropy.hpp"

#include <set>

#include "nmk/error.hpp"

namespace nmk {
namespace {

Labels join(std::initializer_list<const Labels*> groups) {
  Labels out;
  for (const auto* g : groups) out.insert(out.end(), g->begin(), g->end());
  return out;
}

void check_disjoint(const Labels& a, const Labels& b, const Labels& e) {
  std::set<std::string> seen;
  for (const auto* g : {&a, &b, &e}) {
    for (const auto& l : *g) {
      if (!seen.insert(l).second) {
        throw Error(Errc::OverlappingPartition, "label '" + l + "' appears in two groups");
      }
    }
  }
}

}  // namespace

double spectrum_entropy(const RVec& eigenvalues) { return shannon_bits(eigenvalues); }

double matrix_entropy(const CMat& rho) {
  if (rho.rows() == 0) return 0.0;
  return spectrum_entropy(hermitian_eigenvalues(rho));
}

double entropy(const DensityState& s, const Labels& subset) {
  if (subset.empty()) return 0.0;
  return matrix_entropy(partial_trace(s, subset).matrix());
}

double conditional_entropy(const DensityState& s, const Labels& x, const Labels& y) {
  return entropy(s, join({&x, &y})) - entropy(s, y);
}

double mutual_information(const DensityState& s, const Labels& a, const Labels& b) {
  return cqmi(s, a, b, {});
}

double cqmi(const DensityState& s, const Labels& a, const Labels& b, const Labels& e) {
  check_disjoint(a, b, e);
  for (const auto* g : {&a, &b, &e}) {
    for (const auto& l : *g) s.layout().index_of(l);
  }
  const DensityState r = partial_trace(s, join({&a, &b, &e}));
  return entropy(r, join({&a, &e})) + entropy(r, join({&b, &e})) -
         entropy(r, join({&a, &b, &e})) - entropy(r, e);
}

double m_i(const DensityState& s, const Labels& a, const Labels& b, const Labels& e) {
  return 0.5 * cqmi(s, a, b, e);
}

PartyGroups party_groups(const RegisterLayout& layout) {
  return {layout.labels_of(Party::Alice), layout.labels_of(Party::Bob),
          layout.labels_of(Party::Eve)};
}

double m_i_parties(const DensityState& s) {
  const auto g = party_groups(s.layout());
  return m_i(s, g.a, g.b, g.e);
}

EntropyReport entropy_report(const DensityState& s, const Labels& a, const Labels& b,
                             const Labels& e) {
  check_disjoint(a, b, e);
  const DensityState r = partial_trace(s, join({&a, &b, &e}));
  EntropyReport out;
  out.a = a;
  out.b = b;
  out.e = e;
  out.s_a = entropy(r, a);
  out.s_b = entropy(r, b);
  out.s_e = entropy(r, e);
  out.s_ab = entropy(r, join({&a, &b}));
  out.s_ae = entropy(r, join({&a, &e}));
  out.s_be = entropy(r, join({&b, &e}));
  out.s_abe = entropy(r, join({&a, &b, &e}));
  out.s_ab_given_e = out.s_abe - out.s_e;
  out.i_ab = out.s_a + out.s_b - out.s_ab;
  out.cqmi = out.s_ae + out.s_be - out.s_abe - out.s_e;
  out.m_i = 0.5 * out.cqmi;
  return out;
}

}  // namespace nmk
