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

#pragma once

#include "nmk/qstate.hpp"

namespace nmk {

/// All values in bits.
double spectrum_entropy(const RVec& eigenvalues);
double matrix_entropy(const CMat& rho);

/// S of the reduced state on `subset`; the empty subset has entropy 0.
double entropy(const DensityState& s, const Labels& subset);

/// S(X|Y) = S(XY) - S(Y).
double conditional_entropy(const DensityState& s, const Labels& x, const Labels& y);

double mutual_information(const DensityState& s, const Labels& a, const Labels& b);

/// I(A:B|E) = S(AE) + S(BE) - S(ABE) - S(E). E may be empty. Throws
/// OverlappingPartition when the groups share a label.
double cqmi(const DensityState& s, const Labels& a, const Labels& b, const Labels& e);

/// Half the CQMI.
double m_i(const DensityState& s, const Labels& a, const Labels& b, const Labels& e);

/// Labels held by Alice, Bob and Eve, in layout order.
struct PartyGroups {
  Labels a, b, e;
};
PartyGroups party_groups(const RegisterLayout& layout);

/// M_I with the partition read off the party tags; Reference registers are
/// traced out.
double m_i_parties(const DensityState& s);

struct EntropyReport {
  Labels a, b, e;
  double s_a = 0, s_b = 0, s_e = 0, s_ab = 0, s_ae = 0, s_be = 0, s_abe = 0;
  double s_ab_given_e = 0;
  double i_ab = 0;
  double cqmi = 0;
  double m_i = 0;
};

EntropyReport entropy_report(const DensityState& s, const Labels& a, const Labels& b,
                             const Labels& e);

}  // namespace nmk
