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

#include <memory>
#include <optional>
#include <vector>

#include "nmk/linalg.hpp"
#include "nmk/register_layout.hpp"

namespace nmk {

/// Density operator on a register layout. Immutable once built.
///
/// The public constructor enforces Hermiticity (1e-10 max-abs), unit trace
/// (1e-10), a minimum eigenvalue of -1e-9 and the dimension budget, and
/// reports the first violated invariant by name.
class DensityState {
 public:
  DensityState(RegisterLayout layout, CMat matrix);

  /// For results of structure-preserving operations: Hermitizes and checks
  /// shape and budget only.
  static DensityState trusted(RegisterLayout layout, CMat matrix);

  const RegisterLayout& layout() const { return layout_; }
  const CMat& matrix() const { return matrix_; }
  long dim() const { return static_cast<long>(matrix_.rows()); }

  /// Relabels registers (same dims, same order); the matrix is untouched.
  DensityState relabeled(RegisterLayout layout) const;
  DensityState with_party(std::string_view label, Party p) const;

 private:
  struct TrustedTag {};
  DensityState(RegisterLayout layout, CMat matrix, TrustedTag);

  RegisterLayout layout_;
  CMat matrix_;
};

class PureState {
 public:
  PureState(RegisterLayout layout, CVec amplitudes);

  const RegisterLayout& layout() const { return layout_; }
  const CVec& amplitudes() const { return amplitudes_; }

  DensityState density() const;

 private:
  RegisterLayout layout_;
  CVec amplitudes_;
};

/// CPTP map in Kraus form. Each operator maps an input space of dimension
/// `input_dim()` to an output space of dimension `output_dim()`.
class ChannelMap {
 public:
  explicit ChannelMap(std::vector<CMat> kraus,
                      std::shared_ptr<const ChannelMap> inverse = nullptr);

  const std::vector<CMat>& kraus() const { return kraus_; }
  long input_dim() const { return kraus_.front().cols(); }
  long output_dim() const { return kraus_.front().rows(); }

  bool has_inverse() const { return inverse_ != nullptr; }
  const ChannelMap& inverse() const { return *inverse_; }
  ChannelMap with_inverse(ChannelMap inverse) const;

  /// Applies the map to an operator on the input space.
  CMat apply(const CMat& x) const;

  /// Largest entrywise deviation of inverse(map(E_ij)) from E_ij over all
  /// matrix units; infinity when no inverse is declared.
  double inverse_error() const;
  bool is_reversible(double tolerance = tol::kInverse) const {
    return inverse_error() <= tolerance;
  }

  /// V = sum_i K_i (x) |i>, mapping input to output (x) environment.
  CMat stinespring() const;

  static ChannelMap identity(long d);
  /// Unitary conjugation with the adjoint declared as inverse.
  static ChannelMap unitary(const CMat& u);
  /// Isometric embedding V (out >= in). The declared inverse is V^dag plus a
  /// reset of the complement of range(V) to |0>.
  static ChannelMap isometry(const CMat& v);
  /// Trace out a d-dimensional input.
  static ChannelMap discard(long d);
  /// Prepare `rho` from nothing (input dimension 1).
  static ChannelMap prepare(const CMat& rho);
  /// Computational-basis dephasing.
  static ChannelMap dephase(long d);
  /// sum_i p_i U_i . U_i^dag
  static ChannelMap mixed_unitary(const std::vector<double>& probs,
                                  const std::vector<CMat>& unitaries);

 private:
  std::vector<CMat> kraus_;
  std::shared_ptr<const ChannelMap> inverse_;
};

DensityState tensor(const DensityState& a, const DensityState& b);
PureState tensor(const PureState& a, const PureState& b);

/// Reduced state on `keep`, registers in their original order.
DensityState partial_trace(const DensityState& s, const Labels& keep);
DensityState partial_trace(const PureState& s, const Labels& keep);

/// Same state with registers permuted into `order`.
DensityState reorder(const DensityState& s, const Labels& order);
PureState reorder(const PureState& s, const Labels& order);

/// Purification with a reference register of dimension rank(s). Eigenvalues
/// are taken in descending order and the first non-negligible amplitude of
/// each eigenvector is made real positive, so the output is reproducible.
PureState purify(const DensityState& s, const std::string& ref_label);

/// Applies `c` to registers `on` (input big-endian in the listed order). The
/// `on` registers are replaced by `out_layout`, inserted where the earliest
/// of them sat; with `on` empty the outputs are appended.
DensityState apply_channel(const DensityState& s, const ChannelMap& c,
                           const Labels& on, const RegisterLayout& out_layout);

/// Applies a linear operator (e.g. an isometry) to registers of a pure state,
/// with the same placement rule as apply_channel.
PureState apply_operator(const PureState& s, const CMat& op, const Labels& on,
                         const RegisterLayout& out_layout);

/// Half the trace norm of the difference; layouts must have the same shape.
double trace_distance(const DensityState& a, const DensityState& b);

/// Uhlmann fidelity (tr |sqrt(a) sqrt(b)|)^2.
double fidelity(const DensityState& a, const DensityState& b);

/// Nonzero-relevant spectrum of the reduced state of a pure vector on the
/// registers at `positions`; computed on whichever side is smaller.
RVec pure_marginal_spectrum(const RegisterLayout& layout, const CVec& v,
                            const std::vector<std::size_t>& positions);

/// Reduced density matrix of a (not necessarily normalized) vector.
CMat pure_marginal(const RegisterLayout& layout, const CVec& v,
                   const std::vector<std::size_t>& positions);

DensityState basis_state(const RegisterLayout& layout,
                         const std::vector<long>& digits);
DensityState maximally_mixed(const RegisterLayout& layout);

}  // namespace nmk
