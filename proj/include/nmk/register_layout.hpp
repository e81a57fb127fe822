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

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace nmk {

enum class Party { Alice, Bob, Eve, Reference };

std::string_view to_string(Party p);
/// Accepts "alice", "bob", "eve", "reference" (case-insensitive) and the
/// single letters A, B, E, R.
Party party_from_string(std::string_view s);

struct Register {
  std::string label;
  long dim = 1;
  Party party = Party::Reference;

  bool operator==(const Register&) const = default;
};

using Labels = std::vector<std::string>;

/// Ordered, labeled subsystems. The first register is the most significant
/// digit of a basis index (big-endian).
class RegisterLayout {
 public:
  RegisterLayout() = default;
  explicit RegisterLayout(std::vector<Register> registers);

  const std::vector<Register>& registers() const { return registers_; }
  std::size_t size() const { return registers_.size(); }
  bool empty() const { return registers_.empty(); }
  long total_dim() const;

  bool contains(std::string_view label) const;
  std::size_t index_of(std::string_view label) const;
  const Register& at(std::string_view label) const;

  Labels labels() const;
  Labels labels_of(Party p) const;
  long dim_of(const Labels& labels) const;
  std::vector<std::size_t> positions_of(const Labels& labels) const;

  /// Kept registers in this layout's order.
  RegisterLayout subset(const Labels& keep) const;
  RegisterLayout without(const Labels& drop) const;
  RegisterLayout concat(const RegisterLayout& other) const;
  /// Registers listed in `order`, which must be a permutation of the labels.
  RegisterLayout reordered(const Labels& order) const;
  RegisterLayout with_party(std::string_view label, Party p) const;
  /// Replaces the adjacent run `labels` with one register of the product dim.
  RegisterLayout merged(const Labels& labels, const std::string& new_label,
                        Party p) const;

  /// Same labels and dimensions in the same order; parties ignored.
  bool same_shape(const RegisterLayout& other) const;

  bool operator==(const RegisterLayout&) const = default;

 private:
  std::vector<Register> registers_;
};

/// For the registers at `positions` (enumerated big-endian in the listed
/// order), the offset each joint value contributes to the full basis index.
std::vector<long> subsystem_offsets(const RegisterLayout& layout,
                                    const std::vector<std::size_t>& positions);

std::vector<std::size_t> complement_positions(
    const RegisterLayout& layout, const std::vector<std::size_t>& positions);

/// Maximum total dimension of any dense state; NMK_DIM_BUDGET overrides the
/// default of 4096.
long dimension_budget();

/// A(da), B(db), E(de) tagged Alice, Bob, Eve.
RegisterLayout abe_layout(long da, long db, long de);

}  // namespace nmk
