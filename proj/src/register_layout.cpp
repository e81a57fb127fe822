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

#include "nmk/register_layout.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <set>

#include "nmk/error.hpp"

namespace nmk {

std::string_view to_string(Party p) {
  switch (p) {
    case Party::Alice: return "alice";
    case Party::Bob: return "bob";
    case Party::Eve: return "eve";
    case Party::Reference: return "reference";
  }
  return "reference";
}

Party party_from_string(std::string_view s) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "alice" || lower == "a") return Party::Alice;
  if (lower == "bob" || lower == "b") return Party::Bob;
  if (lower == "eve" || lower == "e") return Party::Eve;
  if (lower == "reference" || lower == "r") return Party::Reference;
  throw Error(Errc::ParseError, "unknown party '" + std::string(s) + "'");
}

RegisterLayout::RegisterLayout(std::vector<Register> registers)
    : registers_(std::move(registers)) {
  std::set<std::string> seen;
  for (const auto& r : registers_) {
    if (r.label.empty()) throw Error(Errc::BadDims, "empty register label");
    if (r.dim < 1) {
      throw Error(Errc::BadDims, "register '" + r.label + "' has dimension " +
                                     std::to_string(r.dim));
    }
    if (!seen.insert(r.label).second) {
      throw Error(Errc::DuplicateLabel, "label '" + r.label + "' repeated");
    }
  }
}

long RegisterLayout::total_dim() const {
  long d = 1;
  for (const auto& r : registers_) d *= r.dim;
  return d;
}

bool RegisterLayout::contains(std::string_view label) const {
  return std::any_of(registers_.begin(), registers_.end(),
                     [&](const Register& r) { return r.label == label; });
}

std::size_t RegisterLayout::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < registers_.size(); ++i) {
    if (registers_[i].label == label) return i;
  }
  throw Error(Errc::UnknownLabel, "no register '" + std::string(label) + "'");
}

const Register& RegisterLayout::at(std::string_view label) const {
  return registers_[index_of(label)];
}

Labels RegisterLayout::labels() const {
  Labels out;
  for (const auto& r : registers_) out.push_back(r.label);
  return out;
}

Labels RegisterLayout::labels_of(Party p) const {
  Labels out;
  for (const auto& r : registers_) {
    if (r.party == p) out.push_back(r.label);
  }
  return out;
}

long RegisterLayout::dim_of(const Labels& labels) const {
  long d = 1;
  for (const auto& l : labels) d *= at(l).dim;
  return d;
}

std::vector<std::size_t> RegisterLayout::positions_of(const Labels& labels) const {
  std::vector<std::size_t> out;
  std::set<std::string> seen;
  for (const auto& l : labels) {
    if (!seen.insert(l).second) {
      throw Error(Errc::DuplicateLabel, "label '" + l + "' listed twice");
    }
    out.push_back(index_of(l));
  }
  return out;
}

RegisterLayout RegisterLayout::subset(const Labels& keep) const {
  auto pos = positions_of(keep);
  std::sort(pos.begin(), pos.end());
  std::vector<Register> regs;
  for (auto p : pos) regs.push_back(registers_[p]);
  return RegisterLayout(std::move(regs));
}

RegisterLayout RegisterLayout::without(const Labels& drop) const {
  const auto pos = positions_of(drop);
  std::vector<Register> regs;
  for (std::size_t i = 0; i < registers_.size(); ++i) {
    if (std::find(pos.begin(), pos.end(), i) == pos.end()) {
      regs.push_back(registers_[i]);
    }
  }
  return RegisterLayout(std::move(regs));
}

RegisterLayout RegisterLayout::concat(const RegisterLayout& other) const {
  std::vector<Register> regs = registers_;
  regs.insert(regs.end(), other.registers_.begin(), other.registers_.end());
  return RegisterLayout(std::move(regs));
}

RegisterLayout RegisterLayout::reordered(const Labels& order) const {
  if (order.size() != registers_.size()) {
    throw Error(Errc::LayoutMismatch, "reorder must list every register");
  }
  std::vector<Register> regs;
  for (auto p : positions_of(order)) regs.push_back(registers_[p]);
  return RegisterLayout(std::move(regs));
}

RegisterLayout RegisterLayout::with_party(std::string_view label, Party p) const {
  std::vector<Register> regs = registers_;
  regs[index_of(label)].party = p;
  return RegisterLayout(std::move(regs));
}

RegisterLayout RegisterLayout::merged(const Labels& labels,
                                      const std::string& new_label,
                                      Party p) const {
  if (labels.empty()) throw Error(Errc::BadDims, "nothing to merge");
  const auto pos = positions_of(labels);
  for (std::size_t i = 1; i < pos.size(); ++i) {
    if (pos[i] != pos[i - 1] + 1) {
      throw Error(Errc::LayoutMismatch, "merged registers must be adjacent and in order");
    }
  }
  std::vector<Register> regs(registers_.begin(), registers_.begin() + pos.front());
  regs.push_back({new_label, dim_of(labels), p});
  regs.insert(regs.end(), registers_.begin() + pos.back() + 1, registers_.end());
  return RegisterLayout(std::move(regs));
}

bool RegisterLayout::same_shape(const RegisterLayout& other) const {
  if (registers_.size() != other.registers_.size()) return false;
  for (std::size_t i = 0; i < registers_.size(); ++i) {
    if (registers_[i].label != other.registers_[i].label ||
        registers_[i].dim != other.registers_[i].dim) {
      return false;
    }
  }
  return true;
}

std::vector<long> subsystem_offsets(const RegisterLayout& layout,
                                    const std::vector<std::size_t>& positions) {
  const auto& regs = layout.registers();
  std::vector<long> stride(regs.size(), 1);
  for (std::size_t i = regs.size(); i-- > 1;) {
    stride[i - 1] = stride[i] * regs[i].dim;
  }
  std::vector<long> offsets{0};
  for (auto p : positions) {
    std::vector<long> next;
    next.reserve(offsets.size() * static_cast<std::size_t>(regs[p].dim));
    for (long base : offsets) {
      for (long d = 0; d < regs[p].dim; ++d) next.push_back(base + d * stride[p]);
    }
    offsets.swap(next);
  }
  return offsets;
}

std::vector<std::size_t> complement_positions(
    const RegisterLayout& layout, const std::vector<std::size_t>& positions) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < layout.size(); ++i) {
    if (std::find(positions.begin(), positions.end(), i) == positions.end()) {
      out.push_back(i);
    }
  }
  return out;
}

long dimension_budget() {
  if (const char* env = std::getenv("NMK_DIM_BUDGET")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return v;
  }
  return 4096;
}

RegisterLayout abe_layout(long da, long db, long de) {
  return RegisterLayout({{"A", da, Party::Alice}, {"B", db, Party::Bob},
                         {"E", de, Party::Eve}});
}

}  // namespace nmk
