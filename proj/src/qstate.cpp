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

#include "nmk/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nmk/error.hpp"

namespace nmk {
namespace {

void check_budget(long dim) {
  const long budget = dimension_budget();
  if (dim > budget) {
    throw Error(Errc::BudgetExceeded, "total dimension " + std::to_string(dim) +
                                          " exceeds the budget of " +
                                          std::to_string(budget));
  }
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << x;
  return os.str();
}

// Registers of `layout` other than `on`, in layout order.
Labels rest_labels(const RegisterLayout& layout, const Labels& on) {
  Labels rest;
  for (const auto& r : layout.registers()) {
    if (std::find(on.begin(), on.end(), r.label) == on.end()) rest.push_back(r.label);
  }
  return rest;
}

// Number of `rest` registers that precede the earliest `on` register.
std::size_t insertion_point(const RegisterLayout& layout, const Labels& on) {
  if (on.empty()) return layout.size() - on.size();
  std::size_t first = layout.size();
  for (const auto& l : on) first = std::min(first, layout.index_of(l));
  std::size_t count = 0;
  for (std::size_t i = 0; i < first; ++i) {
    if (std::find(on.begin(), on.end(), layout.registers()[i].label) == on.end()) ++count;
  }
  return count;
}

// [rest[0..p), out..., rest[p..)] as a label order over layout out+rest.
Labels placed_order(const RegisterLayout& out, const Labels& rest, std::size_t p) {
  Labels order(rest.begin(), rest.begin() + static_cast<long>(p));
  for (const auto& r : out.registers()) order.push_back(r.label);
  order.insert(order.end(), rest.begin() + static_cast<long>(p), rest.end());
  return order;
}

std::vector<long> permutation_to(const RegisterLayout& layout, const Labels& order) {
  return subsystem_offsets(layout, layout.positions_of(order));
}

}  // namespace

// --- DensityState -----------------------------------------------------------

DensityState::DensityState(RegisterLayout layout, CMat matrix)
    : layout_(std::move(layout)), matrix_(std::move(matrix)) {
  const long d = layout_.total_dim();
  if (matrix_.rows() != d || matrix_.cols() != d) {
    throw Error(Errc::DimensionMismatch,
                "matrix is " + std::to_string(matrix_.rows()) + "x" +
                    std::to_string(matrix_.cols()) + " but the layout has dimension " +
                    std::to_string(d));
  }
  check_budget(d);
  const double herm = max_abs(matrix_ - matrix_.adjoint());
  if (herm > tol::kHermitian) {
    throw Error(Errc::InvalidState, "hermiticity violated (max |rho - rho^dag| = " +
                                        fmt(herm) + ")");
  }
  const Complex tr = matrix_.trace();
  if (std::abs(tr - Complex(1.0, 0.0)) > tol::kTrace) {
    throw Error(Errc::InvalidState,
                "unit trace violated (trace = " + fmt(tr.real()) + ")");
  }
  matrix_ = hermitian_part(matrix_);
  const double min_eig = hermitian_eigenvalues(matrix_).minCoeff();
  if (min_eig < tol::kMinEigenvalue) {
    throw Error(Errc::InvalidState,
                "positive semidefiniteness violated (min eigenvalue = " +
                    fmt(min_eig) + ")");
  }
}

DensityState::DensityState(RegisterLayout layout, CMat matrix, TrustedTag)
    : layout_(std::move(layout)), matrix_(std::move(matrix)) {
  const long d = layout_.total_dim();
  if (matrix_.rows() != d || matrix_.cols() != d) {
    throw Error(Errc::DimensionMismatch, "matrix does not match layout dimension " +
                                             std::to_string(d));
  }
  check_budget(d);
  matrix_ = hermitian_part(matrix_);
}

DensityState DensityState::trusted(RegisterLayout layout, CMat matrix) {
  return DensityState(std::move(layout), std::move(matrix), TrustedTag{});
}

DensityState DensityState::relabeled(RegisterLayout layout) const {
  if (layout.size() != layout_.size()) {
    throw Error(Errc::LayoutMismatch, "relabel must keep the register count");
  }
  for (std::size_t i = 0; i < layout.size(); ++i) {
    if (layout.registers()[i].dim != layout_.registers()[i].dim) {
      throw Error(Errc::LayoutMismatch, "relabel must keep register dimensions");
    }
  }
  return DensityState(std::move(layout), matrix_, TrustedTag{});
}

DensityState DensityState::with_party(std::string_view label, Party p) const {
  return DensityState(layout_.with_party(label, p), matrix_, TrustedTag{});
}

// --- PureState --------------------------------------------------------------

PureState::PureState(RegisterLayout layout, CVec amplitudes)
    : layout_(std::move(layout)), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != layout_.total_dim()) {
    throw Error(Errc::DimensionMismatch, "amplitude vector does not match layout");
  }
  check_budget(layout_.total_dim());
  if (std::abs(amplitudes_.norm() - 1.0) > tol::kUnitNorm) {
    throw Error(Errc::InvalidState,
                "unit norm violated (norm = " + fmt(amplitudes_.norm()) + ")");
  }
}

DensityState PureState::density() const {
  return DensityState::trusted(layout_, amplitudes_ * amplitudes_.adjoint());
}

// --- ChannelMap -------------------------------------------------------------

ChannelMap::ChannelMap(std::vector<CMat> kraus, std::shared_ptr<const ChannelMap> inverse)
    : kraus_(std::move(kraus)), inverse_(std::move(inverse)) {
  if (kraus_.empty()) throw Error(Errc::InvalidChannel, "no Kraus operators");
  const auto rows = kraus_.front().rows();
  const auto cols = kraus_.front().cols();
  if (rows < 1 || cols < 1) throw Error(Errc::InvalidChannel, "empty Kraus operator");
  CMat completeness = CMat::Zero(cols, cols);
  for (const auto& k : kraus_) {
    if (k.rows() != rows || k.cols() != cols) {
      throw Error(Errc::InvalidChannel, "Kraus operators differ in shape");
    }
    completeness += k.adjoint() * k;
  }
  const double err = max_abs(completeness - CMat::Identity(cols, cols));
  if (err > tol::kCompleteness) {
    throw Error(Errc::InvalidChannel,
                "completeness violated (max |sum K^dag K - I| = " + fmt(err) + ")");
  }
}

ChannelMap ChannelMap::with_inverse(ChannelMap inverse) const {
  return ChannelMap(kraus_, std::make_shared<const ChannelMap>(std::move(inverse)));
}

CMat ChannelMap::apply(const CMat& x) const {
  CMat out = CMat::Zero(output_dim(), output_dim());
  for (const auto& k : kraus_) out += k * x * k.adjoint();
  return out;
}

double ChannelMap::inverse_error() const {
  if (!inverse_) return std::numeric_limits<double>::infinity();
  if (inverse_->input_dim() != output_dim() || inverse_->output_dim() != input_dim()) {
    return std::numeric_limits<double>::infinity();
  }
  const long d = input_dim();
  double err = 0.0;
  for (long i = 0; i < d; ++i) {
    for (long j = 0; j < d; ++j) {
      CMat unit = CMat::Zero(d, d);
      unit(i, j) = 1.0;
      err = std::max(err, max_abs(inverse_->apply(apply(unit)) - unit));
    }
  }
  return err;
}

CMat ChannelMap::stinespring() const {
  const long n = static_cast<long>(kraus_.size());
  CMat v(output_dim() * n, input_dim());
  for (long z = 0; z < output_dim(); ++z) {
    for (long i = 0; i < n; ++i) v.row(z * n + i) = kraus_[static_cast<std::size_t>(i)].row(z);
  }
  return v;
}

ChannelMap ChannelMap::identity(long d) {
  return unitary(CMat::Identity(d, d));
}

ChannelMap ChannelMap::unitary(const CMat& u) {
  if (u.rows() != u.cols()) throw Error(Errc::InvalidChannel, "unitary must be square");
  auto inv = std::make_shared<const ChannelMap>(std::vector<CMat>{u.adjoint()});
  return ChannelMap({u}, inv);
}

ChannelMap ChannelMap::isometry(const CMat& v) {
  if (v.rows() < v.cols()) throw Error(Errc::InvalidChannel, "isometry needs out >= in");
  const long in = v.cols();
  const long out = v.rows();
  std::vector<CMat> inv{v.adjoint()};
  if (out > in) {
    const CMat projector = CMat::Identity(out, out) - v * v.adjoint();
    const Eigh e = eigh(projector);
    for (long j = 0; j < out - in; ++j) {
      CMat k = CMat::Zero(in, out);
      k.row(0) = e.vectors.col(j).adjoint();
      inv.push_back(k);
    }
  }
  return ChannelMap({v}, std::make_shared<const ChannelMap>(std::move(inv)));
}

ChannelMap ChannelMap::discard(long d) {
  std::vector<CMat> kraus;
  for (long i = 0; i < d; ++i) {
    CMat k = CMat::Zero(1, d);
    k(0, i) = 1.0;
    kraus.push_back(k);
  }
  return ChannelMap(std::move(kraus));
}

ChannelMap ChannelMap::prepare(const CMat& rho) {
  const Eigh e = eigh(rho);
  std::vector<CMat> kraus;
  for (Eigen::Index i = 0; i < e.values.size(); ++i) {
    if (e.values(i) > tol::kRank) kraus.push_back(std::sqrt(e.values(i)) * e.vectors.col(i));
  }
  // Renormalize away the clamped tail.
  double total = 0.0;
  for (const auto& k : kraus) total += k.squaredNorm();
  for (auto& k : kraus) k /= std::sqrt(total);
  return ChannelMap(std::move(kraus));
}

ChannelMap ChannelMap::dephase(long d) {
  std::vector<CMat> kraus;
  for (long i = 0; i < d; ++i) {
    CMat k = CMat::Zero(d, d);
    k(i, i) = 1.0;
    kraus.push_back(k);
  }
  return ChannelMap(std::move(kraus));
}

ChannelMap ChannelMap::mixed_unitary(const std::vector<double>& probs,
                                     const std::vector<CMat>& unitaries) {
  if (probs.size() != unitaries.size() || probs.empty()) {
    throw Error(Errc::InvalidChannel, "one probability per unitary required");
  }
  std::vector<CMat> kraus;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] < 0.0) throw Error(Errc::BadProbabilities, "negative probability");
    kraus.push_back(std::sqrt(probs[i]) * unitaries[i]);
  }
  return ChannelMap(std::move(kraus));
}

// --- structural operations --------------------------------------------------

DensityState tensor(const DensityState& a, const DensityState& b) {
  RegisterLayout layout = a.layout().concat(b.layout());
  check_budget(layout.total_dim());
  return DensityState::trusted(std::move(layout), kron(a.matrix(), b.matrix()));
}

PureState tensor(const PureState& a, const PureState& b) {
  RegisterLayout layout = a.layout().concat(b.layout());
  CVec v(a.amplitudes().size() * b.amplitudes().size());
  for (Eigen::Index i = 0; i < a.amplitudes().size(); ++i) {
    v.segment(i * b.amplitudes().size(), b.amplitudes().size()) =
        a.amplitudes()(i) * b.amplitudes();
  }
  return PureState(std::move(layout), std::move(v));
}

DensityState partial_trace(const DensityState& s, const Labels& keep) {
  const RegisterLayout kept = s.layout().subset(keep);
  std::vector<std::size_t> keep_pos;
  for (const auto& r : kept.registers()) keep_pos.push_back(s.layout().index_of(r.label));
  const auto trace_pos = complement_positions(s.layout(), keep_pos);
  const auto off_k = subsystem_offsets(s.layout(), keep_pos);
  const auto off_t = subsystem_offsets(s.layout(), trace_pos);
  const long dk = static_cast<long>(off_k.size());
  const CMat& m = s.matrix();
  CMat out = CMat::Zero(dk, dk);
  for (long j = 0; j < dk; ++j) {
    for (long i = 0; i < dk; ++i) {
      Complex acc = 0.0;
      for (long t : off_t) acc += m(off_k[i] + t, off_k[j] + t);
      out(i, j) = acc;
    }
  }
  return DensityState::trusted(kept, std::move(out));
}

CMat pure_marginal(const RegisterLayout& layout, const CVec& v,
                   const std::vector<std::size_t>& positions) {
  const auto rest = complement_positions(layout, positions);
  const auto off_k = subsystem_offsets(layout, positions);
  const auto off_t = subsystem_offsets(layout, rest);
  CMat m(off_k.size(), off_t.size());
  for (std::size_t t = 0; t < off_t.size(); ++t) {
    for (std::size_t i = 0; i < off_k.size(); ++i) {
      m(static_cast<long>(i), static_cast<long>(t)) = v(off_k[i] + off_t[t]);
    }
  }
  return m * m.adjoint();
}

RVec pure_marginal_spectrum(const RegisterLayout& layout, const CVec& v,
                            const std::vector<std::size_t>& positions) {
  const auto rest = complement_positions(layout, positions);
  const auto off_k = subsystem_offsets(layout, positions);
  const auto off_t = subsystem_offsets(layout, rest);
  CMat m(off_k.size(), off_t.size());
  for (std::size_t t = 0; t < off_t.size(); ++t) {
    for (std::size_t i = 0; i < off_k.size(); ++i) {
      m(static_cast<long>(i), static_cast<long>(t)) = v(off_k[i] + off_t[t]);
    }
  }
  if (m.rows() <= m.cols()) return hermitian_eigenvalues(m * m.adjoint());
  return hermitian_eigenvalues(m.adjoint() * m);
}

DensityState partial_trace(const PureState& s, const Labels& keep) {
  const RegisterLayout kept = s.layout().subset(keep);
  std::vector<std::size_t> keep_pos;
  for (const auto& r : kept.registers()) keep_pos.push_back(s.layout().index_of(r.label));
  return DensityState::trusted(kept, pure_marginal(s.layout(), s.amplitudes(), keep_pos));
}

DensityState reorder(const DensityState& s, const Labels& order) {
  RegisterLayout layout = s.layout().reordered(order);
  const auto perm = permutation_to(s.layout(), order);
  const long d = s.dim();
  CMat out(d, d);
  for (long j = 0; j < d; ++j) {
    for (long i = 0; i < d; ++i) out(i, j) = s.matrix()(perm[i], perm[j]);
  }
  return DensityState::trusted(std::move(layout), std::move(out));
}

PureState reorder(const PureState& s, const Labels& order) {
  RegisterLayout layout = s.layout().reordered(order);
  const auto perm = permutation_to(s.layout(), order);
  CVec out(s.amplitudes().size());
  for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = s.amplitudes()(perm[i]);
  return PureState(std::move(layout), std::move(out));
}

PureState purify(const DensityState& s, const std::string& ref_label) {
  const Eigh e = eigh(s.matrix());
  long rank = 0;
  while (rank < e.values.size() && e.values(rank) > tol::kRank) ++rank;
  const long d = s.dim();
  CVec psi = CVec::Zero(d * rank);
  double norm2 = 0.0;
  for (long i = 0; i < rank; ++i) {
    CVec v = e.vectors.col(i);
    for (long x = 0; x < d; ++x) {
      if (std::abs(v(x)) > 1e-10) {
        v *= std::conj(v(x)) / std::abs(v(x));
        break;
      }
    }
    const double w = std::sqrt(e.values(i));
    norm2 += e.values(i);
    for (long x = 0; x < d; ++x) psi(x * rank + i) = w * v(x);
  }
  psi /= std::sqrt(norm2);
  RegisterLayout layout =
      s.layout().concat(RegisterLayout({{ref_label, rank, Party::Reference}}));
  return PureState(std::move(layout), std::move(psi));
}

DensityState apply_channel(const DensityState& s, const ChannelMap& c, const Labels& on,
                           const RegisterLayout& out_layout) {
  const long in_dim = on.empty() ? 1 : s.layout().dim_of(on);
  if (c.input_dim() != in_dim) {
    throw Error(Errc::DimensionMismatch,
                "channel input dimension " + std::to_string(c.input_dim()) +
                    " does not match registers of dimension " + std::to_string(in_dim));
  }
  if (c.output_dim() != out_layout.total_dim()) {
    throw Error(Errc::DimensionMismatch, "channel output dimension " +
                                             std::to_string(c.output_dim()) +
                                             " does not match the output layout");
  }
  const Labels rest = rest_labels(s.layout(), on);
  const std::size_t p = insertion_point(s.layout(), on);
  RegisterLayout result_layout = out_layout.concat(s.layout().subset(rest));
  check_budget(result_layout.total_dim());

  Labels front = on;
  front.insert(front.end(), rest.begin(), rest.end());
  const CMat rho = on.empty() ? s.matrix() : reorder(s, front).matrix();

  const long r = in_dim;
  const long so = c.output_dim();
  const long dr = s.dim() / r;
  CMat out = CMat::Zero(so * dr, so * dr);
  CMat left(so * dr, r * dr);
  for (const auto& k : c.kraus()) {
    left.setZero();
    for (long z = 0; z < so; ++z) {
      for (long x = 0; x < r; ++x) {
        if (k(z, x) != Complex(0.0)) {
          left.middleRows(z * dr, dr) += k(z, x) * rho.middleRows(x * dr, dr);
        }
      }
    }
    for (long z = 0; z < so; ++z) {
      for (long x = 0; x < r; ++x) {
        if (k(z, x) != Complex(0.0)) {
          out.middleCols(z * dr, dr) += std::conj(k(z, x)) * left.middleCols(x * dr, dr);
        }
      }
    }
  }
  DensityState placed = DensityState::trusted(result_layout, std::move(out));
  const Labels order = placed_order(out_layout, rest, p);
  if (order == result_layout.labels()) return placed;
  return reorder(placed, order);
}

PureState apply_operator(const PureState& s, const CMat& op, const Labels& on,
                         const RegisterLayout& out_layout) {
  const long in_dim = on.empty() ? 1 : s.layout().dim_of(on);
  if (op.cols() != in_dim || op.rows() != out_layout.total_dim()) {
    throw Error(Errc::DimensionMismatch, "operator shape does not match registers");
  }
  const Labels rest = rest_labels(s.layout(), on);
  const std::size_t p = insertion_point(s.layout(), on);
  RegisterLayout result_layout = out_layout.concat(s.layout().subset(rest));
  check_budget(result_layout.total_dim());

  Labels front = on;
  front.insert(front.end(), rest.begin(), rest.end());
  const CVec v = on.empty() ? s.amplitudes() : reorder(s, front).amplitudes();
  const long dr = v.size() / in_dim;
  // Column-major view: entry (u, x) is amplitude x*dr + u.
  const Eigen::Map<const CMat> m(v.data(), dr, in_dim);
  CMat w = m * op.transpose();
  CVec out = Eigen::Map<CVec>(w.data(), w.size());
  const double n = out.norm();
  if (n > 0.0) out /= n;
  PureState placed(result_layout, std::move(out));
  const Labels order = placed_order(out_layout, rest, p);
  if (order == result_layout.labels()) return placed;
  return reorder(placed, order);
}

double trace_distance(const DensityState& a, const DensityState& b) {
  if (!a.layout().same_shape(b.layout())) {
    throw Error(Errc::LayoutMismatch, "trace distance needs identical layouts");
  }
  const RVec ev = hermitian_eigenvalues(a.matrix() - b.matrix());
  return 0.5 * ev.cwiseAbs().sum();
}

double fidelity(const DensityState& a, const DensityState& b) {
  if (!a.layout().same_shape(b.layout())) {
    throw Error(Errc::LayoutMismatch, "fidelity needs identical layouts");
  }
  const CMat sa = psd_sqrt(a.matrix());
  const RVec ev = hermitian_eigenvalues(sa * b.matrix() * sa);
  double root = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) root += ev(i) > 0.0 ? std::sqrt(ev(i)) : 0.0;
  return std::min(1.0, root * root);
}

DensityState basis_state(const RegisterLayout& layout, const std::vector<long>& digits) {
  if (digits.size() != layout.size()) {
    throw Error(Errc::BadDims, "one digit per register required");
  }
  long index = 0;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    const long d = layout.registers()[i].dim;
    if (digits[i] < 0 || digits[i] >= d) throw Error(Errc::BadDims, "digit out of range");
    index = index * d + digits[i];
  }
  CMat m = CMat::Zero(layout.total_dim(), layout.total_dim());
  m(index, index) = 1.0;
  return DensityState::trusted(layout, std::move(m));
}

DensityState maximally_mixed(const RegisterLayout& layout) {
  const long d = layout.total_dim();
  return DensityState::trusted(layout, CMat::Identity(d, d) / static_cast<double>(d));
}

}  // namespace nmk
