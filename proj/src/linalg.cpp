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

#include "nmk/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "nmk/error.hpp"

namespace nmk {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::DuplicateLabel: return "DuplicateLabel";
    case Errc::UnknownLabel: return "UnknownLabel";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::LayoutMismatch: return "LayoutMismatch";
    case Errc::BadDims: return "BadDims";
    case Errc::InvalidState: return "InvalidState";
    case Errc::InvalidChannel: return "InvalidChannel";
    case Errc::OverlappingPartition: return "OverlappingPartition";
    case Errc::InconsistentDims: return "InconsistentDims";
    case Errc::BadProbabilities: return "BadProbabilities";
    case Errc::IrreversibleEveOp: return "IrreversibleEveOp";
    case Errc::DimensionTooSmall: return "DimensionTooSmall";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::BadRange: return "BadRange";
    case Errc::BadMu: return "BadMu";
    case Errc::LayoutClash: return "LayoutClash";
    case Errc::BadEnsemble: return "BadEnsemble";
    case Errc::UnknownName: return "UnknownName";
    case Errc::BadParams: return "BadParams";
    case Errc::ParseError: return "ParseError";
  }
  return "Unknown";
}

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Eigh eigh(const CMat& h) {
  Eigen::SelfAdjointEigenSolver<CMat> solver(hermitian_part(h));
  const Eigen::Index n = h.rows();
  Eigh out{RVec(n), CMat(n, n)};
  // Eigen sorts ascending; reverse.
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i) = solver.eigenvalues()(n - 1 - i);
    out.vectors.col(i) = solver.eigenvectors().col(n - 1 - i);
  }
  return out;
}

namespace {

RVec dense_eigenvalues(const CMat& h) {
  if (h.rows() == 1) return RVec::Constant(1, h(0, 0).real());
  Eigen::SelfAdjointEigenSolver<CMat> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

long find_root(std::vector<long>& parent, long x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

}  // namespace

// Splits into the connected components of the exact nonzero pattern, which
// keeps states with classical copies cheap.
RVec hermitian_eigenvalues(const CMat& h) {
  const CMat m = hermitian_part(h);
  const long n = m.rows();
  if (n < 32) return dense_eigenvalues(m);
  std::vector<long> parent(n);
  for (long i = 0; i < n; ++i) parent[i] = i;
  for (long j = 0; j < n; ++j) {
    for (long i = j + 1; i < n; ++i) {
      if (m(i, j) == Complex(0.0)) continue;
      const long a = find_root(parent, i);
      const long b = find_root(parent, j);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  std::vector<std::vector<long>> blocks(n);
  for (long i = 0; i < n; ++i) blocks[find_root(parent, i)].push_back(i);
  if (blocks[0].size() == static_cast<std::size_t>(n)) return dense_eigenvalues(m);
  RVec out(n);
  long k = 0;
  for (const auto& idx : blocks) {
    if (idx.empty()) continue;
    const long b = static_cast<long>(idx.size());
    CMat sub(b, b);
    for (long c = 0; c < b; ++c)
      for (long r = 0; r < b; ++r) sub(r, c) = m(idx[r], idx[c]);
    out.segment(k, b) = dense_eigenvalues(sub);
    k += b;
  }
  std::sort(out.data(), out.data() + n);
  return out;
}

CMat hermitian_apply(const CMat& h, const std::function<double(double)>& f) {
  const Eigh e = eigh(h);
  RVec fv(e.values.size());
  for (Eigen::Index i = 0; i < fv.size(); ++i) fv(i) = f(e.values(i));
  return e.vectors * fv.cast<Complex>().asDiagonal() * e.vectors.adjoint();
}

CMat psd_sqrt(const CMat& h) {
  return hermitian_apply(h, [](double x) { return x > 0.0 ? std::sqrt(x) : 0.0; });
}

CMat psd_inv_sqrt(const CMat& h, double floor) {
  return hermitian_apply(
      h, [floor](double x) { return x > floor ? 1.0 / std::sqrt(x) : 0.0; });
}

CMat expi_hermitian(const CMat& h, double t) {
  const Eigh e = eigh(h);
  CVec phases(e.values.size());
  for (Eigen::Index i = 0; i < phases.size(); ++i) {
    phases(i) = std::polar(1.0, t * e.values(i));
  }
  return e.vectors * phases.asDiagonal() * e.vectors.adjoint();
}

CMat hermitian_part(const CMat& m) { return 0.5 * (m + m.adjoint()); }

double max_abs(const CMat& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double shannon_bits(const RVec& probabilities) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < probabilities.size(); ++i) {
    const double p = probabilities(i);
    if (p > tol::kEntropyClamp) s -= p * std::log2(p);
  }
  return s;
}

double binary_entropy(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

}  // namespace nmk
