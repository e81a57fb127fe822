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

#include "nmk/random.hpp"

#include <cmath>

#include "nmk/error.hpp"

namespace nmk {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (counter + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

CMat gaussian_matrix(Rng& rng, long rows, long cols) {
  CMat m(rows, cols);
  for (long j = 0; j < cols; ++j) {
    for (long i = 0; i < rows; ++i) m(i, j) = rng.cnormal();
  }
  return m;
}

CMat random_isometry(Rng& rng, long out, long in) {
  if (in < 1 || out < in) {
    throw Error(Errc::BadDims, "isometry needs 1 <= in <= out, got " +
                                   std::to_string(in) + " -> " + std::to_string(out));
  }
  const CMat g = gaussian_matrix(rng, out, in);
  Eigen::HouseholderQR<CMat> qr(g);
  CMat q = qr.householderQ() * CMat::Identity(out, in);
  const CMat r = qr.matrixQR().topRows(in).template triangularView<Eigen::Upper>();
  for (long j = 0; j < in; ++j) {
    const Complex d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

CMat random_unitary(Rng& rng, long d) { return random_isometry(rng, d, d); }

CMat random_hermitian(Rng& rng, long d) {
  const CMat g = gaussian_matrix(rng, d, d);
  CMat h = hermitian_part(g);
  const double n = h.norm();
  return n > 0.0 ? CMat(h / n) : h;
}

PureState random_pure(Rng& rng, const RegisterLayout& layout) {
  CVec v = gaussian_matrix(rng, layout.total_dim(), 1).col(0);
  v.normalize();
  return PureState(layout, std::move(v));
}

DensityState random_density_hs(Rng& rng, const RegisterLayout& layout, long rank) {
  const long d = layout.total_dim();
  if (rank <= 0 || rank > d) rank = d;
  const CMat g = gaussian_matrix(rng, d, rank);
  CMat m = g * g.adjoint();
  m /= m.trace().real();
  return DensityState(layout, std::move(m));
}

ChannelMap random_channel(Rng& rng, long in, long out, long n_kraus) {
  const CMat v = random_isometry(rng, out * n_kraus, in);
  std::vector<CMat> kraus;
  for (long i = 0; i < n_kraus; ++i) {
    CMat k(out, in);
    for (long z = 0; z < out; ++z) k.row(z) = v.row(z * n_kraus + i);
    kraus.push_back(std::move(k));
  }
  return ChannelMap(std::move(kraus));
}

std::vector<CMat> random_instrument(Rng& rng, long d, long outcomes) {
  return random_channel(rng, d, d, outcomes).kraus();
}

std::vector<double> random_probabilities(Rng& rng, long n) {
  std::vector<double> p(static_cast<std::size_t>(n));
  double total = 0.0;
  for (auto& x : p) {
    x = -std::log(1.0 - rng.uniform());
    total += x;
  }
  for (auto& x : p) x /= total;
  return p;
}

Sample sample(SampleKind kind, const std::vector<long>& dims, std::uint64_t seed) {
  Rng rng(seed);
  for (long d : dims) {
    if (d < 1) throw Error(Errc::BadDims, "dimensions must be positive");
  }
  auto layout = [&] {
    std::vector<Register> regs;
    for (std::size_t i = 0; i < dims.size(); ++i) {
      regs.push_back({"S" + std::to_string(i), dims[i], Party::Reference});
    }
    return RegisterLayout(std::move(regs));
  };
  switch (kind) {
    case SampleKind::Pure:
      if (dims.empty()) throw Error(Errc::BadDims, "no register dims");
      return random_pure(rng, layout());
    case SampleKind::DensityHs:
      if (dims.empty()) throw Error(Errc::BadDims, "no register dims");
      return random_density_hs(rng, layout());
    case SampleKind::Unitary:
      if (dims.size() != 1) throw Error(Errc::BadDims, "unitary takes one dimension");
      return random_unitary(rng, dims[0]);
    case SampleKind::Isometry:
      if (dims.size() != 2) throw Error(Errc::BadDims, "isometry takes {in, out}");
      return random_isometry(rng, dims[1], dims[0]);
  }
  throw Error(Errc::BadDims, "unknown sample kind");
}

}  // namespace nmk
