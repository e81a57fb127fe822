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

// Brute-force reference implementations used as test oracles. They share no
// code with the library: index loops for partial traces, a general complex
// eigensolver for entropies, explicit Kronecker loops.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using Cx = std::complex<double>;

inline std::vector<long> digits(long index, const std::vector<long>& dims) {
  std::vector<long> d(dims.size());
  for (std::size_t i = dims.size(); i-- > 0;) {
    d[i] = index % dims[i];
    index /= dims[i];
  }
  return d;
}

inline long total(const std::vector<long>& dims) {
  long t = 1;
  for (long d : dims) t *= d;
  return t;
}

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (long i = 0; i < a.rows(); ++i)
    for (long j = 0; j < a.cols(); ++j)
      for (long k = 0; k < b.rows(); ++k)
        for (long l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

/// Reduced matrix on the registers at `keep` (ascending positions).
inline Mat partial_trace(const Mat& rho, const std::vector<long>& dims,
                         const std::vector<int>& keep) {
  std::vector<bool> kept(dims.size(), false);
  std::vector<long> kdims;
  for (int k : keep) {
    kept[static_cast<std::size_t>(k)] = true;
    kdims.push_back(dims[static_cast<std::size_t>(k)]);
  }
  const long n = total(dims);
  const long m = total(kdims);
  Mat out = Mat::Zero(m, m);
  for (long i = 0; i < n; ++i) {
    const auto di = digits(i, dims);
    for (long j = 0; j < n; ++j) {
      const auto dj = digits(j, dims);
      bool same = true;
      for (std::size_t r = 0; r < dims.size() && same; ++r) {
        if (!kept[r] && di[r] != dj[r]) same = false;
      }
      if (!same) continue;
      long ri = 0, rj = 0;
      for (std::size_t r = 0; r < dims.size(); ++r) {
        if (!kept[r]) continue;
        ri = ri * dims[r] + di[r];
        rj = rj * dims[r] + dj[r];
      }
      out(ri, rj) += rho(i, j);
    }
  }
  return out;
}

/// Registers permuted so that output register i is input register order[i].
inline Mat permute(const Mat& rho, const std::vector<long>& dims, const std::vector<int>& order) {
  std::vector<long> odims;
  for (int o : order) odims.push_back(dims[static_cast<std::size_t>(o)]);
  const long n = total(dims);
  auto map_index = [&](long i) {
    const auto d = digits(i, dims);
    long out = 0;
    for (std::size_t r = 0; r < order.size(); ++r)
      out = out * odims[r] + d[static_cast<std::size_t>(order[r])];
    return out;
  };
  Mat out(n, n);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) out(map_index(i), map_index(j)) = rho(i, j);
  return out;
}

inline double entropy_bits(const Mat& rho) {
  Eigen::ComplexEigenSolver<Mat> es(rho);
  double s = 0.0;
  for (long i = 0; i < es.eigenvalues().size(); ++i) {
    const double x = es.eigenvalues()(i).real();
    if (x > 1e-13) s -= x * std::log2(x);
  }
  return s;
}

inline std::vector<int> join(std::vector<int> a, const std::vector<int>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  return a;
}

inline double entropy_of(const Mat& rho, const std::vector<long>& dims,
                         const std::vector<int>& sub) {
  if (sub.empty()) return 0.0;
  return entropy_bits(partial_trace(rho, dims, sub));
}

inline double cqmi(const Mat& rho, const std::vector<long>& dims, const std::vector<int>& a,
                   const std::vector<int>& b, const std::vector<int>& e) {
  return entropy_of(rho, dims, join(a, e)) + entropy_of(rho, dims, join(b, e)) -
         entropy_of(rho, dims, join(join(a, b), e)) - entropy_of(rho, dims, e);
}

inline double mutual_information(const Mat& rho, const std::vector<long>& dims,
                                  const std::vector<int>& a, const std::vector<int>& b) {
  return entropy_of(rho, dims, a) + entropy_of(rho, dims, b) - entropy_of(rho, dims, join(a, b));
}

inline Mat projector(const Vec& v) { return v * v.adjoint(); }

/// Half the sum of absolute eigenvalues of a - b.
inline double trace_distance(const Mat& a, const Mat& b) {
  Eigen::ComplexEigenSolver<Mat> es(a - b);
  double s = 0.0;
  for (long i = 0; i < es.eigenvalues().size(); ++i) s += std::abs(es.eigenvalues()(i).real());
  return 0.5 * s;
}

/// Witness objective from ensemble terms, with the member registers laid out
/// as target registers followed by A', B', E'. Groups are positions in the
/// member layout; `ap`, `bp`, `ep` are the positions of A', B', E'.
struct MemberGroups {
  std::vector<int> a, b, e;
  int ap, bp, ep;
};

inline double formation_objective(const std::vector<double>& p, const std::vector<Vec>& phi,
                                  const std::vector<long>& dims, const MemberGroups& g) {
  const long n = total(dims);
  Mat mix = Mat::Zero(n, n);
  double ens = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const Mat rk = projector(phi[k]);
    mix += p[k] * rk;
    ens += p[k] * (entropy_of(rk, dims, join(g.a, {g.ap})) +
                   entropy_of(rk, dims, join(g.b, {g.bp})) - entropy_of(rk, dims, {g.ap, g.bp}));
  }
  const std::vector<int> abe = join(join(g.a, g.b), g.e);
  const double s_ab_e = entropy_of(mix, dims, abe) - entropy_of(mix, dims, g.e);
  return 0.5 * (s_ab_e + ens);
}

}  // namespace oracle
