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

#include <complex>
#include <functional>

#include <Eigen/Dense>

namespace nmk {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

namespace tol {
inline constexpr double kHermitian = 1e-10;    // max-abs entrywise
inline constexpr double kTrace = 1e-10;
inline constexpr double kMinEigenvalue = -1e-9;
inline constexpr double kUnitNorm = 1e-10;
inline constexpr double kCompleteness = 1e-9;  // sum K^dag K = I
inline constexpr double kInverse = 1e-8;       // declared-inverse check
inline constexpr double kRank = 1e-12;         // eigenvalues above count toward rank
inline constexpr double kEntropyClamp = 1e-12;
inline constexpr double kProbability = 1e-10;
inline constexpr double kMarkov = 1e-8;        // CQMI threshold in bits
}  // namespace tol

/// Kronecker product, first factor most significant.
CMat kron(const CMat& a, const CMat& b);

struct Eigh {
  RVec values;   // descending
  CMat vectors;  // columns match `values`
};

/// Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending.
Eigh eigh(const CMat& h);

RVec hermitian_eigenvalues(const CMat& h);

/// f applied to the spectrum of a Hermitian matrix.
CMat hermitian_apply(const CMat& h, const std::function<double(double)>& f);

/// Square root after clamping negative eigenvalues to zero.
CMat psd_sqrt(const CMat& h);

/// Pseudo-inverse square root; eigenvalues at or below `floor` map to zero.
CMat psd_inv_sqrt(const CMat& h, double floor = tol::kRank);

/// exp(i t H) for Hermitian H.
CMat expi_hermitian(const CMat& h, double t);

CMat hermitian_part(const CMat& m);

double max_abs(const CMat& m);

/// -sum x log2 x over entries, entries at or below the clamp count as zero.
double shannon_bits(const RVec& probabilities);

/// Binary entropy h(x) in bits.
double binary_entropy(double x);

}  // namespace nmk
