// Copyright 2026 The convbeam Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CONVBEAM_TESTS_SUPPORT_H_
#define CONVBEAM_TESTS_SUPPORT_H_

// Seeded generators and brute-force reference implementations shared by the
// unit tests and the acceptance runner. Nothing here calls into the library's
// own solvers.

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "convbeam/cxla.h"
#include "convbeam/stft.h"

namespace convbeam::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double Uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double Normal() { return normal_(rng_); }
  std::size_t Index(std::size_t lo, std::size_t hi) {  // inclusive
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }
  Complex ComplexNormal() { return {Normal(), Normal()}; }

  CVector Vector(std::size_t n);
  CMatrix Matrix(std::size_t rows, std::size_t cols);
  // B B^H with B of shape m x rank; singular when rank < m.
  CMatrix HermitianPsd(std::size_t m, std::size_t rank);
  // Unitary columns from Gram-Schmidt on a Gaussian matrix.
  CMatrix Unitary(std::size_t m);
  // U diag(eigs) U^H; returns U through `vectors` when non-null.
  CMatrix HermitianWithEigs(const std::vector<double> &eigs, CMatrix *vectors = nullptr);
  std::vector<double> Signal(std::size_t n);

  std::mt19937_64 &engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

// Laplace expansion along the first row.
Complex CofactorDeterminant(const CMatrix &a);
// adj(a) / det(a) from cofactors; intended for m <= 4.
CMatrix CofactorInverse(const CMatrix &a);

// Eigenvalues of a Hermitian 1x1, 2x2 or 3x3 matrix from its characteristic
// polynomial, ascending.
std::vector<double> HermitianEigenvalues(const CMatrix &a);
// 1 / lambda_max(cofactor inverse): keeps relative accuracy for eigenvalues
// far below the trace, where the closed-form roots cancel.
double SmallestEigenvalue(const CMatrix &a);
// Cyclic Jacobi on the real symmetric embedding [[A, -B], [B, A]], in long
// double, until the off-diagonal mass vanishes. Any size; ascending, each
// eigenvalue once. Accurate where the closed form loses repeated roots.
std::vector<double> JacobiEigenvalues(const CMatrix &a);
// Unit eigenvector for the largest eigenvalue (m <= 3) as the null vector of
// A - lambda I via cofactors of row pairs.
CVector PrincipalEigenvector(const CMatrix &a);

// Gauss-Jordan with full pivoting directly on complex entries.
CMatrix NaiveSolve(CMatrix a, CMatrix b);

// X(k) = sum_n x(n) exp(-2 pi i k n / N), evaluated term by term.
CVector NaiveDft(const std::vector<double> &x);

double MaxAbsDiff(const CMatrix &a, const CMatrix &b);
double MaxAbsDiff(std::span<const Complex> a, std::span<const Complex> b);
double InfNorm(const CMatrix &a);  // max row sum

}  // namespace convbeam::testing

#endif  // CONVBEAM_TESTS_SUPPORT_H_
