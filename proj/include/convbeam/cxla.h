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

#ifndef CONVBEAM_CXLA_H_
#define CONVBEAM_CXLA_H_

// Double-precision complex linear algebra used by dereverberation and
// beamforming. Inversion and solves go through the 2m x 2m real embedding
//
//   [  A  B ]
//   [ -B  A ]      for  Phi = A + iB,
//
// eliminated with partial pivoting, so no complex factorization is needed.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace convbeam {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

// Dense complex matrix, row-major.
class CMatrix {
 public:
  CMatrix() = default;
  // Zero matrix. Both dimensions must be positive.
  CMatrix(std::size_t rows, std::size_t cols);
  // Takes ownership of row-major entries; rejects non-finite values.
  CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

  static CMatrix Identity(std::size_t n);
  // Column vector (n x 1) from a span.
  static CMatrix Column(std::span<const Complex> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  Complex &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex &operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<Complex> data() { return data_; }
  std::span<const Complex> data() const { return data_; }

  CVector Col(std::size_t c) const;
  CMatrix ConjTranspose() const;
  bool AllFinite() const;

  bool operator==(const CMatrix &other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

// Dense real matrix, row-major; only used for the real embedding.
struct RealMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  double &operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

CMatrix operator*(const CMatrix &a, const CMatrix &b);
CMatrix operator+(const CMatrix &a, const CMatrix &b);
CMatrix operator-(const CMatrix &a, const CMatrix &b);
CMatrix operator*(Complex s, const CMatrix &a);
CVector MatVec(const CMatrix &a, std::span<const Complex> x);

Complex Trace(const CMatrix &phi);
// Hermitian inner product <a, b> = a^H b.
Complex Dot(std::span<const Complex> a, std::span<const Complex> b);
double Norm(std::span<const Complex> x);
double MaxAbs(const CMatrix &a);

// [[A, B], [-B, A]] with A = Re(phi), B = Im(phi).
RealMatrix RealEmbed(const CMatrix &phi);

// Phi^-1 as the embedded solve against the identity.
// Throws SingularMatrixError when a pivot drops to
// 2m * machine-epsilon * max|entry| or below.
CMatrix Inverse(const CMatrix &phi);

// X with phi * X = rhs, eliminated on the real embedding without ever
// forming the inverse.
CMatrix Solve(const CMatrix &phi, const CMatrix &rhs);
CVector Solve(const CMatrix &phi, std::span<const Complex> rhs);

// phi + eps * Trace(phi) * I.
CMatrix DiagLoad(const CMatrix &phi, double eps);

// (phi + phi^H) / 2
CMatrix Hermitize(const CMatrix &phi);

// Plain power iteration: v <- phi v / |phi v|, `iters` times from `seed`.
// No Rayleigh refinement. Throws ZeroVectorError if an iterate vanishes.
CVector PowerIterMaxEig(const CMatrix &phi, int iters, std::span<const Complex> seed);

}  // namespace convbeam

#endif  // CONVBEAM_CXLA_H_
