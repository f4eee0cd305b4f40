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

#include "convbeam/cxla.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "convbeam/error.h"

namespace convbeam {

namespace {

void RequireSquare(const CMatrix &phi, const char *what) {
  if (!phi.square() || phi.rows() == 0)
    throw ShapeError(std::string(what) + ": matrix must be square, got " +
                     std::to_string(phi.rows()) + "x" + std::to_string(phi.cols()));
}

void RequireFinite(const CMatrix &phi, const char *what) {
  if (!phi.AllFinite())
    throw ValidationError(std::string(what) + ": non-finite matrix entry");
}

// In-place LU with partial pivoting of a square real matrix.
class RealLu {
 public:
  explicit RealLu(RealMatrix m) : lu_(std::move(m)), perm_(lu_.rows) {
    const std::size_t n = lu_.rows;
    double max_abs = 0.0;
    for (double v : lu_.data) max_abs = std::max(max_abs, std::abs(v));
    const double threshold =
        static_cast<double>(n) * std::numeric_limits<double>::epsilon() * max_abs;

    for (std::size_t i = 0; i < n; ++i) perm_[i] = i;
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t p = k;
      double best = std::abs(lu_(k, k));
      for (std::size_t r = k + 1; r < n; ++r) {
        if (std::abs(lu_(r, k)) > best) {
          best = std::abs(lu_(r, k));
          p = r;
        }
      }
      if (best <= threshold) {
        throw SingularMatrixError("singular matrix: pivot " + std::to_string(best) +
                                  " at column " + std::to_string(k) +
                                  " is below threshold " + std::to_string(threshold));
      }
      if (p != k) {
        for (std::size_t c = 0; c < n; ++c) std::swap(lu_(k, c), lu_(p, c));
        std::swap(perm_[k], perm_[p]);
      }
      const double pivot = lu_(k, k);
      for (std::size_t r = k + 1; r < n; ++r) {
        const double factor = lu_(r, k) / pivot;
        lu_(r, k) = factor;
        if (factor == 0.0) continue;
        for (std::size_t c = k + 1; c < n; ++c) lu_(r, c) -= factor * lu_(k, c);
      }
    }
  }

  // Solves in place for one right-hand side.
  void SolveInPlace(std::vector<double> &b) const {
    const std::size_t n = lu_.rows;
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[perm_[i]];
    for (std::size_t i = 0; i < n; ++i) {
      double acc = x[i];
      for (std::size_t c = 0; c < i; ++c) acc -= lu_(i, c) * x[c];
      x[i] = acc;
    }
    for (std::size_t i = n; i-- > 0;) {
      double acc = x[i];
      for (std::size_t c = i + 1; c < n; ++c) acc -= lu_(i, c) * x[c];
      x[i] = acc / lu_(i, i);
    }
    b = std::move(x);
  }

 private:
  RealMatrix lu_;
  std::vector<std::size_t> perm_;
};

}  // namespace

CMatrix::CMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {
  if (rows == 0 || cols == 0) throw ShapeError("CMatrix: dimensions must be positive");
}

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (rows == 0 || cols == 0) throw ShapeError("CMatrix: dimensions must be positive");
  if (data_.size() != rows * cols)
    throw ShapeError("CMatrix: expected " + std::to_string(rows * cols) + " entries, got " +
                     std::to_string(data_.size()));
  if (!AllFinite()) throw ValidationError("CMatrix: non-finite entry");
}

CMatrix CMatrix::Identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::Column(std::span<const Complex> values) {
  return CMatrix(values.size(), 1, CVector(values.begin(), values.end()));
}

CVector CMatrix::Col(std::size_t c) const {
  CVector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

CMatrix CMatrix::ConjTranspose() const {
  CMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

bool CMatrix::AllFinite() const {
  return std::all_of(data_.begin(), data_.end(), [](const Complex &z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

CMatrix operator*(const CMatrix &a, const CMatrix &b) {
  if (a.cols() != b.rows()) throw ShapeError("matrix product: inner dimensions differ");
  CMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

CMatrix operator+(const CMatrix &a, const CMatrix &b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("matrix sum: shapes differ");
  CMatrix out = a;
  for (std::size_t i = 0; i < out.data().size(); ++i) out.data()[i] += b.data()[i];
  return out;
}

CMatrix operator-(const CMatrix &a, const CMatrix &b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ShapeError("matrix difference: shapes differ");
  CMatrix out = a;
  for (std::size_t i = 0; i < out.data().size(); ++i) out.data()[i] -= b.data()[i];
  return out;
}

CMatrix operator*(Complex s, const CMatrix &a) {
  CMatrix out = a;
  for (auto &z : out.data()) z *= s;
  return out;
}

CVector MatVec(const CMatrix &a, std::span<const Complex> x) {
  if (a.cols() != x.size()) throw ShapeError("matrix-vector product: dimensions differ");
  CVector out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Complex acc = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) acc += a(i, j) * x[j];
    out[i] = acc;
  }
  return out;
}

Complex Trace(const CMatrix &phi) {
  RequireSquare(phi, "Trace");
  Complex acc = 0.0;
  for (std::size_t i = 0; i < phi.rows(); ++i) acc += phi(i, i);
  return acc;
}

Complex Dot(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) throw ShapeError("Dot: lengths differ");
  Complex acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

double Norm(std::span<const Complex> x) {
  double acc = 0.0;
  for (const auto &z : x) acc += std::norm(z);
  return std::sqrt(acc);
}

double MaxAbs(const CMatrix &a) {
  double m = 0.0;
  for (const auto &z : a.data()) m = std::max(m, std::abs(z));
  return m;
}

RealMatrix RealEmbed(const CMatrix &phi) {
  RequireSquare(phi, "RealEmbed");
  const std::size_t m = phi.rows();
  RealMatrix out{2 * m, 2 * m, std::vector<double>(4 * m * m)};
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < m; ++c) {
      const double a = phi(r, c).real();
      const double b = phi(r, c).imag();
      out(r, c) = a;
      out(r, c + m) = b;
      out(r + m, c) = -b;
      out(r + m, c + m) = a;
    }
  }
  return out;
}

CMatrix Inverse(const CMatrix &phi) {
  RequireSquare(phi, "Inverse");
  // Real and imaginary parts of each column come out of one embedded solve;
  // taking them from separate unit-vector solves loses backward stability.
  return Solve(phi, CMatrix::Identity(phi.rows()));
}

CMatrix Solve(const CMatrix &phi, const CMatrix &rhs) {
  RequireSquare(phi, "Solve");
  if (rhs.rows() != phi.rows())
    throw ShapeError("Solve: right-hand side has " + std::to_string(rhs.rows()) +
                     " rows, expected " + std::to_string(phi.rows()));
  RequireFinite(phi, "Solve");
  RequireFinite(rhs, "Solve");
  const std::size_t m = phi.rows();
  RealLu lu(RealEmbed(phi));

  // [A B; -B A] [Re x; -Im x] = [Re b; -Im b]
  CMatrix out(m, rhs.cols());
  std::vector<double> col(2 * m);
  for (std::size_t k = 0; k < rhs.cols(); ++k) {
    for (std::size_t r = 0; r < m; ++r) {
      col[r] = rhs(r, k).real();
      col[r + m] = -rhs(r, k).imag();
    }
    lu.SolveInPlace(col);
    for (std::size_t r = 0; r < m; ++r) out(r, k) = Complex(col[r], -col[r + m]);
  }
  return out;
}

CVector Solve(const CMatrix &phi, std::span<const Complex> rhs) {
  return Solve(phi, CMatrix::Column(rhs)).Col(0);
}

CMatrix DiagLoad(const CMatrix &phi, double eps) {
  RequireSquare(phi, "DiagLoad");
  if (!(eps >= 0.0)) throw ValidationError("DiagLoad: eps must be nonnegative");
  if (eps == 0.0) return phi;
  const Complex load = eps * Trace(phi);
  CMatrix out = phi;
  for (std::size_t i = 0; i < out.rows(); ++i) out(i, i) += load;
  return out;
}

CMatrix Hermitize(const CMatrix &phi) {
  RequireSquare(phi, "Hermitize");
  const std::size_t m = phi.rows();
  CMatrix out(m, m);
  for (std::size_t r = 0; r < m; ++r) {
    out(r, r) = phi(r, r).real();
    for (std::size_t c = r + 1; c < m; ++c) {
      const Complex v = 0.5 * (phi(r, c) + std::conj(phi(c, r)));
      out(r, c) = v;
      out(c, r) = std::conj(v);
    }
  }
  return out;
}

CVector PowerIterMaxEig(const CMatrix &phi, int iters, std::span<const Complex> seed) {
  RequireSquare(phi, "PowerIterMaxEig");
  if (iters < 1) throw ValidationError("PowerIterMaxEig: iters must be >= 1");
  if (seed.size() != phi.rows()) throw ShapeError("PowerIterMaxEig: seed length mismatch");
  const double seed_norm = Norm(seed);
  if (!(seed_norm > 0.0) || !std::isfinite(seed_norm))
    throw ZeroVectorError("PowerIterMaxEig: seed vector must be nonzero and finite");

  CVector v(seed.begin(), seed.end());
  for (int it = 0; it < iters; ++it) {
    v = MatVec(phi, v);
    const double n = Norm(v);
    if (!(n > 0.0) || !std::isfinite(n))
      throw ZeroVectorError("PowerIterMaxEig: iterate " + std::to_string(it + 1) +
                            " vanished (degenerate matrix)");
    for (auto &z : v) z /= n;
  }
  return v;
}

}  // namespace convbeam
