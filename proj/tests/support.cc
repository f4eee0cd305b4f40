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

#include "support.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace convbeam::testing {

CVector Gen::Vector(std::size_t n) {
  CVector v(n);
  for (auto &x : v) x = ComplexNormal();
  return v;
}

CMatrix Gen::Matrix(std::size_t rows, std::size_t cols) {
  CMatrix a(rows, cols);
  for (auto &x : a.data()) x = ComplexNormal();
  return a;
}

CMatrix Gen::HermitianPsd(std::size_t m, std::size_t rank) {
  const CMatrix b = Matrix(m, rank);
  return b * b.ConjTranspose();
}

CMatrix Gen::Unitary(std::size_t m) {
  CMatrix q = Matrix(m, m);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      Complex dot = 0.0;
      for (std::size_t i = 0; i < m; ++i) dot += std::conj(q(i, k)) * q(i, j);
      for (std::size_t i = 0; i < m; ++i) q(i, j) -= dot * q(i, k);
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < m; ++i) norm += std::norm(q(i, j));
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < m; ++i) q(i, j) /= norm;
  }
  return q;
}

CMatrix Gen::HermitianWithEigs(const std::vector<double> &eigs, CMatrix *vectors) {
  const std::size_t m = eigs.size();
  const CMatrix u = Unitary(m);
  CMatrix d(m, m);
  for (std::size_t i = 0; i < m; ++i) d(i, i) = eigs[i];
  if (vectors) *vectors = u;
  CMatrix a = u * d * u.ConjTranspose();
  // Exact Hermitian symmetry; rounding in the products leaves tiny skew parts.
  for (std::size_t i = 0; i < m; ++i) {
    a(i, i) = a(i, i).real();
    for (std::size_t j = i + 1; j < m; ++j) a(j, i) = std::conj(a(i, j));
  }
  return a;
}

std::vector<double> Gen::Signal(std::size_t n) {
  std::vector<double> x(n);
  for (auto &v : x) v = Normal();
  return x;
}

namespace {

CMatrix Minor(const CMatrix &a, std::size_t row, std::size_t col) {
  const std::size_t m = a.rows();
  CMatrix out(m - 1, m - 1);
  for (std::size_t i = 0, r = 0; i < m; ++i) {
    if (i == row) continue;
    for (std::size_t j = 0, c = 0; j < m; ++j) {
      if (j == col) continue;
      out(r, c++) = a(i, j);
    }
    ++r;
  }
  return out;
}

}  // namespace

Complex CofactorDeterminant(const CMatrix &a) {
  const std::size_t m = a.rows();
  if (m == 1) return a(0, 0);
  if (m == 2) return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  Complex det = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double sign = j % 2 ? -1.0 : 1.0;
    det += sign * a(0, j) * CofactorDeterminant(Minor(a, 0, j));
  }
  return det;
}

CMatrix CofactorInverse(const CMatrix &a) {
  const std::size_t m = a.rows();
  const Complex det = CofactorDeterminant(a);
  CMatrix inv(m, m);
  if (m == 1) {
    inv(0, 0) = 1.0 / det;
    return inv;
  }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const double sign = (i + j) % 2 ? -1.0 : 1.0;
      inv(j, i) = sign * CofactorDeterminant(Minor(a, i, j)) / det;
    }
  return inv;
}

std::vector<double> HermitianEigenvalues(const CMatrix &a) {
  const std::size_t m = a.rows();
  if (m == 1) return {a(0, 0).real()};
  if (m == 2) {
    const double p = a(0, 0).real(), q = a(1, 1).real();
    const double r = std::sqrt(0.25 * (p - q) * (p - q) + std::norm(a(0, 1)));
    return {0.5 * (p + q) - r, 0.5 * (p + q) + r};
  }
  if (m != 3) throw std::invalid_argument("HermitianEigenvalues: m must be <= 3");
  // lambda^3 - c2 lambda^2 + c1 lambda - c0 = 0, all coefficients real.
  const double c2 = (a(0, 0) + a(1, 1) + a(2, 2)).real();
  const double c1 = (a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0) + a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0) +
                     a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1))
                        .real();
  const double c0 = CofactorDeterminant(a).real();
  // Depressed cubic in x = lambda - c2 / 3; three real roots.
  const double shift = c2 / 3.0;
  const double p = c1 - c2 * c2 / 3.0;
  const double q = -2.0 * c2 * c2 * c2 / 27.0 + c2 * c1 / 3.0 - c0;
  std::vector<double> out(3);
  if (p > -1e-300) {
    out.assign(3, shift + std::cbrt(-q));
  } else {
    const double r = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (p * r), -1.0, 1.0);
    const double phi = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k)
      out[k] = shift + r * std::cos(phi - 2.0 * std::numbers::pi * k / 3.0);
  }
  std::sort(out.begin(), out.end());
  return out;
}

double SmallestEigenvalue(const CMatrix &a) {
  CMatrix inv = CofactorInverse(a);
  for (std::size_t i = 0; i < inv.rows(); ++i) {
    inv(i, i) = inv(i, i).real();
    for (std::size_t j = i + 1; j < inv.rows(); ++j) inv(j, i) = std::conj(inv(i, j));
  }
  return 1.0 / HermitianEigenvalues(inv).back();
}

std::vector<double> JacobiEigenvalues(const CMatrix &a) {
  using Real = long double;
  const std::size_t m = a.rows(), n = 2 * m;
  std::vector<Real> s(n * n);
  auto at = [&](std::size_t i, std::size_t j) -> Real & { return s[i * n + j]; };
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const Complex z = i == j ? Complex(a(i, i).real()) : 0.5 * (a(i, j) + std::conj(a(j, i)));
      at(i, j) = at(i + m, j + m) = z.real();
      at(i, j + m) = -z.imag();
      at(i + m, j) = z.imag();
    }
  for (int sweep = 0; sweep < 100; ++sweep) {
    Real off = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
    if (off == 0) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (at(p, q) == 0) continue;
        const Real theta = (at(q, q) - at(p, p)) / (2 * at(p, q));
        const Real t = (theta >= 0 ? 1 : -1) / (std::fabs(theta) + std::sqrt(theta * theta + 1));
        const Real c = 1 / std::sqrt(t * t + 1), sn = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const Real kp = at(k, p), kq = at(k, q);
          at(k, p) = c * kp - sn * kq;
          at(k, q) = sn * kp + c * kq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Real pk = at(p, k), qk = at(q, k);
          at(p, k) = c * pk - sn * qk;
          at(q, k) = sn * pk + c * qk;
        }
      }
  }
  std::vector<Real> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = at(i, i);
  std::sort(d.begin(), d.end());
  std::vector<double> out(m);
  for (std::size_t i = 0; i < m; ++i) out[i] = static_cast<double>((d[2 * i] + d[2 * i + 1]) / 2);
  return out;
}

CVector PrincipalEigenvector(const CMatrix &a) {
  const std::size_t m = a.rows();
  const double lambda = HermitianEigenvalues(a).back();
  CMatrix b = a;
  for (std::size_t i = 0; i < m; ++i) b(i, i) -= lambda;
  CVector best;
  double best_norm = -1.0;
  auto consider = [&](CVector v) {
    double n = 0.0;
    for (auto &x : v) n += std::norm(x);
    if (n > best_norm) {
      best_norm = n;
      best = std::move(v);
    }
  };
  if (m == 1) {
    consider({1.0});
  } else if (m == 2) {
    consider({-b(0, 1), b(0, 0)});
    consider({-b(1, 1), b(1, 0)});
  } else {
    // Cross products of row pairs are orthogonal (bilinearly) to both rows.
    for (std::size_t r = 0; r < 3; ++r) {
      const std::size_t s = (r + 1) % 3;
      consider({b(r, 1) * b(s, 2) - b(r, 2) * b(s, 1), b(r, 2) * b(s, 0) - b(r, 0) * b(s, 2),
                b(r, 0) * b(s, 1) - b(r, 1) * b(s, 0)});
    }
  }
  const double n = std::sqrt(best_norm);
  for (auto &x : best) x /= n;
  return best;
}

CMatrix NaiveSolve(CMatrix a, CMatrix b) {
  const std::size_t n = a.rows();
  std::vector<std::size_t> col_of(n);
  for (std::size_t i = 0; i < n; ++i) col_of[i] = i;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pr = k, pc = k;
    double best = -1.0;
    for (std::size_t i = k; i < n; ++i)
      for (std::size_t j = k; j < n; ++j)
        if (std::abs(a(i, j)) > best) {
          best = std::abs(a(i, j));
          pr = i;
          pc = j;
        }
    if (best == 0.0) throw std::runtime_error("NaiveSolve: singular");
    for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(pr, j));
    for (std::size_t j = 0; j < b.cols(); ++j) std::swap(b(k, j), b(pr, j));
    for (std::size_t i = 0; i < n; ++i) std::swap(a(i, k), a(i, pc));
    std::swap(col_of[k], col_of[pc]);
    const Complex piv = a(k, k);
    for (std::size_t j = 0; j < n; ++j) a(k, j) /= piv;
    for (std::size_t j = 0; j < b.cols(); ++j) b(k, j) /= piv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k) continue;
      const Complex f = a(i, k);
      if (f == Complex(0.0)) continue;
      for (std::size_t j = 0; j < n; ++j) a(i, j) -= f * a(k, j);
      for (std::size_t j = 0; j < b.cols(); ++j) b(i, j) -= f * b(k, j);
    }
  }
  CMatrix x(n, b.cols());
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j < b.cols(); ++j) x(col_of[k], j) = b(k, j);
  return x;
}

CVector NaiveDft(const std::vector<double> &x) {
  const std::size_t n = x.size();
  CVector out(n);
  for (std::size_t k = 0; k < n; ++k) {
    Complex acc = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const double ang = -2.0 * std::numbers::pi * static_cast<double>((k * t) % n) / n;
      acc += x[t] * Complex(std::cos(ang), std::sin(ang));
    }
    out[k] = acc;
  }
  return out;
}

double MaxAbsDiff(const CMatrix &a, const CMatrix &b) { return MaxAbsDiff(a.data(), b.data()); }

double MaxAbsDiff(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) return INFINITY;
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double InfNorm(const CMatrix &a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += std::abs(a(i, j));
    m = std::max(m, s);
  }
  return m;
}

}  // namespace convbeam::testing
