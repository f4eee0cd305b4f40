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

#include "convbeam/beamform.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "convbeam/error.h"

namespace convbeam {

namespace {

bool IsZero(const CMatrix &m) {
  return std::all_of(m.data().begin(), m.data().end(),
                     [](const Complex &z) { return z == Complex(0.0); });
}

CVector OneHot(std::size_t size, std::size_t ref) {
  CVector u(size);
  u[ref] = 1.0;
  return u;
}

void CheckStack(const HermitianStack &a, const HermitianStack &b, const char *what) {
  if (a.size() != b.size()) throw ShapeError(std::string(what) + ": bin counts differ");
  for (std::size_t f = 0; f < a.size(); ++f)
    if (a[f].rows() != b[f].rows()) throw ShapeError(std::string(what) + ": channel counts differ");
}

void CheckRef(std::size_t ref, std::size_t channels) {
  if (ref >= channels)
    throw ValidationError("reference channel " + std::to_string(ref + 1) + " exceeds " +
                          std::to_string(channels) + " channels");
}

template <typename Fn>
auto PerBin(std::size_t f, Fn &&fn) {
  try {
    return fn();
  } catch (Error &e) {
    e.set_bin(f);
    throw;
  }
}

}  // namespace

void BeamformerConfig::Validate(std::size_t channels) const {
  if (ref_channel < 1 || ref_channel > channels)
    throw ValidationError("beamformer: ref_channel must be in [1, " + std::to_string(channels) +
                          "], got " + std::to_string(ref_channel));
  if (sv_power_iters < 1) throw ValidationError("beamformer: sv_power_iters must be >= 1");
  if (!(eps >= 0.0)) throw ValidationError("beamformer: eps must be >= 0");
}

HermitianStack Covariance(const SpectroTensor &derevb, const TfGrid &weights) {
  const std::size_t T = derevb.frames(), F = derevb.bins(), C = derevb.channels();
  if (weights.frames != T || weights.bins != F)
    throw ShapeError("covariance: weight grid does not match the spectrogram");
  HermitianStack out;
  out.reserve(F);
  for (std::size_t f = 0; f < F; ++f) {
    CMatrix phi(C, C);
    double total = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
      const double w = weights(t, f);
      if (!(w >= 0.0) || !std::isfinite(w)) {
        DegenerateError e("covariance: invalid weight at frame " + std::to_string(t));
        e.set_bin(f);
        throw e;
      }
      total += w;
      const auto y = derevb.Cell(t, f);
      for (std::size_t r = 0; r < C; ++r) {
        const Complex wy = w * y[r];
        for (std::size_t c = r; c < C; ++c) phi(r, c) += wy * std::conj(y[c]);
      }
    }
    if (total < 1e-30) {
      DegenerateError e("covariance: weight sum " + std::to_string(total) + " is degenerate");
      e.set_bin(f);
      throw e;
    }
    for (std::size_t r = 0; r < C; ++r)
      for (std::size_t c = r; c < C; ++c) phi(r, c) /= total;
    for (std::size_t r = 0; r < C; ++r)
      for (std::size_t c = 0; c < r; ++c) phi(r, c) = std::conj(phi(c, r));
    out.push_back(Hermitize(phi));
  }
  return out;
}

SteeringVectors SteeringVector(const HermitianStack &phi_noise, const HermitianStack &phi_s,
                               int iters, double eps, std::size_t ref) {
  CheckStack(phi_noise, phi_s, "steering_vector");
  SteeringVectors out;
  out.reserve(phi_s.size());
  for (std::size_t f = 0; f < phi_s.size(); ++f) {
    const std::size_t C = phi_s[f].rows();
    CheckRef(ref, C);
    // A bin with no energy at all has no direction; any vector gives zero output.
    if (IsZero(phi_noise[f]) || IsZero(phi_s[f])) {
      out.push_back(OneHot(C, ref));
      continue;
    }
    out.push_back(PerBin(f, [&] {
      const CMatrix b = Solve(DiagLoad(phi_noise[f], eps), phi_s[f]);
      const CVector seed(C, Complex(1.0 / std::sqrt(static_cast<double>(C))));
      return MatVec(phi_noise[f], PowerIterMaxEig(b, iters, seed));
    }));
  }
  return out;
}

FilterBank FilterWithoutSv(const HermitianStack &phi_n, const HermitianStack &phi_s,
                           std::size_t ref, double eps) {
  CheckStack(phi_n, phi_s, "filter_wo_sv");
  FilterBank out;
  out.reserve(phi_s.size());
  for (std::size_t f = 0; f < phi_s.size(); ++f) {
    const std::size_t C = phi_s[f].rows();
    CheckRef(ref, C);
    if (IsZero(phi_n[f]) || IsZero(phi_s[f])) {
      out.push_back(OneHot(C, ref));
      continue;
    }
    out.push_back(PerBin(f, [&] {
      const CMatrix t = Solve(DiagLoad(phi_n[f], eps), phi_s[f]);
      const Complex tr = Trace(t);
      double fro = 0.0;
      for (const auto &z : t.data()) fro += std::norm(z);
      fro = std::sqrt(fro);
      if (!(std::abs(tr) >= 1e-12 * fro) || fro == 0.0)
        throw DegenerateError("filter_wo_sv: near-zero trace of Phi_N^-1 Phi_S");
      CVector w = t.Col(ref);
      for (auto &z : w) z /= tr;
      return w;
    }));
  }
  return out;
}

FilterBank FilterWithSv(const HermitianStack &phi_n, const SteeringVectors &v, std::size_t ref,
                        double eps) {
  if (phi_n.size() != v.size()) throw ShapeError("filter_with_sv: bin counts differ");
  FilterBank out;
  out.reserve(v.size());
  for (std::size_t f = 0; f < v.size(); ++f) {
    const std::size_t C = phi_n[f].rows();
    if (v[f].size() != C) throw ShapeError("filter_with_sv: steering vector length mismatch");
    CheckRef(ref, C);
    if (IsZero(phi_n[f])) {
      out.push_back(OneHot(C, ref));
      continue;
    }
    out.push_back(PerBin(f, [&] {
      const CVector a = Solve(DiagLoad(phi_n[f], eps), v[f]);
      const Complex denom = Dot(v[f], a);
      if (!(std::abs(denom) >= 1e-30))
        throw DegenerateError("filter_with_sv: zero denominator v^H Phi_N^-1 v");
      const Complex scale = std::conj(v[f][ref]) / denom;
      CVector w(C);
      for (std::size_t c = 0; c < C; ++c) w[c] = a[c] * scale;
      return w;
    }));
  }
  return out;
}

SpectroTensor ApplyFilter(const SpectroTensor &derevb, const FilterBank &w) {
  const std::size_t T = derevb.frames(), F = derevb.bins(), C = derevb.channels();
  if (w.size() != F) throw ShapeError("apply_filter: filter bank has wrong bin count");
  for (const auto &wf : w)
    if (wf.size() != C) throw ShapeError("apply_filter: filter length differs from channel count");
  SpectroTensor out(T, F, 1);
  out.config = derevb.config;
  out.sample_rate = derevb.sample_rate;
  out.num_samples = derevb.num_samples;
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t f = 0; f < F; ++f) out(t, f, 0) = Dot(w[f], derevb.Cell(t, f));
  return out;
}

}  // namespace convbeam
