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

#ifndef CONVBEAM_BEAMFORM_H_
#define CONVBEAM_BEAMFORM_H_

#include <cstddef>
#include <vector>

#include "convbeam/cxla.h"
#include "convbeam/stft.h"

namespace convbeam {

enum class BeamformerVariant { kMvdr, kWmpdr };
enum class FilterFormula { kWithoutSv, kWithSv };
enum class RefMode { kFixedOneHot };

struct BeamformerConfig {
  BeamformerVariant variant = BeamformerVariant::kMvdr;
  FilterFormula formula = FilterFormula::kWithSv;
  std::size_t ref_channel = 1;  // q, 1-based
  RefMode ref_mode = RefMode::kFixedOneHot;
  double eps = 1e-8;
  int sv_power_iters = 2;

  void Validate(std::size_t channels) const;
  bool operator==(const BeamformerConfig &) const = default;
};

// One C x C covariance per frequency bin.
using HermitianStack = std::vector<CMatrix>;
// One C-vector per frequency bin.
using FilterBank = std::vector<CVector>;
using SteeringVectors = std::vector<CVector>;

// Phi_f = sum_t w(t,f) Y Y^H / sum_t w(t,f), hermitized.
// Throws DegenerateError when sum_t w(t,f) < 1e-30 for some f.
HermitianStack Covariance(const SpectroTensor &derevb, const TfGrid &weights);

// v_f = Phi_noise,f * MaxEigVec(Phi_noise,f^-1 Phi_S,f) with the
// eigenvector found by power iteration from (1, ..., 1) / sqrt(C) and the
// inverse applied through a loaded solve.
SteeringVectors SteeringVector(const HermitianStack &phi_noise, const HermitianStack &phi_s,
                               int iters, double eps, std::size_t ref);

// w_f = (Phi_N^-1 Phi_S / Trace(Phi_N^-1 Phi_S)) u with u = e_ref (0-based).
FilterBank FilterWithoutSv(const HermitianStack &phi_n, const HermitianStack &phi_s,
                           std::size_t ref, double eps);

// w_f = Phi_N^-1 v / (v^H Phi_N^-1 v) * conj(v_ref).
FilterBank FilterWithSv(const HermitianStack &phi_n, const SteeringVectors &v, std::size_t ref,
                        double eps);

// X(t, f) = w_f^H Y(t, f); single-channel result.
SpectroTensor ApplyFilter(const SpectroTensor &derevb, const FilterBank &w);

}  // namespace convbeam

#endif  // CONVBEAM_BEAMFORM_H_
