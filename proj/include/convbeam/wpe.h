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

#ifndef CONVBEAM_WPE_H_
#define CONVBEAM_WPE_H_

#include <cstddef>

#include "convbeam/cxla.h"
#include "convbeam/mask.h"
#include "convbeam/stft.h"

namespace convbeam {

struct WpeConfig {
  std::size_t taps = 5;    // K
  std::size_t delay = 3;   // prediction delay in frames
  std::size_t iterations = 1;
  double eps = 1e-3;       // diagonal loading of the correlation matrix
  double xi = 1e-6;        // mask floor for the power estimate

  void Validate() const;
  bool operator==(const WpeConfig &) const = default;
};

// Time-varying source power lambda(t, f), floored to stay positive.
using PowerMap = TfGrid;

inline constexpr double kPowerRelativeFloor = 1e-10;
inline constexpr double kPowerAbsoluteFloor = 1e-15;

// lambda(t, f) = 1/C sum_c [M(t,f,c) / mean_tau M(tau,f,c)] |Y(t,f,c)|^2,
// floored per frequency at 1e-10 * max_t lambda and absolutely at 1e-15.
// Rank-1 and rank-2 masks broadcast over the missing axes.
PowerMap EstimatePower(const SpectroTensor &mixture, const MaskTensor &wpe_mask);

// Channel mean of |Y|^2 with the same flooring as EstimatePower.
PowerMap ChannelPower(const SpectroTensor &spec);

// Prediction filter G (K*C x C) for one frequency bin, from the
// power-weighted correlation of the delayed context.
CMatrix WpeFilterCoefficients(const SpectroTensor &mixture, const PowerMap &power,
                              std::size_t bin, const WpeConfig &config);

// Dereverberated tensor Y - G^H Ytilde, same shape as the input.
SpectroTensor WpeFilter(const SpectroTensor &mixture, const PowerMap &power,
                        const WpeConfig &config);

}  // namespace convbeam

#endif  // CONVBEAM_WPE_H_
