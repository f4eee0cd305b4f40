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

#include "convbeam/wpe.h"

#include <algorithm>
#include <string>

#include "convbeam/error.h"

namespace convbeam {

namespace {

void FloorPower(PowerMap &power) {
  for (std::size_t f = 0; f < power.bins; ++f) {
    double peak = 0.0;
    for (std::size_t t = 0; t < power.frames; ++t) peak = std::max(peak, power(t, f));
    const double floor = std::max(kPowerRelativeFloor * peak, kPowerAbsoluteFloor);
    for (std::size_t t = 0; t < power.frames; ++t) power(t, f) = std::max(power(t, f), floor);
  }
}

// Stacked delayed context [Y(t - delay); ...; Y(t - delay - K + 1)] for bin f,
// zero before the first frame.
void Context(const SpectroTensor &y, std::size_t t, std::size_t f, const WpeConfig &config,
             CVector &out) {
  const std::size_t C = y.channels();
  for (std::size_t k = 0; k < config.taps; ++k) {
    const std::size_t lag = config.delay + k;
    for (std::size_t c = 0; c < C; ++c)
      out[k * C + c] = t >= lag ? y(t - lag, f, c) : Complex(0.0);
  }
}

bool IsZero(const CMatrix &m) {
  return std::all_of(m.data().begin(), m.data().end(),
                     [](const Complex &z) { return z == Complex(0.0); });
}

}  // namespace

void WpeConfig::Validate() const {
  if (taps < 1) throw ValidationError("wpe: taps must be >= 1");
  if (delay < 1) throw ValidationError("wpe: delay must be >= 1");
  if (iterations < 1) throw ValidationError("wpe: iterations must be >= 1");
  if (!(eps >= 0.0)) throw ValidationError("wpe: eps must be >= 0");
  if (!(xi >= 0.0 && xi < 1.0)) throw ValidationError("wpe: xi must be in [0, 1)");
}

PowerMap EstimatePower(const SpectroTensor &mixture, const MaskTensor &wpe_mask) {
  const std::size_t T = mixture.frames(), F = mixture.bins(), C = mixture.channels();
  if (wpe_mask.frames() != T || (wpe_mask.rank() >= 2 && wpe_mask.bins() != F) ||
      (wpe_mask.rank() == 3 && wpe_mask.channels() != C))
    throw ShapeError("estimate_power: mask shape does not match the mixture");

  PowerMap power(T, F, 0.0);
  for (std::size_t f = 0; f < F; ++f) {
    for (std::size_t c = 0; c < C; ++c) {
      double mean = 0.0;
      for (std::size_t t = 0; t < T; ++t) mean += wpe_mask.At(t, f, c);
      mean /= static_cast<double>(T);
      if (mean <= 0.0) continue;  // an all-zero mask contributes nothing
      for (std::size_t t = 0; t < T; ++t)
        power(t, f) += wpe_mask.At(t, f, c) / mean * std::norm(mixture(t, f, c));
    }
    for (std::size_t t = 0; t < T; ++t) power(t, f) /= static_cast<double>(C);
  }
  FloorPower(power);
  return power;
}

PowerMap ChannelPower(const SpectroTensor &spec) {
  PowerMap power(spec.frames(), spec.bins(), 0.0);
  for (std::size_t t = 0; t < spec.frames(); ++t)
    for (std::size_t f = 0; f < spec.bins(); ++f) {
      double acc = 0.0;
      for (std::size_t c = 0; c < spec.channels(); ++c) acc += std::norm(spec(t, f, c));
      power(t, f) = acc / static_cast<double>(spec.channels());
    }
  FloorPower(power);
  return power;
}

CMatrix WpeFilterCoefficients(const SpectroTensor &mixture, const PowerMap &power,
                              std::size_t bin, const WpeConfig &config) {
  config.Validate();
  const std::size_t T = mixture.frames(), C = mixture.channels();
  if (T <= config.delay + config.taps)
    throw TooFewFramesError("wpe: " + std::to_string(T) + " frames, need more than delay + taps = " +
                            std::to_string(config.delay + config.taps));
  if (power.frames != T || power.bins != mixture.bins())
    throw ShapeError("wpe: power map shape does not match the mixture");

  const std::size_t D = config.taps * C;
  CMatrix corr(D, D);
  CMatrix cross(D, C);
  CVector ctx(D);
  for (std::size_t t = 0; t < T; ++t) {
    Context(mixture, t, bin, config, ctx);
    const double inv = 1.0 / power(t, bin);
    for (std::size_t r = 0; r < D; ++r) {
      if (ctx[r] == Complex(0.0)) continue;
      const Complex xr = ctx[r] * inv;
      for (std::size_t c = r; c < D; ++c) corr(r, c) += xr * std::conj(ctx[c]);
      for (std::size_t c = 0; c < C; ++c) cross(r, c) += xr * std::conj(mixture(t, bin, c));
    }
  }
  for (std::size_t r = 0; r < D; ++r)
    for (std::size_t c = r + 1; c < D; ++c) corr(c, r) = std::conj(corr(r, c));

  // Nothing to predict from: the delayed context is identically zero.
  if (IsZero(corr)) return CMatrix(D, C);
  try {
    return Solve(DiagLoad(Hermitize(corr), config.eps), cross);
  } catch (Error &e) {
    e.set_bin(bin);
    throw;
  }
}

SpectroTensor WpeFilter(const SpectroTensor &mixture, const PowerMap &power,
                        const WpeConfig &config) {
  config.Validate();
  const std::size_t T = mixture.frames(), F = mixture.bins(), C = mixture.channels();
  const std::size_t D = config.taps * C;

  SpectroTensor out = mixture;
  PowerMap current = power;
  CVector ctx(D);
  for (std::size_t it = 0; it < config.iterations; ++it) {
    for (std::size_t f = 0; f < F; ++f) {
      const CMatrix g = WpeFilterCoefficients(mixture, current, f, config);
      for (std::size_t t = 0; t < T; ++t) {
        Context(mixture, t, f, config, ctx);
        for (std::size_t c = 0; c < C; ++c) {
          Complex pred = 0.0;
          for (std::size_t d = 0; d < D; ++d) pred += std::conj(g(d, c)) * ctx[d];
          out(t, f, c) = mixture(t, f, c) - pred;
        }
      }
    }
    if (it + 1 < config.iterations) current = ChannelPower(out);
  }
  return out;
}

}  // namespace convbeam
