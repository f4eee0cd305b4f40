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

#include "convbeam/pipeline.h"

#include <chrono>
#include <cmath>
#include <string>
#include <tuple>

#include "convbeam/beamform.h"
#include "convbeam/error.h"
#include "convbeam/wpe.h"

namespace convbeam {

namespace {

// Runs fn, charging its wall time to `stage` and tagging escaping errors.
template <typename Fn>
auto Timed(StageTimings &timings, const std::string &stage, const std::string &context, Fn &&fn) {
  const auto start = std::chrono::steady_clock::now();
  auto record = [&] {
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
    timings.Add(stage, dt.count());
  };
  try {
    auto result = fn();
    record();
    return result;
  } catch (Error &e) {
    e.set_stage(context.empty() ? stage : context + " " + stage);
    throw;
  }
}

// Floored mask reduced for covariance weighting: (T, F) for tf masks, (T)
// for vad masks.
MaskTensor Reduce(const MaskTensor &m, MaskType type) {
  if (type == MaskType::kVad) return VadCollapse(m);
  return m.rank() == 3 ? ChannelAverage(m) : m;
}

TfGrid ReciprocalPower(const PowerMap &power) {
  TfGrid w(power.frames, power.bins);
  for (std::size_t i = 0; i < w.values.size(); ++i) w.values[i] = 1.0 / power.values[i];
  return w;
}

void CheckMaskShape(const MaskTensor &m, const SpectroTensor &y, const std::string &what) {
  const bool ok = m.frames() == y.frames() && (m.rank() < 2 || m.bins() == y.bins()) &&
                  (m.rank() < 3 || m.channels() == y.channels());
  if (!ok) throw ShapeError(what + " mask shape does not match the mixture STFT");
}

}  // namespace

void StageTimings::Add(const std::string &stage, double seconds) {
  for (auto &[name, total] : entries_)
    if (name == stage) {
      total += seconds;
      return;
    }
  entries_.emplace_back(stage, seconds);
}

SpectroTensor AnalyzeMixture(const AudioBuffer &mixture, const EnhanceConfig &config) {
  mixture.Validate();
  const std::size_t available = mixture.num_channels();
  const std::size_t used = config.channels_used == 0 ? available : config.channels_used;
  if (used > available)
    throw ValidationError("io.channels_used = " + std::to_string(used) + " but the mixture has " +
                          std::to_string(available) + " channels");
  return Stft(mixture.FirstChannels(used), config.stft);
}

EnhanceResult EnhanceSpectra(const SpectroTensor &mixture, const std::vector<MaskSet> &masks,
                             const EnhanceConfig &config) {
  config.Validate();
  config.beamformer.Validate(mixture.channels());
  if (masks.empty()) throw ValidationError("enhance: no mask sets given");
  const std::size_t F = mixture.bins();
  const std::size_t ref = config.beamformer.ref_channel - 1;
  const double eps = config.beamformer.eps;

  EnhanceResult result;
  auto &timings = result.timings;
  for (std::size_t j = 0; j < masks.size(); ++j) {
    const std::string who = "speaker " + std::to_string(j + 1);
    SpeakerTrace trace;

    Timed(timings, "masks", who, [&] {
      CheckMaskShape(masks[j].wpe, mixture, "wpe");
      CheckMaskShape(masks[j].target, mixture, "target");
      CheckMaskShape(masks[j].noise, mixture, "noise");
      MaskTensor wpe = FloorMask(masks[j].wpe, config.wpe.xi);
      trace.wpe_mask = config.mask_type == MaskType::kVad ? VadCollapse(wpe) : wpe;
      trace.target_weights =
          MaskWeights(Reduce(FloorMask(masks[j].target, config.xi_bf), config.mask_type), F);
      trace.noise_weights =
          MaskWeights(Reduce(FloorMask(masks[j].noise, config.xi_bf), config.mask_type), F);
      return 0;
    });

    trace.power = Timed(timings, "power", who, [&] { return EstimatePower(mixture, trace.wpe_mask); });

    trace.dereverberated = Timed(timings, "wpe", who, [&] {
      return config.wpe_enabled ? WpeFilter(mixture, trace.power, config.wpe) : mixture;
    });

    const auto [phi_s, phi_noise, phi_n] = Timed(timings, "covariance", who, [&] {
      HermitianStack s = Covariance(trace.dereverberated, trace.target_weights);
      HermitianStack noise = Covariance(trace.dereverberated, trace.noise_weights);
      HermitianStack n = config.beamformer.variant == BeamformerVariant::kMvdr
                             ? noise
                             : Covariance(trace.dereverberated, ReciprocalPower(trace.power));
      return std::make_tuple(std::move(s), std::move(noise), std::move(n));
    });

    trace.filter = Timed(timings, "filter", who, [&] {
      if (config.beamformer.formula == FilterFormula::kWithoutSv)
        return FilterWithoutSv(phi_n, phi_s, ref, eps);
      trace.steering =
          SteeringVector(phi_noise, phi_s, config.beamformer.sv_power_iters, eps, ref);
      return FilterWithSv(phi_n, trace.steering, ref, eps);
    });

    trace.beamformed = Timed(timings, "apply", who,
                             [&] { return ApplyFilter(trace.dereverberated, trace.filter); });

    result.outputs.push_back(Timed(timings, "istft", who, [&] {
      AudioBuffer out = Istft(trace.beamformed);
      for (const double v : out.channels[0])
        if (!std::isfinite(v)) throw DegenerateError("non-finite sample in enhanced output");
      return out;
    }));
    result.traces.push_back(std::move(trace));
  }
  return result;
}

SceneSpectra ComputeSceneSpectra(const SceneTruth &truth, const StftConfig &stft,
                                 std::size_t channels) {
  SceneSpectra out;
  for (const auto &early : truth.early) out.early.push_back(Stft(early.FirstChannels(channels), stft));
  AudioBuffer late_sum = truth.late.at(0).FirstChannels(channels);
  for (std::size_t j = 1; j < truth.late.size(); ++j)
    for (std::size_t c = 0; c < channels; ++c)
      for (std::size_t n = 0; n < late_sum.num_samples(); ++n)
        late_sum.channels[c][n] += truth.late[j].channels[c][n];
  out.late_sum = Stft(late_sum, stft);
  out.noise = Stft(truth.noise.FirstChannels(channels), stft);
  return out;
}

EnhanceResult EnhanceWithOracle(const SceneTruth &truth, const EnhanceConfig &config) {
  const SpectroTensor mixture = AnalyzeMixture(truth.mixture, config);
  const SceneSpectra spectra = ComputeSceneSpectra(truth, config.stft, mixture.channels());
  return EnhanceSpectra(mixture, OracleMasks(spectra, mixture), config);
}

}  // namespace convbeam
