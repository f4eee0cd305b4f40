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

#ifndef CONVBEAM_PIPELINE_H_
#define CONVBEAM_PIPELINE_H_

#include <string>
#include <utility>
#include <vector>

#include "convbeam/config.h"
#include "convbeam/mask.h"
#include "convbeam/scene.h"
#include "convbeam/stft.h"

namespace convbeam {

// Wall-clock seconds per named stage, in first-use order.
class StageTimings {
 public:
  void Add(const std::string &stage, double seconds);
  const std::vector<std::pair<std::string, double>> &entries() const { return entries_; }

 private:
  std::vector<std::pair<std::string, double>> entries_;
};

// Per-speaker intermediate results kept for inspection and tests.
struct SpeakerTrace {
  MaskTensor wpe_mask;     // after floor and (for vad) collapse
  TfGrid target_weights;
  TfGrid noise_weights;
  PowerMap power;
  SpectroTensor dereverberated;
  SteeringVectors steering;  // empty for the without_sv formula
  FilterBank filter;
  SpectroTensor beamformed;
};

struct EnhanceResult {
  std::vector<AudioBuffer> outputs;  // mono, one per speaker
  std::vector<SpeakerTrace> traces;
  StageTimings timings;
};

// STFT of the first config.channels_used channels (all when 0).
SpectroTensor AnalyzeMixture(const AudioBuffer &mixture, const EnhanceConfig &config);

// masks -> floor -> channel average or VAD collapse -> power -> WPE ->
// covariances -> filter -> apply -> iSTFT, once per mask set. Errors carry
// the failing stage and, where relevant, the frequency bin.
EnhanceResult EnhanceSpectra(const SpectroTensor &mixture, const std::vector<MaskSet> &masks,
                             const EnhanceConfig &config);

// Oracle inputs for the first `channels` channels of a rendered scene.
SceneSpectra ComputeSceneSpectra(const SceneTruth &truth, const StftConfig &stft,
                                 std::size_t channels);

// AnalyzeMixture + oracle masks from `truth` + EnhanceSpectra.
EnhanceResult EnhanceWithOracle(const SceneTruth &truth, const EnhanceConfig &config);

}  // namespace convbeam

#endif  // CONVBEAM_PIPELINE_H_
