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

#ifndef CONVBEAM_SCENE_H_
#define CONVBEAM_SCENE_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "convbeam/beamform.h"
#include "convbeam/stft.h"

namespace convbeam {

using Position = std::array<double, 3>;

inline constexpr double kSpeedOfSound = 343.0;
// Sparse reflections occupy this window after the direct path; the dense
// exponential tail starts after it.
inline constexpr double kReflectionWindowMs = 50.0;

struct SceneSpec {
  std::size_t speakers = 1;
  std::size_t channels = 1;
  double sample_rate = 16000.0;
  Position room = {6.0, 5.0, 3.0};
  double t60 = 0.0;
  std::vector<Position> sources;
  std::vector<Position> mics;
  double noise_snr = std::numeric_limits<double>::infinity();  // dB; inf = no noise
  double early_ms = 50.0;
  std::uint64_t seed = 0;

  void Validate() const;
  bool operator==(const SceneSpec &) const = default;
};

// Impulse response of one speaker-channel path, split at the early boundary.
struct RoomResponse {
  std::vector<double> taps;
  double direct_delay = 0.0;       // samples, fractional
  std::size_t early_end = 0;       // first sample of the late part
};

struct SceneTruth {
  AudioBuffer mixture;
  std::vector<AudioBuffer> early;  // per speaker, C channels
  std::vector<AudioBuffer> late;   // per speaker, C channels
  AudioBuffer noise;
  std::vector<AudioBuffer> dry;    // per speaker, mono
  std::vector<SteeringVectors> steering;            // [speaker][bin]
  std::vector<std::vector<RoomResponse>> rirs;      // [speaker][channel]
  // Global gain applied to every rendered component (peak normalization).
  double gain = 1.0;
};

// Deterministic in (spec.seed, speaker, channel).
RoomResponse SynthRir(const SceneSpec &spec, std::size_t speaker, std::size_t channel);

// Renders the spatial scene: mixture = sum_j (early_j + late_j) + noise,
// exactly, with every component on a 2^-24 grid so float32 storage is
// lossless.
SceneTruth Render(const SceneSpec &spec, const std::vector<std::vector<double>> &dry,
                  std::size_t fft_len = 512);

// Unit-norm per-bin transfer of the early RIRs, channel 1 phase made real.
SteeringVectors EarlyTransfer(const std::vector<RoomResponse> &rirs, std::size_t fft_len);

// Speech-like test signal: gliding harmonic syllables with pitch jitter,
// amplitude shimmer, aspiration noise and formant shaping, fricative bursts,
// pauses; RMS 0.1 with a noise floor 40 dB below it. Deterministic in seed.
std::vector<double> SpeechLikeSource(std::uint64_t seed, std::size_t num_samples,
                                     double sample_rate);

// Room 5-10 x 5-10 x 3-4 m, circular array of 15-25 cm aperture at least
// 2.5 m from every wall, sources 1-2 m away at azimuths at least 40 degrees
// apart. Deterministic in seed.
SceneSpec RandomSceneSpec(std::size_t speakers, std::size_t channels, double t60,
                          double noise_snr, std::uint64_t seed);

// Key = value manifest with [scene], [room], [sourceN] and [micN] sections.
std::string RenderSceneManifest(const SceneSpec &spec);
SceneSpec ParseSceneManifest(const std::string &text);
SceneSpec LoadSceneManifest(const std::filesystem::path &path);

}  // namespace convbeam

#endif  // CONVBEAM_SCENE_H_
