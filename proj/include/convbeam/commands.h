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

#ifndef CONVBEAM_COMMANDS_H_
#define CONVBEAM_COMMANDS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "convbeam/config.h"
#include "convbeam/metrics.h"
#include "convbeam/scene.h"
#include "convbeam/wav.h"

namespace convbeam {

inline constexpr const char *kVersion = "0.1.0";

// Files written by RunSimulate and read back as a truth directory.
inline constexpr const char *kSceneManifestName = "scene.ini";
inline constexpr const char *kRunManifestName = "manifest.ini";
inline constexpr const char *kMixtureName = "mixture.wav";
inline constexpr const char *kNoiseName = "noise.wav";
inline constexpr const char *kSteeringName = "steering.bin";
std::string EarlyName(std::size_t speaker);  // early_<j>.wav, 1-based
std::string LateName(std::size_t speaker);   // late_<j>.wav
// <role>_<j>.cbmk inside mask.path, e.g. bf_target_2.cbmk.
std::string MaskFileName(MaskRole role, std::size_t speaker);

// steering.bin, little-endian:
//   "CBSV" | u32 version = 1 | u32 J | u32 F | u32 C |
//   f64 (re, im) pairs indexed [speaker][bin][channel]
void SaveSteering(const std::vector<SteeringVectors> &v, const std::filesystem::path &path);
std::vector<SteeringVectors> LoadSteering(const std::filesystem::path &path);

std::string Sha256Hex(const std::filesystem::path &path);

// A rendered scene read back from disk. dry, steering and rirs stay empty.
SceneTruth LoadTruthDir(const std::filesystem::path &dir, SceneSpec *spec = nullptr);

struct SimulateOptions {
  std::filesystem::path scene;  // scene manifest
  std::vector<std::filesystem::path> sources;
  std::filesystem::path out_dir;
  std::optional<std::uint64_t> seed;  // overrides the manifest seed
  WavFormat format = WavFormat::kFloat32;
};

// Writes the scene manifest, mixture, early/late images, noise and steering
// vectors into out_dir. Returns the rendered scene.
SceneTruth RunSimulate(const SimulateOptions &options, std::ostream *log = nullptr);

// Writes an already-rendered scene the same way RunSimulate does.
void WriteScene(const SceneSpec &spec, const SceneTruth &truth,
                const std::filesystem::path &out_dir, WavFormat format = WavFormat::kFloat32);

struct EnhanceOptions {
  EnhanceConfig config;
  std::filesystem::path mixture;
  std::filesystem::path truth_dir;  // required when config.mask_source is oracle
  std::filesystem::path out_dir;
  std::uint64_t seed = 0;
  std::vector<std::filesystem::path> extra_inputs;  // hashed into the manifest
};

// Output files are <out_dir>/<config.output>_<j>.wav; the run manifest goes
// beside them. Returns the written paths.
std::vector<std::filesystem::path> RunEnhance(const EnhanceOptions &options,
                                              std::ostream *log = nullptr);

struct EvaluateOptions {
  std::vector<std::filesystem::path> enhanced;
  std::filesystem::path truth_dir;
  std::filesystem::path out_dir;
  std::size_t ref_channel = 1;
  // Samples dropped at each edge after trimming to the common length.
  std::size_t edge = 400;
};

// Writes report.txt and report.tsv into out_dir.
ScoreReport RunEvaluate(const EvaluateOptions &options);

struct DemoOptions {
  std::filesystem::path out_dir;
  std::uint64_t seed = 1;
  std::size_t channels = 6;
  double seconds = 10.0;
  EnhanceConfig base;  // variant, formula and mask type are overridden per grid cell
};

// Chirp trains for even speakers, band-limited noise bursts for odd ones.
// Deterministic in seed.
std::vector<double> DemoSource(std::uint64_t seed, std::size_t speaker, std::size_t num_samples,
                               double sample_rate);

struct DemoRow {
  std::string id;
  std::string model;
  std::string formula;
  std::string mask;
  ScoreReport report;
};

// simulate -> 8-cell enhancement grid -> evaluate; writes table.txt and
// table.tsv at the top of out_dir.
std::vector<DemoRow> RunDemo(const DemoOptions &options, std::ostream *log = nullptr);

std::string FormatDemoTable(const std::vector<DemoRow> &rows);
std::string FormatDemoTsv(const std::vector<DemoRow> &rows);

}  // namespace convbeam

#endif  // CONVBEAM_COMMANDS_H_
