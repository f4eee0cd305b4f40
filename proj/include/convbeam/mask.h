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

#ifndef CONVBEAM_MASK_H_
#define CONVBEAM_MASK_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "convbeam/stft.h"

namespace convbeam {

enum class MaskRole : std::uint8_t { kWpe = 0, kBfTarget = 1, kBfNoise = 2 };

const char *MaskRoleName(MaskRole role);

// Real mask in [0, 1] with rank 3 (T, F, C), rank 2 (T, F) or rank 1 (T).
// Lower-rank masks broadcast over the missing trailing axes in At().
class MaskTensor {
 public:
  MaskTensor() = default;
  MaskTensor(MaskRole role, std::uint8_t speaker, std::vector<std::size_t> dims,
             double fill = 0.0);
  // Validates that every value lies in [0, 1].
  MaskTensor(MaskRole role, std::uint8_t speaker, std::vector<std::size_t> dims,
             std::vector<double> values);

  MaskRole role() const { return role_; }
  std::uint8_t speaker() const { return speaker_; }
  std::size_t rank() const { return dims_.size(); }
  const std::vector<std::size_t> &dims() const { return dims_; }
  std::size_t frames() const { return dims_.empty() ? 0 : dims_[0]; }
  std::size_t bins() const { return rank() >= 2 ? dims_[1] : 0; }
  std::size_t channels() const { return rank() == 3 ? dims_[2] : 0; }

  std::size_t Index(std::size_t t, std::size_t f, std::size_t c) const;
  double At(std::size_t t, std::size_t f = 0, std::size_t c = 0) const {
    return values_[Index(t, f, c)];
  }
  double &Mutable(std::size_t t, std::size_t f = 0, std::size_t c = 0) {
    return values_[Index(t, f, c)];
  }

  const std::vector<double> &values() const { return values_; }
  std::vector<double> &values() { return values_; }

  bool operator==(const MaskTensor &) const = default;

 private:
  MaskRole role_ = MaskRole::kWpe;
  std::uint8_t speaker_ = 0;
  std::vector<std::size_t> dims_;
  std::vector<double> values_;
};

struct MaskSet {
  MaskTensor wpe;
  MaskTensor target;
  MaskTensor noise;
};

// STFT-domain ground truth needed by the oracle masks.
struct SceneSpectra {
  std::vector<SpectroTensor> early;  // per speaker
  SpectroTensor late_sum;            // sum of all speakers' late parts
  SpectroTensor noise;
};

inline constexpr double kOracleDelta = 1e-10;

// Magnitude-ratio oracle masks, per channel (rank 3). For speaker j:
//   target = |early_j| / (sum_i |early_i| + |late_sum| + |noise| + delta)
//   noise  = 1 - target
//   wpe    = target
std::vector<MaskSet> OracleMasks(const SceneSpectra &truth, const SpectroTensor &mixture);

// max(m, xi) entrywise; 0 <= xi < 1.
MaskTensor FloorMask(const MaskTensor &m, double xi);

// Mean over channels of a rank-3 mask.
MaskTensor ChannelAverage(const MaskTensor &m);

// Per-frame mean over frequency (and channels): rank 2/3 -> rank 1.
MaskTensor VadCollapse(const MaskTensor &m);

// Rank 1 -> rank 2 by repeating each frame value over `bins` bins.
MaskTensor BroadcastFrames(const MaskTensor &m, std::size_t bins);

// (T, F) weight grid from a rank-1 or rank-2 mask.
TfGrid MaskWeights(const MaskTensor &m, std::size_t bins);

// Binary mask file, little-endian:
//   "CBMK" | u32 version = 1 | u8 role | u8 speaker | u8 rank |
//   u32 dims[rank] | f64 values (t-major, then f, then c)
void SaveMask(const MaskTensor &m, const std::filesystem::path &path);
MaskTensor LoadMask(const std::filesystem::path &path);
std::vector<std::uint8_t> EncodeMask(const MaskTensor &m);
MaskTensor DecodeMask(const std::vector<std::uint8_t> &bytes);

}  // namespace convbeam

#endif  // CONVBEAM_MASK_H_
