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

#ifndef CONVBEAM_CONFIG_H_
#define CONVBEAM_CONFIG_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>

#include "convbeam/beamform.h"
#include "convbeam/stft.h"
#include "convbeam/wpe.h"

namespace convbeam {

enum class MaskType { kTf, kVad };
enum class MaskSource { kOracle, kFile };

struct EnhanceConfig {
  bool wpe_enabled = true;
  WpeConfig wpe;
  BeamformerConfig beamformer;
  MaskType mask_type = MaskType::kTf;
  MaskSource mask_source = MaskSource::kOracle;
  // Directory of mask files when mask_source is kFile.
  std::string mask_path;
  double xi_bf = 1e-2;
  StftConfig stft;
  // 0 = every channel of the input.
  std::size_t channels_used = 0;
  std::string output = "enhanced";

  void Validate() const;
  bool operator==(const EnhanceConfig &) const = default;
};

// INI text:
//   [wpe]        enabled taps delay iterations eps xi
//   [beamformer] variant formula ref_channel ref_mode eps sv_power_iters
//   [mask]       type source path xi_bf
//   [stft]       window_len shift transform_len
//   [io]         channels_used output
// Missing keys keep their defaults; unknown sections or keys throw ParseError.
EnhanceConfig ParseEnhanceConfig(const std::string &text);
std::string RenderEnhanceConfig(const EnhanceConfig &config);
EnhanceConfig LoadEnhanceConfig(const std::filesystem::path &path);

// Applies CONVBEAM_<SECTION>_<KEY> variables, e.g. CONVBEAM_WPE_TAPS=10 or
// CONVBEAM_BEAMFORMER_REF_CHANNEL=2. Unknown CONVBEAM_ names throw.
void ApplyEnvOverrides(EnhanceConfig &config, const std::map<std::string, std::string> &env);
std::map<std::string, std::string> ConvbeamEnvironment();

const char *VariantName(BeamformerVariant v);
const char *FormulaName(FilterFormula f);
const char *MaskTypeName(MaskType t);

}  // namespace convbeam

#endif  // CONVBEAM_CONFIG_H_
