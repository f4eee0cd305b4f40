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

#ifndef CONVBEAM_WAV_H_
#define CONVBEAM_WAV_H_

#include <filesystem>

#include "convbeam/stft.h"

namespace convbeam {

enum class WavFormat { kFloat32, kPcm16 };

// Reads 16-bit PCM, 32-bit float and 64-bit float RIFF/WAVE files
// (plain or WAVE_FORMAT_EXTENSIBLE).
AudioBuffer ReadWav(const std::filesystem::path &path);

// 16-bit output rounds to nearest with clipping, no dither.
void WriteWav(const std::filesystem::path &path, const AudioBuffer &audio,
              WavFormat format = WavFormat::kFloat32);

}  // namespace convbeam

#endif  // CONVBEAM_WAV_H_
