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

#include "convbeam/wav.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "convbeam/error.h"

namespace convbeam {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xfffe;

std::uint32_t Le32(const std::uint8_t *p) {
  return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
         static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}
std::uint16_t Le16(const std::uint8_t *p) {
  return static_cast<std::uint16_t>(p[0] | p[1] << 8);
}

void Put32(std::vector<std::uint8_t> &out, std::uint32_t v) {
  for (int k = 0; k < 4; ++k) out.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
}
void Put16(std::vector<std::uint8_t> &out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}
void PutTag(std::vector<std::uint8_t> &out, const char *tag) {
  out.insert(out.end(), tag, tag + 4);
}

}  // namespace

AudioBuffer ReadWav(const std::filesystem::path &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(is)),
                                        std::istreambuf_iterator<char>());
  const std::string name = path.string();
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw ParseError(name + ": not a RIFF/WAVE file");

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const std::uint8_t *data = nullptr;
  std::size_t data_size = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t *chunk = bytes.data() + pos;
    const std::size_t size = Le32(chunk + 4);
    const std::size_t body = pos + 8;
    if (size > bytes.size() - body) throw ParseError(name + ": truncated chunk");
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16) throw ParseError(name + ": short fmt chunk");
      const std::uint8_t *f = bytes.data() + body;
      format = Le16(f);
      channels = Le16(f + 2);
      rate = Le32(f + 4);
      bits = Le16(f + 14);
      if (format == kFormatExtensible) {
        if (size < 40) throw ParseError(name + ": short extensible fmt chunk");
        format = Le16(f + 24);
      }
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = bytes.data() + body;
      data_size = size;
    }
    pos = body + size + (size & 1);
  }
  if (format == 0 || data == nullptr) throw ParseError(name + ": missing fmt or data chunk");
  if (channels == 0 || rate == 0) throw ParseError(name + ": invalid channel count or rate");

  const bool pcm16 = format == kFormatPcm && bits == 16;
  const bool f32 = format == kFormatFloat && bits == 32;
  const bool f64 = format == kFormatFloat && bits == 64;
  if (!pcm16 && !f32 && !f64)
    throw ParseError(name + ": unsupported sample format " + std::to_string(format) + "/" +
                     std::to_string(bits) + " bits");
  const std::size_t width = bits / 8;
  const std::size_t frames = data_size / (width * channels);

  AudioBuffer audio{static_cast<double>(rate),
                    std::vector<std::vector<double>>(channels, std::vector<double>(frames))};
  for (std::size_t n = 0; n < frames; ++n)
    for (std::size_t c = 0; c < channels; ++c) {
      const std::uint8_t *p = data + (n * channels + c) * width;
      double v;
      if (pcm16) {
        v = static_cast<std::int16_t>(Le16(p)) / 32768.0;
      } else if (f32) {
        v = std::bit_cast<float>(Le32(p));
      } else {
        const std::uint64_t lo = Le32(p), hi = Le32(p + 4);
        v = std::bit_cast<double>(lo | hi << 32);
      }
      audio.channels[c][n] = v;
    }
  return audio;
}

void WriteWav(const std::filesystem::path &path, const AudioBuffer &audio, WavFormat format) {
  audio.Validate();
  const std::size_t channels = audio.num_channels();
  if (channels == 0 || channels > 0xffff) throw ValidationError("wav: invalid channel count");
  const std::size_t frames = audio.num_samples();
  const std::uint16_t bits = format == WavFormat::kPcm16 ? 16 : 32;
  const std::size_t width = bits / 8;
  const std::size_t data_size = frames * channels * width;
  if (data_size > 0xffffffffULL - 44) throw ValidationError("wav: file too large");

  std::vector<std::uint8_t> out;
  out.reserve(44 + data_size);
  PutTag(out, "RIFF");
  Put32(out, static_cast<std::uint32_t>(36 + data_size));
  PutTag(out, "WAVE");
  PutTag(out, "fmt ");
  Put32(out, 16);
  Put16(out, format == WavFormat::kPcm16 ? kFormatPcm : kFormatFloat);
  Put16(out, static_cast<std::uint16_t>(channels));
  const auto rate = static_cast<std::uint32_t>(std::lround(audio.sample_rate));
  Put32(out, rate);
  Put32(out, static_cast<std::uint32_t>(rate * channels * width));
  Put16(out, static_cast<std::uint16_t>(channels * width));
  Put16(out, bits);
  PutTag(out, "data");
  Put32(out, static_cast<std::uint32_t>(data_size));
  for (std::size_t n = 0; n < frames; ++n)
    for (std::size_t c = 0; c < channels; ++c) {
      const double v = audio.channels[c][n];
      if (format == WavFormat::kPcm16) {
        const double s = std::clamp(std::nearbyint(v * 32768.0), -32768.0, 32767.0);
        Put16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(s)));
      } else {
        Put32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
      }
    }

  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os.write(reinterpret_cast<const char *>(out.data()), static_cast<std::streamsize>(out.size()));
  if (!os) throw IoError("failed writing " + path.string());
}

}  // namespace convbeam
