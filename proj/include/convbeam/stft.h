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

#ifndef CONVBEAM_STFT_H_
#define CONVBEAM_STFT_H_

#include <cstddef>
#include <span>
#include <vector>

#include "convbeam/cxla.h"

namespace convbeam {

// Multichannel time-domain signal; every channel has the same length.
struct AudioBuffer {
  double sample_rate = 16000.0;
  std::vector<std::vector<double>> channels;

  std::size_t num_channels() const { return channels.size(); }
  std::size_t num_samples() const { return channels.empty() ? 0 : channels[0].size(); }

  // Throws ValidationError when channels differ in length or the rate is not positive.
  void Validate() const;
  // First `count` channels.
  AudioBuffer FirstChannels(std::size_t count) const;
  // Single channel `c` as a mono buffer.
  AudioBuffer Channel(std::size_t c) const;
};

// Framing: frame t covers samples [t * shift, t * shift + window_len),
// zero-padded past the end of the signal. The window is zero-padded to
// fft_len before the transform.
struct StftConfig {
  std::size_t window_len = 400;  // 25 ms at 16 kHz
  std::size_t shift = 160;       // 10 ms
  std::size_t fft_len = 512;     // 257 bins

  std::size_t num_bins() const { return fft_len / 2 + 1; }
  void Validate() const;
  bool operator==(const StftConfig &) const = default;
};

// Complex STFT tensor indexed (frame, bin, channel).
class SpectroTensor {
 public:
  SpectroTensor() = default;
  SpectroTensor(std::size_t frames, std::size_t bins, std::size_t channels);

  std::size_t frames() const { return frames_; }
  std::size_t bins() const { return bins_; }
  std::size_t channels() const { return channels_; }

  Complex &operator()(std::size_t t, std::size_t f, std::size_t c) {
    return data_[(t * bins_ + f) * channels_ + c];
  }
  const Complex &operator()(std::size_t t, std::size_t f, std::size_t c) const {
    return data_[(t * bins_ + f) * channels_ + c];
  }
  // All channels of one (t, f) cell.
  std::span<const Complex> Cell(std::size_t t, std::size_t f) const {
    return {data_.data() + (t * bins_ + f) * channels_, channels_};
  }

  std::span<Complex> data() { return data_; }
  std::span<const Complex> data() const { return data_; }

  bool SameShape(const SpectroTensor &o) const {
    return frames_ == o.frames_ && bins_ == o.bins_ && channels_ == o.channels_;
  }
  SpectroTensor Channel(std::size_t c) const;
  SpectroTensor FirstChannels(std::size_t count) const;

  StftConfig config;
  double sample_rate = 16000.0;
  // Length of the analysed signal; 0 when unknown.
  std::size_t num_samples = 0;

 private:
  std::size_t frames_ = 0;
  std::size_t bins_ = 0;
  std::size_t channels_ = 0;
  std::vector<Complex> data_;
};

// Real (T, F) grid of weights or powers.
struct TfGrid {
  std::size_t frames = 0;
  std::size_t bins = 0;
  std::vector<double> values;

  TfGrid() = default;
  TfGrid(std::size_t t, std::size_t f, double fill = 0.0)
      : frames(t), bins(f), values(t * f, fill) {}
  double &operator()(std::size_t t, std::size_t f) { return values[t * bins + f]; }
  double operator()(std::size_t t, std::size_t f) const { return values[t * bins + f]; }
};

// Periodic Hann window.
std::vector<double> HannWindow(std::size_t len);

// Canonical dual of the analysis window for the given shift:
// w[n] / sum_k w[n + k * shift]^2. Reconstruction is exact wherever frames
// fully overlap.
std::vector<double> SynthesisWindow(const StftConfig &config);

std::size_t NumFrames(std::size_t num_samples, std::size_t shift);

SpectroTensor Stft(const AudioBuffer &audio, const StftConfig &config);

// Weighted overlap-add. Output length is (T - 1) * shift + window_len,
// trimmed to spec.num_samples when that is known.
AudioBuffer Istft(const SpectroTensor &spec);

}  // namespace convbeam

#endif  // CONVBEAM_STFT_H_
