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

#include "convbeam/stft.h"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "convbeam/error.h"
#include "fft.h"

namespace convbeam {

void AudioBuffer::Validate() const {
  if (!(sample_rate > 0.0)) throw ValidationError("audio: sample rate must be positive");
  for (const auto &ch : channels)
    if (ch.size() != num_samples())
      throw ValidationError("audio: channels have different lengths");
}

AudioBuffer AudioBuffer::FirstChannels(std::size_t count) const {
  if (count > channels.size())
    throw ShapeError("audio: requested " + std::to_string(count) + " channels, have " +
                     std::to_string(channels.size()));
  AudioBuffer out{sample_rate, {}};
  out.channels.assign(channels.begin(), channels.begin() + static_cast<std::ptrdiff_t>(count));
  return out;
}

AudioBuffer AudioBuffer::Channel(std::size_t c) const {
  if (c >= channels.size()) throw ShapeError("audio: channel index out of range");
  return AudioBuffer{sample_rate, {channels[c]}};
}

void StftConfig::Validate() const {
  if (shift < 1 || window_len < shift)
    throw ValidationError("stft: need window_len >= shift >= 1 (window_len=" +
                          std::to_string(window_len) + ", shift=" + std::to_string(shift) + ")");
  if (fft_len < window_len)
    throw ValidationError("stft: transform length " + std::to_string(fft_len) +
                          " is shorter than the window");
}

SpectroTensor::SpectroTensor(std::size_t frames, std::size_t bins, std::size_t channels)
    : frames_(frames), bins_(bins), channels_(channels), data_(frames * bins * channels) {}

SpectroTensor SpectroTensor::Channel(std::size_t c) const {
  if (c >= channels_) throw ShapeError("spectrogram: channel index out of range");
  SpectroTensor out(frames_, bins_, 1);
  out.config = config;
  out.sample_rate = sample_rate;
  out.num_samples = num_samples;
  for (std::size_t t = 0; t < frames_; ++t)
    for (std::size_t f = 0; f < bins_; ++f) out(t, f, 0) = (*this)(t, f, c);
  return out;
}

SpectroTensor SpectroTensor::FirstChannels(std::size_t count) const {
  if (count > channels_ || count == 0)
    throw ShapeError("spectrogram: cannot select " + std::to_string(count) + " of " +
                     std::to_string(channels_) + " channels");
  SpectroTensor out(frames_, bins_, count);
  out.config = config;
  out.sample_rate = sample_rate;
  out.num_samples = num_samples;
  for (std::size_t t = 0; t < frames_; ++t)
    for (std::size_t f = 0; f < bins_; ++f)
      for (std::size_t c = 0; c < count; ++c) out(t, f, c) = (*this)(t, f, c);
  return out;
}

std::vector<double> HannWindow(std::size_t len) {
  std::vector<double> w(len);
  for (std::size_t n = 0; n < len; ++n)
    w[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(n) /
                                static_cast<double>(len));
  return w;
}

std::vector<double> SynthesisWindow(const StftConfig &config) {
  config.Validate();
  const auto w = HannWindow(config.window_len);
  // Overlap sum of w^2 is periodic in `shift`.
  std::vector<double> overlap(config.shift, 0.0);
  for (std::size_t n = 0; n < w.size(); ++n) overlap[n % config.shift] += w[n] * w[n];
  std::vector<double> ws(w.size());
  for (std::size_t n = 0; n < w.size(); ++n) ws[n] = w[n] / overlap[n % config.shift];
  return ws;
}

std::size_t NumFrames(std::size_t num_samples, std::size_t shift) {
  return (num_samples + shift - 1) / shift;
}

SpectroTensor Stft(const AudioBuffer &audio, const StftConfig &config) {
  config.Validate();
  audio.Validate();
  if (audio.num_channels() == 0 || audio.num_samples() == 0)
    throw ValidationError("stft: empty audio");

  const std::size_t len = audio.num_samples();
  const std::size_t frames = NumFrames(len, config.shift);
  const std::size_t bins = config.num_bins();
  const auto window = HannWindow(config.window_len);

  SpectroTensor out(frames, bins, audio.num_channels());
  out.config = config;
  out.sample_rate = audio.sample_rate;
  out.num_samples = len;

  RealFft fft(config.fft_len);
  for (std::size_t c = 0; c < audio.num_channels(); ++c) {
    const auto &x = audio.channels[c];
    for (std::size_t t = 0; t < frames; ++t) {
      auto in = fft.time();
      std::fill(in.begin(), in.end(), 0.0);
      const std::size_t start = t * config.shift;
      const std::size_t stop = std::min(start + config.window_len, len);
      for (std::size_t n = start; n < stop; ++n) in[n - start] = x[n] * window[n - start];
      fft.Forward();
      auto spec = fft.freq();
      for (std::size_t f = 0; f < bins; ++f) out(t, f, c) = spec[f];
    }
  }
  return out;
}

AudioBuffer Istft(const SpectroTensor &spec) {
  const StftConfig &config = spec.config;
  config.Validate();
  if (spec.bins() != config.num_bins())
    throw ShapeError("istft: tensor has " + std::to_string(spec.bins()) + " bins, config implies " +
                     std::to_string(config.num_bins()));
  const auto synth = SynthesisWindow(config);
  const std::size_t full = spec.frames() == 0
                               ? 0
                               : (spec.frames() - 1) * config.shift + config.window_len;

  AudioBuffer out{spec.sample_rate, std::vector<std::vector<double>>(spec.channels(),
                                                                    std::vector<double>(full))};
  RealFft fft(config.fft_len);
  const double scale = 1.0 / static_cast<double>(config.fft_len);
  for (std::size_t c = 0; c < spec.channels(); ++c) {
    auto &y = out.channels[c];
    for (std::size_t t = 0; t < spec.frames(); ++t) {
      auto freq = fft.freq();
      for (std::size_t f = 0; f < spec.bins(); ++f) freq[f] = spec(t, f, c);
      fft.Inverse();
      auto time = fft.time();
      const std::size_t start = t * config.shift;
      for (std::size_t n = 0; n < config.window_len; ++n)
        y[start + n] += time[n] * scale * synth[n];
    }
    if (spec.num_samples > 0) y.resize(spec.num_samples, 0.0);
  }
  return out;
}

}  // namespace convbeam
