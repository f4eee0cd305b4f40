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

#include "fft.h"

#include <algorithm>
#include <new>

namespace convbeam {

RealFft::RealFft(std::size_t n) : n_(n) {
  time_ = fftw_alloc_real(n);
  freq_ = fftw_alloc_complex(n / 2 + 1);
  if (time_ == nullptr || freq_ == nullptr) throw std::bad_alloc();
  const int len = static_cast<int>(n);
  forward_ = fftw_plan_dft_r2c_1d(len, time_, freq_, FFTW_ESTIMATE);
  inverse_ = fftw_plan_dft_c2r_1d(len, freq_, time_, FFTW_ESTIMATE);
}

RealFft::~RealFft() {
  fftw_destroy_plan(forward_);
  fftw_destroy_plan(inverse_);
  fftw_free(time_);
  fftw_free(freq_);
}

void RealFft::Forward() { fftw_execute(forward_); }

void RealFft::Inverse() { fftw_execute(inverse_); }

std::vector<double> FftConvolve(std::span<const double> a, std::span<const double> b,
                                std::size_t out_len) {
  std::vector<double> out(out_len, 0.0);
  if (a.empty() || b.empty() || out_len == 0) return out;
  const std::size_t full = a.size() + b.size() - 1;
  std::size_t n = 1;
  while (n < full) n <<= 1;

  RealFft fft(n);
  auto time = fft.time();
  std::fill(time.begin(), time.end(), 0.0);
  std::copy(b.begin(), b.end(), time.begin());
  fft.Forward();
  const std::vector<Complex> fb(fft.freq().begin(), fft.freq().end());

  std::fill(time.begin(), time.end(), 0.0);
  std::copy(a.begin(), a.end(), time.begin());
  fft.Forward();
  auto fa = fft.freq();
  for (std::size_t k = 0; k < fa.size(); ++k) fa[k] *= fb[k];
  fft.Inverse();
  const double scale = 1.0 / static_cast<double>(n);
  const std::size_t keep = std::min(out_len, full);
  for (std::size_t i = 0; i < keep; ++i) out[i] = fft.time()[i] * scale;
  return out;
}

}  // namespace convbeam
