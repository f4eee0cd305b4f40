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

#ifndef CONVBEAM_SRC_FFT_H_
#define CONVBEAM_SRC_FFT_H_

#include <fftw3.h>

#include <cstddef>
#include <span>
#include <vector>

#include "convbeam/cxla.h"

namespace convbeam {

// Owns an FFTW real<->complex plan pair and the buffers they run on.
// Plans are always executed on their own buffers, which keeps results
// bit-identical from run to run. Not thread-safe (FFTW planning is global).
class RealFft {
 public:
  explicit RealFft(std::size_t n);
  ~RealFft();
  RealFft(const RealFft &) = delete;
  RealFft &operator=(const RealFft &) = delete;

  std::size_t size() const { return n_; }
  std::span<double> time() { return {time_, n_}; }
  std::span<Complex> freq() { return {reinterpret_cast<Complex *>(freq_), n_ / 2 + 1}; }

  // time -> freq
  void Forward();
  // freq -> time, unnormalized (scaled by n); clobbers freq.
  void Inverse();

 private:
  std::size_t n_;
  double *time_;
  fftw_complex *freq_;
  fftw_plan forward_;
  fftw_plan inverse_;
};

// Linear convolution of a and b via FFT, truncated to out_len samples.
std::vector<double> FftConvolve(std::span<const double> a, std::span<const double> b,
                                std::size_t out_len);

}  // namespace convbeam

#endif  // CONVBEAM_SRC_FFT_H_
