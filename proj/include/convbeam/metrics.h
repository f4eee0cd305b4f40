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

#ifndef CONVBEAM_METRICS_H_
#define CONVBEAM_METRICS_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace convbeam {

// Scores are clamped to [-100, 100] dB so exact matches and orthogonal
// estimates stay finite.
inline constexpr double kMaxScoreDb = 100.0;

// Scale-invariant SDR in dB. Throws ValidationError on a zero reference or
// length mismatch.
double SiSdr(std::span<const double> estimate, std::span<const double> reference);

// SDR after least-squares projection of the estimate onto the reference
// delayed by 0 .. taps-1 samples. taps == 1 equals SiSdr.
double SdrSimple(std::span<const double> estimate, std::span<const double> reference,
                 std::size_t taps);

inline constexpr std::size_t kDefaultSdrTaps = 512;

struct ScoreReport {
  // permutation[j] = index of the estimate assigned to reference j.
  std::vector<std::size_t> permutation;
  std::vector<double> si_sdr;
  std::vector<double> sdr;
  // Unprocessed scores (reference-channel mixture vs each reference).
  std::vector<double> input_si_sdr;
  std::vector<double> input_sdr;

  double MeanSiSdr() const;
  std::vector<double> SiSdrImprovement() const;
  std::vector<double> SdrImprovement() const;
};

// Exhaustive search over all J! assignments (J <= 4) maximizing mean SI-SDR.
// Only the permutation and the scores under it are filled in.
ScoreReport PitAssign(const std::vector<std::vector<double>> &estimates,
                      const std::vector<std::vector<double>> &references,
                      std::size_t sdr_taps = kDefaultSdrTaps);

// PitAssign plus the unprocessed baseline from `mixture` (reference channel).
ScoreReport ScoreSeparation(const std::vector<std::vector<double>> &estimates,
                            const std::vector<std::vector<double>> &references,
                            std::span<const double> mixture,
                            std::size_t sdr_taps = kDefaultSdrTaps);

// Drops `edge` samples from both ends after cutting every signal to the
// shortest common length.
std::vector<std::vector<double>> TrimCommon(const std::vector<std::vector<double>> &signals,
                                            std::size_t edge);

// "speaker<TAB>metric<TAB>value_dB" records.
std::string FormatReportTsv(const ScoreReport &report);
// Human-readable table.
std::string FormatReportTable(const ScoreReport &report);

}  // namespace convbeam

#endif  // CONVBEAM_METRICS_H_
