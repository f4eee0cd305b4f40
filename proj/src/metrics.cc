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

#include "convbeam/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "convbeam/error.h"

namespace convbeam {

namespace {

double RatioDb(double signal, double residual) {
  if (residual <= 0.0) return signal > 0.0 ? kMaxScoreDb : -kMaxScoreDb;
  if (signal <= 0.0) return -kMaxScoreDb;
  return std::clamp(10.0 * std::log10(signal / residual), -kMaxScoreDb, kMaxScoreDb);
}

void CheckPair(std::span<const double> estimate, std::span<const double> reference,
               const char *what) {
  if (estimate.size() != reference.size())
    throw ValidationError(std::string(what) + ": estimate has " + std::to_string(estimate.size()) +
                          " samples, reference " + std::to_string(reference.size()));
  if (std::all_of(reference.begin(), reference.end(), [](double v) { return v == 0.0; }))
    throw ValidationError(std::string(what) + ": reference is all zero");
}

}  // namespace

double SiSdr(std::span<const double> estimate, std::span<const double> reference) {
  CheckPair(estimate, reference, "si_sdr");
  double cross = 0.0, ref_energy = 0.0;
  for (std::size_t n = 0; n < reference.size(); ++n) {
    cross += estimate[n] * reference[n];
    ref_energy += reference[n] * reference[n];
  }
  const double alpha = cross / ref_energy;
  double target = 0.0, residual = 0.0;
  for (std::size_t n = 0; n < reference.size(); ++n) {
    const double s = alpha * reference[n];
    target += s * s;
    residual += (s - estimate[n]) * (s - estimate[n]);
  }
  return RatioDb(target, residual);
}

double SdrSimple(std::span<const double> estimate, std::span<const double> reference,
                 std::size_t taps) {
  if (taps < 1) throw ValidationError("sdr: taps must be >= 1");
  if (taps == 1) return SiSdr(estimate, reference);
  CheckPair(estimate, reference, "sdr");
  const std::size_t n = reference.size();
  const std::size_t L = std::min(taps, n);

  // Gram matrix of the delayed references r_i[k] = r[k - i]:
  //   G(i+1, j+1) = G(i, j) - r[n-1-i] r[n-1-j].
  Eigen::MatrixXd gram(L, L);
  for (std::size_t k = 0; k < L; ++k) {
    double acc = 0.0;
    for (std::size_t m = 0; m + k < n; ++m) acc += reference[m] * reference[m + k];
    gram(static_cast<Eigen::Index>(k), 0) = acc;
  }
  for (std::size_t j = 1; j < L; ++j)
    for (std::size_t i = j; i < L; ++i)
      gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          gram(static_cast<Eigen::Index>(i - 1), static_cast<Eigen::Index>(j - 1)) -
          reference[n - i] * reference[n - j];
  for (std::size_t j = 0; j < L; ++j)
    for (std::size_t i = 0; i < j; ++i)
      gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          gram(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));

  Eigen::VectorXd rhs(L);
  for (std::size_t i = 0; i < L; ++i) {
    double acc = 0.0;
    for (std::size_t k = i; k < n; ++k) acc += estimate[k] * reference[k - i];
    rhs(static_cast<Eigen::Index>(i)) = acc;
  }

  Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  const auto d = ldlt.vectorD();
  if (ldlt.info() != Eigen::Success || d.minCoeff() <= 1e-12 * d.maxCoeff())
    throw DegenerateError("sdr: singular normal equations (degenerate reference)");
  const Eigen::VectorXd coef = ldlt.solve(rhs);

  double target = 0.0, residual = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    double p = 0.0;
    const std::size_t top = std::min(L - 1, k);
    for (std::size_t i = 0; i <= top; ++i) p += coef(static_cast<Eigen::Index>(i)) * reference[k - i];
    target += p * p;
    residual += (estimate[k] - p) * (estimate[k] - p);
  }
  return RatioDb(target, residual);
}

double ScoreReport::MeanSiSdr() const {
  if (si_sdr.empty()) return 0.0;
  return std::accumulate(si_sdr.begin(), si_sdr.end(), 0.0) / static_cast<double>(si_sdr.size());
}

std::vector<double> ScoreReport::SiSdrImprovement() const {
  std::vector<double> out(si_sdr.size());
  for (std::size_t j = 0; j < out.size() && j < input_si_sdr.size(); ++j)
    out[j] = si_sdr[j] - input_si_sdr[j];
  return out;
}

std::vector<double> ScoreReport::SdrImprovement() const {
  std::vector<double> out(sdr.size());
  for (std::size_t j = 0; j < out.size() && j < input_sdr.size(); ++j) out[j] = sdr[j] - input_sdr[j];
  return out;
}

ScoreReport PitAssign(const std::vector<std::vector<double>> &estimates,
                      const std::vector<std::vector<double>> &references, std::size_t sdr_taps) {
  const std::size_t J = references.size();
  if (estimates.size() != J)
    throw ValidationError("pit: " + std::to_string(estimates.size()) + " estimates for " +
                          std::to_string(J) + " references");
  if (J == 0 || J > 4) throw ValidationError("pit: speaker count must be in [1, 4]");

  std::vector<double> table(J * J);  // table[j * J + k]: reference j vs estimate k
  for (std::size_t j = 0; j < J; ++j)
    for (std::size_t k = 0; k < J; ++k) table[j * J + k] = SiSdr(estimates[k], references[j]);

  std::vector<std::size_t> perm(J);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::size_t> best = perm;
  double best_score = -std::numeric_limits<double>::infinity();
  do {
    double score = 0.0;
    for (std::size_t j = 0; j < J; ++j) score += table[j * J + perm[j]];
    if (score > best_score) {
      best_score = score;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  ScoreReport report;
  report.permutation = best;
  for (std::size_t j = 0; j < J; ++j) {
    report.si_sdr.push_back(table[j * J + best[j]]);
    report.sdr.push_back(SdrSimple(estimates[best[j]], references[j], sdr_taps));
  }
  return report;
}

ScoreReport ScoreSeparation(const std::vector<std::vector<double>> &estimates,
                            const std::vector<std::vector<double>> &references,
                            std::span<const double> mixture, std::size_t sdr_taps) {
  ScoreReport report = PitAssign(estimates, references, sdr_taps);
  for (const auto &ref : references) {
    report.input_si_sdr.push_back(SiSdr(mixture, ref));
    report.input_sdr.push_back(SdrSimple(mixture, ref, sdr_taps));
  }
  return report;
}

std::vector<std::vector<double>> TrimCommon(const std::vector<std::vector<double>> &signals,
                                            std::size_t edge) {
  std::size_t len = std::numeric_limits<std::size_t>::max();
  for (const auto &s : signals) len = std::min(len, s.size());
  if (signals.empty() || len <= 2 * edge)
    throw ValidationError("trim: signals shorter than two edge windows");
  std::vector<std::vector<double>> out;
  for (const auto &s : signals)
    out.emplace_back(s.begin() + static_cast<std::ptrdiff_t>(edge),
                     s.begin() + static_cast<std::ptrdiff_t>(len - edge));
  return out;
}

std::string FormatReportTsv(const ScoreReport &report) {
  std::string out;
  const auto si_imp = report.SiSdrImprovement();
  const auto sdr_imp = report.SdrImprovement();
  for (std::size_t j = 0; j < report.si_sdr.size(); ++j) {
    const std::size_t spk = j + 1;
    out += fmt::format("{}\tsi_sdr\t{:.4f}\n", spk, report.si_sdr[j]);
    out += fmt::format("{}\tsdr\t{:.4f}\n", spk, report.sdr[j]);
    if (j < report.input_si_sdr.size()) {
      out += fmt::format("{}\tinput_si_sdr\t{:.4f}\n", spk, report.input_si_sdr[j]);
      out += fmt::format("{}\tinput_sdr\t{:.4f}\n", spk, report.input_sdr[j]);
      out += fmt::format("{}\tsi_sdr_improvement\t{:.4f}\n", spk, si_imp[j]);
      out += fmt::format("{}\tsdr_improvement\t{:.4f}\n", spk, sdr_imp[j]);
    }
  }
  return out;
}

std::string FormatReportTable(const ScoreReport &report) {
  std::string out = "permutation:";
  for (auto k : report.permutation) out += fmt::format(" {}", k + 1);
  out += "\n";
  out += fmt::format("{:<8} {:>10} {:>10} {:>10} {:>10} {:>6} {:>6}\n", "speaker", "SI-SDR",
                     "SDR", "in SI-SDR", "in SDR", "PESQ", "STOI");
  for (std::size_t j = 0; j < report.si_sdr.size(); ++j) {
    const bool has_input = j < report.input_si_sdr.size();
    out += fmt::format("{:<8} {:>10.2f} {:>10.2f} {:>10} {:>10} {:>6} {:>6}\n", j + 1,
                       report.si_sdr[j], report.sdr[j],
                       has_input ? fmt::format("{:.2f}", report.input_si_sdr[j]) : "-",
                       has_input ? fmt::format("{:.2f}", report.input_sdr[j]) : "-", "n/a", "n/a");
  }
  return out;
}

}  // namespace convbeam
