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

#include "convbeam/scene.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "convbeam/error.h"
#include "fft.h"

namespace convbeam {

namespace {

constexpr double kGrid = 16777216.0;  // 2^24
constexpr double kTargetPeak = 0.5;

double Distance(const Position &a, const Position &b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

bool InsideRoom(const Position &p, const Position &room) {
  for (int k = 0; k < 3; ++k)
    if (!(p[k] >= 0.0 && p[k] <= room[k])) return false;
  return true;
}

std::mt19937_64 Rng(std::uint64_t seed, std::uint64_t tag, std::uint64_t a = 0,
                    std::uint64_t b = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(a),
                    static_cast<std::uint32_t>(b)};
  return std::mt19937_64(seq);
}

double Quantize(double x) { return std::nearbyint(x * kGrid) / kGrid; }

std::string FormatPosition(const Position &p) { return fmt::format("{} {} {}", p[0], p[1], p[2]); }

Position ParsePosition(const std::string &text, const std::string &key) {
  std::istringstream is(text);
  Position p{};
  for (auto &v : p)
    if (!(is >> v)) throw ParseError("scene manifest: bad position for " + key + ": '" + text + "'");
  std::string rest;
  if (is >> rest) throw ParseError("scene manifest: trailing data in " + key);
  return p;
}

double ParseDouble(const std::string &text, const std::string &key) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception &) {
    throw ParseError("scene manifest: bad number for " + key + ": '" + text + "'");
  }
}

std::uint64_t ParseUnsigned(const std::string &text, const std::string &key) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(text, &used);
    if (used != text.size() || text.find('-') != std::string::npos)
      throw std::invalid_argument(text);
    return v;
  } catch (const std::exception &) {
    throw ParseError("scene manifest: bad integer for " + key + ": '" + text + "'");
  }
}

}  // namespace

void SceneSpec::Validate() const {
  if (speakers < 1) throw ValidationError("scene: need at least one speaker");
  if (channels < 1) throw ValidationError("scene: need at least one channel");
  if (!(sample_rate > 0.0)) throw ValidationError("scene: sample rate must be positive");
  if (!(t60 >= 0.0)) throw ValidationError("scene: t60 must be >= 0");
  if (!(early_ms >= 0.0)) throw ValidationError("scene: early_ms must be >= 0");
  if (std::isnan(noise_snr)) throw ValidationError("scene: noise_snr is NaN");
  for (double d : room)
    if (!(d > 0.0)) throw ValidationError("scene: room dimensions must be positive");
  if (sources.size() != speakers)
    throw ValidationError("scene: " + std::to_string(sources.size()) + " source positions for " +
                          std::to_string(speakers) + " speakers");
  if (mics.size() != channels)
    throw ValidationError("scene: " + std::to_string(mics.size()) + " mic positions for " +
                          std::to_string(channels) + " channels");
  for (std::size_t j = 0; j < sources.size(); ++j)
    if (!InsideRoom(sources[j], room))
      throw ValidationError("scene: source " + std::to_string(j + 1) + " is outside the room");
  for (std::size_t c = 0; c < mics.size(); ++c)
    if (!InsideRoom(mics[c], room))
      throw ValidationError("scene: mic " + std::to_string(c + 1) + " is outside the room");
}

RoomResponse SynthRir(const SceneSpec &spec, std::size_t speaker, std::size_t channel) {
  const double fs = spec.sample_rate;
  const double d = Distance(spec.sources.at(speaker), spec.mics.at(channel));
  const double delay = d / kSpeedOfSound * fs;
  const double amp = 1.0 / std::max(d, 0.1);

  const std::size_t reflection_end =
      static_cast<std::size_t>(std::ceil(delay + kReflectionWindowMs * 1e-3 * fs));
  const std::size_t tail_end =
      spec.t60 > 0.0 ? reflection_end + static_cast<std::size_t>(std::ceil(1.5 * spec.t60 * fs))
                     : 0;
  const std::size_t len =
      std::max(static_cast<std::size_t>(std::ceil(delay)) + 17, tail_end + 1);

  RoomResponse rir;
  rir.taps.assign(len, 0.0);
  rir.direct_delay = delay;
  rir.early_end = std::min(
      len, static_cast<std::size_t>(std::ceil(delay + spec.early_ms * 1e-3 * fs)));

  // Direct path: 33-tap Hann-windowed sinc fractional delay.
  const auto centre = static_cast<long>(std::lround(delay));
  for (long n = centre - 16; n <= centre + 16; ++n) {
    if (n < 0 || static_cast<std::size_t>(n) >= len) continue;
    const double x = static_cast<double>(n) - delay;
    const double win = 0.5 + 0.5 * std::cos(std::numbers::pi * x / 17.0);
    const double sinc = x == 0.0 ? 1.0 : std::sin(std::numbers::pi * x) / (std::numbers::pi * x);
    rir.taps[static_cast<std::size_t>(n)] += amp * win * sinc;
  }
  if (spec.t60 <= 0.0) return rir;

  // Reverberant energy follows a diffuse-field model: it equals the direct
  // energy at the critical distance 0.057 sqrt(V / T60), and decays with
  // amplitude rate ln(1e-3) / T60 from the direct arrival. The factor
  // (tau / (tau + d / c))^2 is the build-up of image-source energy right
  // after the direct sound.
  const double volume = spec.room[0] * spec.room[1] * spec.room[2];
  const double critical = 0.057 * std::sqrt(volume / spec.t60);
  const double reverb_energy = 1.0 / (critical * critical);
  const double rate = std::log(1e-3) / (spec.t60 * fs);  // per sample, amplitude
  const double density0 = reverb_energy * (-2.0 * rate);
  auto density = [&](double n) {
    const double tau = n - delay;
    const double build = tau / (tau + delay);
    return density0 * std::exp(2.0 * rate * tau) * build * build;
  };

  auto rng = Rng(spec.seed, 0x72697200, speaker, channel);
  // Reflections arrive as a Poisson process with the image-source density
  // 4 pi c^3 tau^2 / V: a few isolated arrivals at first, denser later.
  // Each carries the envelope energy of its neighbourhood.
  const double k = 4.0 * std::numbers::pi * std::pow(kSpeedOfSound / fs, 3.0) / volume;
  std::exponential_distribution<double> unit(1.0);
  std::bernoulli_distribution sign(0.5);
  for (double count = unit(rng);; count += unit(rng)) {
    const double tau = std::cbrt(3.0 * count / k);
    const double n = delay + tau;
    if (n >= static_cast<double>(reflection_end)) break;
    const auto idx = static_cast<std::size_t>(std::lround(n));
    if (idx >= len) break;
    const double a = std::sqrt(density(n) / (k * tau * tau));
    rir.taps[idx] += sign(rng) ? a : -a;
  }
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::size_t n = reflection_end; n < len; ++n)
    rir.taps[n] += gauss(rng) * std::sqrt(density(static_cast<double>(n)));
  return rir;
}

SteeringVectors EarlyTransfer(const std::vector<RoomResponse> &rirs, std::size_t fft_len) {
  const std::size_t bins = fft_len / 2 + 1;
  const std::size_t C = rirs.size();
  SteeringVectors out(bins, CVector(C));
  for (std::size_t f = 0; f < bins; ++f) {
    const double omega = -2.0 * std::numbers::pi * static_cast<double>(f) /
                         static_cast<double>(fft_len);
    for (std::size_t c = 0; c < C; ++c) {
      Complex acc = 0.0;
      for (std::size_t n = 0; n < rirs[c].early_end; ++n)
        if (rirs[c].taps[n] != 0.0)
          acc += rirs[c].taps[n] * std::polar(1.0, omega * static_cast<double>(n));
      out[f][c] = acc;
    }
    const double norm = Norm(out[f]);
    if (norm == 0.0) {
      std::fill(out[f].begin(), out[f].end(), Complex(0.0));
      out[f][0] = 1.0;
      continue;
    }
    const double ref_mag = std::abs(out[f][0]);
    const Complex phase = ref_mag > 0.0 ? std::conj(out[f][0]) / ref_mag : Complex(1.0);
    for (auto &z : out[f]) z = z * phase / norm;
  }
  return out;
}

SceneTruth Render(const SceneSpec &spec, const std::vector<std::vector<double>> &dry,
                  std::size_t fft_len) {
  spec.Validate();
  if (dry.size() != spec.speakers)
    throw ValidationError("render: " + std::to_string(dry.size()) + " dry sources for " +
                          std::to_string(spec.speakers) + " speakers");
  std::size_t len = 0;
  for (const auto &s : dry) {
    if (s.empty()) throw ValidationError("render: empty dry source");
    len = std::max(len, s.size());
  }
  const std::size_t J = spec.speakers, C = spec.channels;
  const double fs = spec.sample_rate;

  SceneTruth truth;
  truth.rirs.resize(J);
  std::vector<std::vector<std::vector<double>>> early(J), late(J);
  for (std::size_t j = 0; j < J; ++j) {
    truth.dry.push_back(AudioBuffer{fs, {dry[j]}});
    for (std::size_t c = 0; c < C; ++c) {
      RoomResponse rir = SynthRir(spec, j, c);
      std::span<const double> taps(rir.taps);
      early[j].push_back(FftConvolve(dry[j], taps.first(rir.early_end), len));
      if (rir.early_end < rir.taps.size())
        late[j].push_back(FftConvolve(dry[j], taps.subspan(rir.early_end), len + rir.early_end));
      else
        late[j].push_back(std::vector<double>(len + rir.early_end, 0.0));
      // The late part starts at early_end: shift it into place.
      auto &l = late[j].back();
      l.insert(l.begin(), rir.early_end, 0.0);
      l.resize(len);
      truth.rirs[j].push_back(std::move(rir));
    }
    truth.steering.push_back(EarlyTransfer(truth.rirs[j], fft_len));
  }

  // White noise relative to the reverberant speech power at channel 1.
  std::vector<std::vector<double>> noise(C, std::vector<double>(len, 0.0));
  if (std::isfinite(spec.noise_snr)) {
    double speech_power = 0.0;
    for (std::size_t n = 0; n < len; ++n) {
      double s = 0.0;
      for (std::size_t j = 0; j < J; ++j) s += early[j][0][n] + late[j][0][n];
      speech_power += s * s;
    }
    speech_power /= static_cast<double>(len);
    const double sigma = std::sqrt(speech_power * std::pow(10.0, -spec.noise_snr / 10.0));
    for (std::size_t c = 0; c < C; ++c) {
      auto rng = Rng(spec.seed, 0x6e6f6973, c);
      std::normal_distribution<double> gauss(0.0, 1.0);
      for (auto &v : noise[c]) v = sigma * gauss(rng);
    }
  }

  // One global gain so that no component or mixture sample exceeds kTargetPeak.
  double peak = 0.0;
  for (std::size_t c = 0; c < C; ++c)
    for (std::size_t n = 0; n < len; ++n) {
      double mix = noise[c][n];
      peak = std::max(peak, std::abs(noise[c][n]));
      for (std::size_t j = 0; j < J; ++j) {
        mix += early[j][c][n] + late[j][c][n];
        peak = std::max({peak, std::abs(early[j][c][n]), std::abs(late[j][c][n])});
      }
      peak = std::max(peak, std::abs(mix));
    }
  truth.gain = peak > 0.0 ? kTargetPeak / peak : 1.0;

  truth.mixture = AudioBuffer{fs, std::vector<std::vector<double>>(C, std::vector<double>(len, 0.0))};
  truth.noise = AudioBuffer{fs, {}};
  for (std::size_t c = 0; c < C; ++c) {
    for (auto &v : noise[c]) v = Quantize(v * truth.gain);
    truth.noise.channels.push_back(noise[c]);
  }
  for (std::size_t j = 0; j < J; ++j) {
    AudioBuffer e{fs, {}}, l{fs, {}};
    for (std::size_t c = 0; c < C; ++c) {
      for (auto &v : early[j][c]) v = Quantize(v * truth.gain);
      for (auto &v : late[j][c]) v = Quantize(v * truth.gain);
      e.channels.push_back(std::move(early[j][c]));
      l.channels.push_back(std::move(late[j][c]));
    }
    truth.early.push_back(std::move(e));
    truth.late.push_back(std::move(l));
  }
  for (std::size_t c = 0; c < C; ++c)
    for (std::size_t n = 0; n < len; ++n) {
      double mix = 0.0;
      for (std::size_t j = 0; j < J; ++j)
        mix += truth.early[j].channels[c][n] + truth.late[j].channels[c][n];
      truth.mixture.channels[c][n] = mix + truth.noise.channels[c][n];
    }
  return truth;
}

std::vector<double> SpeechLikeSource(std::uint64_t seed, std::size_t num_samples,
                                     double sample_rate) {
  std::vector<double> out(num_samples, 0.0);
  auto rng = Rng(seed, 0x73706368);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  auto range = [&](double lo, double hi) { return lo + (hi - lo) * uni(rng); };
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double nyquist_cap = std::min(4000.0, 0.45 * sample_rate);
  const auto samples = [&](double sec) { return static_cast<std::size_t>(sec * sample_rate); };

  auto ramp = [&](std::size_t i, std::size_t n) {
    const double r = std::min(samples(0.02), n / 2);
    const double x = static_cast<double>(std::min(i, n - 1 - i));
    if (r <= 0.0 || x >= r) return 1.0;
    const double s = std::sin(0.5 * std::numbers::pi * x / r);
    return s * s;
  };

  std::size_t pos = samples(range(0.0, 0.3));
  while (pos < num_samples) {
    if (uni(rng) < 0.15) {  // phrase break
      pos += samples(range(0.3, 0.8));
      continue;
    }
    // Optional fricative onset.
    if (uni(rng) < 0.35) {
      const std::size_t n = samples(range(0.05, 0.12));
      const double level = range(0.15, 0.35);
      double prev = 0.0, prev2 = 0.0;
      for (std::size_t i = 0; i < n && pos + i < num_samples; ++i) {
        const double w = gauss(rng);
        // Second difference pushes energy towards high frequencies.
        out[pos + i] += level * ramp(i, n) * (w - 2.0 * prev + prev2) * 0.5;
        prev2 = prev;
        prev = w;
      }
      pos += n;
    }
    // Voiced syllable with gliding pitch and random formants.
    const std::size_t n = samples(range(0.1, 0.35));
    const double f0_start = range(90.0, 220.0);
    const double f0_end = f0_start * range(0.8, 1.25);
    const std::array<double, 3> formant = {range(300.0, 850.0), range(900.0, 2400.0),
                                           range(2400.0, 3200.0)};
    const std::array<double, 3> bandwidth = {80.0, 120.0, 200.0};
    const std::array<double, 3> gain = {1.0, 0.6, 0.3};
    const double level = range(0.5, 1.0);
    double phase = 0.0;
    // Jitter: a random walk in f0 renewed every pitch period; shimmer: a
    // per-period amplitude factor; aspiration: broadband noise under the
    // harmonics.
    double jitter = 0.0, shimmer = 1.0, cycle = 0.0;
    for (std::size_t i = 0; i < n && pos + i < num_samples; ++i) {
      const double f0 = (f0_start + (f0_end - f0_start) * static_cast<double>(i) / static_cast<double>(n)) *
                        (1.0 + jitter);
      phase += 2.0 * std::numbers::pi * f0 / sample_rate;
      cycle += f0 / sample_rate;
      if (cycle >= 1.0) {
        cycle -= 1.0;
        jitter = std::clamp(0.9 * jitter + 0.01 * gauss(rng), -0.05, 0.05);
        shimmer = 1.0 + 0.1 * gauss(rng);
      }
      double v = 0.0;
      for (int h = 1; h * f0 < nyquist_cap; ++h) {
        const double fh = h * f0;
        double a = 0.05;
        for (int k = 0; k < 3; ++k) {
          const double x = (fh - formant[k]) / bandwidth[k];
          a += gain[k] / (1.0 + x * x);
        }
        v += a * std::sin(h * phase);
      }
      out[pos + i] += level * ramp(i, n) * (shimmer * v + 0.1 * gauss(rng));
    }
    pos += n + samples(range(0.02, 0.15));
  }

  double energy = 0.0;
  for (double v : out) energy += v * v;
  if (energy > 0.0) {
    const double scale = 0.1 / std::sqrt(energy / static_cast<double>(num_samples));
    for (auto &v : out) v *= scale;
  }
  // Recording noise floor 40 dB under the speech level.
  for (auto &v : out) v += 1e-3 * gauss(rng);
  return out;
}

SceneSpec RandomSceneSpec(std::size_t speakers, std::size_t channels, double t60,
                          double noise_snr, std::uint64_t seed) {
  SceneSpec spec;
  spec.speakers = speakers;
  spec.channels = channels;
  spec.t60 = t60;
  spec.noise_snr = noise_snr;
  spec.seed = seed;
  auto rng = Rng(seed, 0x67656f6d);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  auto range = [&](double lo, double hi) { return lo + (hi - lo) * uni(rng); };
  spec.room = {range(5.0, 10.0), range(5.0, 10.0), range(3.0, 4.0)};
  const Position centre = {range(2.5, spec.room[0] - 2.5), range(2.5, spec.room[1] - 2.5),
                           range(1.0, 1.5)};
  const double radius = range(0.075, 0.125);
  for (std::size_t c = 0; c < channels; ++c) {
    const double a = 2.0 * std::numbers::pi * static_cast<double>(c) / static_cast<double>(channels);
    spec.mics.push_back({centre[0] + radius * std::cos(a), centre[1] + radius * std::sin(a),
                         centre[2]});
  }
  std::vector<double> azimuths;
  constexpr double kMinSeparation = 40.0 * std::numbers::pi / 180.0;
  while (azimuths.size() < speakers) {
    const double az = 2.0 * std::numbers::pi * uni(rng);
    bool ok = true;
    for (double other : azimuths) {
      double diff = std::abs(az - other);
      diff = std::min(diff, 2.0 * std::numbers::pi - diff);
      if (diff < kMinSeparation) ok = false;
    }
    if (!ok) continue;
    azimuths.push_back(az);
    const double dist = 1.0 + uni(rng);
    const double height = 1.4 + 0.4 * uni(rng);
    spec.sources.push_back({centre[0] + dist * std::cos(az), centre[1] + dist * std::sin(az), height});
  }
  return spec;
}

std::string RenderSceneManifest(const SceneSpec &spec) {
  std::string out;
  out += "[scene]\n";
  out += fmt::format("speakers = {}\n", spec.speakers);
  out += fmt::format("channels = {}\n", spec.channels);
  out += fmt::format("sample_rate = {}\n", spec.sample_rate);
  out += fmt::format("noise_snr = {}\n", spec.noise_snr);
  out += fmt::format("early_ms = {}\n", spec.early_ms);
  out += fmt::format("seed = {}\n", spec.seed);
  out += "\n[room]\n";
  out += fmt::format("dimensions = {}\n", FormatPosition(spec.room));
  out += fmt::format("t60 = {}\n", spec.t60);
  for (std::size_t j = 0; j < spec.sources.size(); ++j)
    out += fmt::format("\n[source{}]\nposition = {}\n", j + 1, FormatPosition(spec.sources[j]));
  for (std::size_t c = 0; c < spec.mics.size(); ++c)
    out += fmt::format("\n[mic{}]\nposition = {}\n", c + 1, FormatPosition(spec.mics[c]));
  return out;
}

SceneSpec ParseSceneManifest(const std::string &text) {
  boost::property_tree::ptree tree;
  std::istringstream is(text);
  try {
    boost::property_tree::ini_parser::read_ini(is, tree);
  } catch (const boost::property_tree::ini_parser_error &e) {
    throw ParseError(std::string("scene manifest: ") + e.message() + " at line " +
                     std::to_string(e.line()));
  }

  SceneSpec spec;
  std::map<std::size_t, Position> sources, mics;
  bool have_scene = false, have_room = false;
  for (const auto &[section, body] : tree) {
    auto keys = [&](std::set<std::string> allowed) {
      for (const auto &[key, _] : body)
        if (!allowed.count(key))
          throw ParseError("scene manifest: unknown key '" + key + "' in [" + section + "]");
    };
    auto get = [&](const std::string &key) {
      auto v = body.get_optional<std::string>(key);
      if (!v) throw ParseError("scene manifest: missing " + section + "." + key);
      return *v;
    };
    if (section == "scene") {
      keys({"speakers", "channels", "sample_rate", "noise_snr", "early_ms", "seed"});
      spec.speakers = ParseUnsigned(get("speakers"), "speakers");
      spec.channels = ParseUnsigned(get("channels"), "channels");
      spec.sample_rate = ParseDouble(get("sample_rate"), "sample_rate");
      spec.noise_snr = ParseDouble(get("noise_snr"), "noise_snr");
      spec.early_ms = ParseDouble(get("early_ms"), "early_ms");
      spec.seed = ParseUnsigned(get("seed"), "seed");
      have_scene = true;
    } else if (section == "room") {
      keys({"dimensions", "t60"});
      spec.room = ParsePosition(get("dimensions"), "room.dimensions");
      spec.t60 = ParseDouble(get("t60"), "t60");
      have_room = true;
    } else if (section.rfind("source", 0) == 0 || section.rfind("mic", 0) == 0) {
      const bool is_source = section[0] == 's';
      const std::string index = section.substr(is_source ? 6 : 3);
      const auto k = ParseUnsigned(index, section);
      if (k == 0) throw ParseError("scene manifest: section indices start at 1");
      keys({"position"});
      (is_source ? sources : mics)[k] = ParsePosition(get("position"), section);
    } else {
      throw ParseError("scene manifest: unknown section [" + section + "]");
    }
  }
  if (!have_scene || !have_room) throw ParseError("scene manifest: missing [scene] or [room]");
  for (std::size_t j = 1; j <= sources.size(); ++j) {
    if (!sources.count(j)) throw ParseError("scene manifest: missing [source" + std::to_string(j) + "]");
    spec.sources.push_back(sources[j]);
  }
  for (std::size_t c = 1; c <= mics.size(); ++c) {
    if (!mics.count(c)) throw ParseError("scene manifest: missing [mic" + std::to_string(c) + "]");
    spec.mics.push_back(mics[c]);
  }
  spec.Validate();
  return spec;
}

SceneSpec LoadSceneManifest(const std::filesystem::path &path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return ParseSceneManifest(ss.str());
}

}  // namespace convbeam
