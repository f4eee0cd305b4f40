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

#include "convbeam/commands.h"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include <fftw3.h>
#include <fmt/format.h>
#include <openssl/evp.h>

#include "convbeam/error.h"
#include "convbeam/mask.h"
#include "convbeam/pipeline.h"

namespace convbeam {

namespace fs = std::filesystem;

namespace {

void WriteText(const fs::path &path, const std::string &text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os << text;
  if (!os) throw IoError("failed writing " + path.string());
}

std::vector<std::uint8_t> ReadBytes(const fs::path &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

void MakeDir(const fs::path &dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

void Put32(std::vector<std::uint8_t> &out, std::uint32_t v) {
  for (int k = 0; k < 4; ++k) out.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
}
void Put64(std::vector<std::uint8_t> &out, std::uint64_t v) {
  for (int k = 0; k < 8; ++k) out.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
}

std::uint64_t Get(const std::vector<std::uint8_t> &bytes, std::size_t &pos, int width,
                  const std::string &name) {
  if (bytes.size() - pos < static_cast<std::size_t>(width))
    throw ParseError(name + ": truncated steering file");
  std::uint64_t v = 0;
  for (int k = 0; k < width; ++k) v |= static_cast<std::uint64_t>(bytes[pos + k]) << (8 * k);
  pos += width;
  return v;
}

std::uint32_t CheckedU32(std::size_t v, const std::string &what) {
  if (v > 0xffffffffULL) throw ValidationError(what + " does not fit in 32 bits");
  return static_cast<std::uint32_t>(v);
}

// Mono input at the expected rate.
std::vector<double> ReadMono(const fs::path &path, double sample_rate) {
  AudioBuffer a = ReadWav(path);
  if (a.num_channels() != 1)
    throw ValidationError(path.string() + ": expected mono, got " +
                          std::to_string(a.num_channels()) + " channels");
  if (a.sample_rate != sample_rate)
    throw ValidationError(fmt::format("{}: sample rate {} differs from {}", path.string(),
                                      a.sample_rate, sample_rate));
  return std::move(a.channels[0]);
}

std::string VersionSection() {
  std::string out = "[versions]\n";
  out += fmt::format("convbeam = {}\n", kVersion);
  out += fmt::format("fftw = {}\n", fftw_version);
  out += fmt::format("compiler = {}\n", __VERSION__);
  return out;
}

// Config echo with every section moved under "config.".
std::string ConfigEcho(const EnhanceConfig &config) {
  std::istringstream is(RenderEnhanceConfig(config));
  std::string out, line;
  while (std::getline(is, line)) {
    if (!line.empty() && line[0] == '[') line = "[config." + line.substr(1);
    out += line + "\n";
  }
  return out;
}

std::vector<MaskSet> LoadMaskDir(const fs::path &dir) {
  std::vector<MaskSet> out;
  for (std::size_t j = 1;; ++j) {
    const std::array<MaskRole, 3> roles = {MaskRole::kWpe, MaskRole::kBfTarget, MaskRole::kBfNoise};
    std::size_t present = 0;
    for (MaskRole r : roles) present += fs::exists(dir / MaskFileName(r, j));
    if (present == 0) break;
    if (present != roles.size())
      throw IoError(fmt::format("mask directory {}: speaker {} needs wpe, bf_target and "
                                "bf_noise files",
                                dir.string(), j));
    MaskSet set;
    for (MaskRole r : roles) {
      const fs::path p = dir / MaskFileName(r, j);
      MaskTensor m = LoadMask(p);
      if (m.role() != r || m.speaker() != j - 1)
        throw ValidationError(p.string() + ": header role/speaker does not match the file name");
      (r == MaskRole::kWpe ? set.wpe : r == MaskRole::kBfTarget ? set.target : set.noise) =
          std::move(m);
    }
    out.push_back(std::move(set));
  }
  if (out.empty()) throw IoError("mask directory " + dir.string() + " holds no mask files");
  return out;
}

std::vector<fs::path> TruthFiles(const fs::path &dir, std::size_t speakers) {
  std::vector<fs::path> out = {dir / kSceneManifestName, dir / kNoiseName};
  for (std::size_t j = 0; j < speakers; ++j) {
    out.push_back(dir / EarlyName(j));
    out.push_back(dir / LateName(j));
  }
  return out;
}

}  // namespace

std::string EarlyName(std::size_t speaker) { return fmt::format("early_{}.wav", speaker + 1); }
std::string LateName(std::size_t speaker) { return fmt::format("late_{}.wav", speaker + 1); }
std::string MaskFileName(MaskRole role, std::size_t speaker) {
  return fmt::format("{}_{}.cbmk", MaskRoleName(role), speaker);
}

void SaveSteering(const std::vector<SteeringVectors> &v, const fs::path &path) {
  const std::size_t J = v.size();
  const std::size_t F = J ? v[0].size() : 0;
  const std::size_t C = F ? v[0][0].size() : 0;
  std::vector<std::uint8_t> out = {'C', 'B', 'S', 'V'};
  Put32(out, 1);
  Put32(out, CheckedU32(J, "speaker count"));
  Put32(out, CheckedU32(F, "bin count"));
  Put32(out, CheckedU32(C, "channel count"));
  for (const auto &speaker : v) {
    if (speaker.size() != F) throw ShapeError("steering: ragged bin count");
    for (const auto &bin : speaker) {
      if (bin.size() != C) throw ShapeError("steering: ragged channel count");
      for (const Complex &x : bin) {
        Put64(out, std::bit_cast<std::uint64_t>(x.real()));
        Put64(out, std::bit_cast<std::uint64_t>(x.imag()));
      }
    }
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os.write(reinterpret_cast<const char *>(out.data()), static_cast<std::streamsize>(out.size()));
  if (!os) throw IoError("failed writing " + path.string());
}

std::vector<SteeringVectors> LoadSteering(const fs::path &path) {
  const auto bytes = ReadBytes(path);
  const std::string name = path.string();
  if (bytes.size() < 4 || !std::equal(bytes.begin(), bytes.begin() + 4, "CBSV"))
    throw ParseError(name + ": bad magic (expected \"CBSV\")");
  std::size_t pos = 4;
  if (Get(bytes, pos, 4, name) != 1) throw ParseError(name + ": unsupported version");
  const std::size_t J = Get(bytes, pos, 4, name);
  const std::size_t F = Get(bytes, pos, 4, name);
  const std::size_t C = Get(bytes, pos, 4, name);
  if ((bytes.size() - pos) / 16 / std::max<std::size_t>(C, 1) / std::max<std::size_t>(F, 1) < J)
    throw ParseError(name + ": truncated steering file");
  std::vector<SteeringVectors> out(J, SteeringVectors(F, CVector(C)));
  for (auto &speaker : out)
    for (auto &bin : speaker)
      for (Complex &x : bin) {
        const double re = std::bit_cast<double>(Get(bytes, pos, 8, name));
        const double im = std::bit_cast<double>(Get(bytes, pos, 8, name));
        x = {re, im};
      }
  if (pos != bytes.size()) throw ParseError(name + ": trailing bytes");
  return out;
}

std::string Sha256Hex(const fs::path &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  EVP_MD_CTX *ctx = EVP_MD_CTX_new();
  if (ctx == nullptr || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
    EVP_MD_CTX_free(ctx);
    throw IoError("sha256: digest initialisation failed");
  }
  std::array<char, 1 << 16> buf;
  while (is) {
    is.read(buf.data(), buf.size());
    if (is.gcount() > 0) EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(is.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> md;
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md.data(), &len);
  EVP_MD_CTX_free(ctx);
  std::string hex;
  for (unsigned int k = 0; k < len; ++k) hex += fmt::format("{:02x}", md[k]);
  return hex;
}

SceneTruth LoadTruthDir(const fs::path &dir, SceneSpec *spec_out) {
  const SceneSpec spec = LoadSceneManifest(dir / kSceneManifestName);
  SceneTruth truth;
  truth.mixture = ReadWav(dir / kMixtureName);
  truth.noise = ReadWav(dir / kNoiseName);
  for (std::size_t j = 0; j < spec.speakers; ++j) {
    truth.early.push_back(ReadWav(dir / EarlyName(j)));
    truth.late.push_back(ReadWav(dir / LateName(j)));
  }
  auto check = [&](const AudioBuffer &a, const std::string &what) {
    if (a.num_channels() != spec.channels || a.num_samples() != truth.mixture.num_samples() ||
        a.sample_rate != spec.sample_rate)
      throw ShapeError("truth directory " + dir.string() + ": " + what +
                       " does not match the scene manifest and mixture");
  };
  check(truth.mixture, kMixtureName);
  check(truth.noise, kNoiseName);
  for (std::size_t j = 0; j < spec.speakers; ++j) {
    check(truth.early[j], EarlyName(j));
    check(truth.late[j], LateName(j));
  }
  if (spec_out) *spec_out = spec;
  return truth;
}

void WriteScene(const SceneSpec &spec, const SceneTruth &truth, const fs::path &out_dir,
                WavFormat format) {
  MakeDir(out_dir);
  WriteText(out_dir / kSceneManifestName, RenderSceneManifest(spec));
  if (format == WavFormat::kPcm16) {
    // Round every component to the 16-bit grid first and rebuild the mixture
    // from the rounded parts, so the files still sum exactly.
    SceneTruth grid = truth;
    auto round = [](AudioBuffer &b) {
      for (auto &ch : b.channels)
        for (auto &v : ch) v = std::clamp(std::nearbyint(v * 32768.0), -32768.0, 32767.0) / 32768.0;
    };
    round(grid.noise);
    for (auto &b : grid.early) round(b);
    for (auto &b : grid.late) round(b);
    for (std::size_t c = 0; c < grid.mixture.num_channels(); ++c)
      for (std::size_t n = 0; n < grid.mixture.num_samples(); ++n) {
        double sum = grid.noise.channels[c][n];
        for (std::size_t j = 0; j < grid.early.size(); ++j)
          sum += grid.early[j].channels[c][n] + grid.late[j].channels[c][n];
        grid.mixture.channels[c][n] = sum;
      }
    round(grid.mixture);
    WriteWav(out_dir / kMixtureName, grid.mixture, format);
    for (std::size_t j = 0; j < grid.early.size(); ++j) {
      WriteWav(out_dir / EarlyName(j), grid.early[j], format);
      WriteWav(out_dir / LateName(j), grid.late[j], format);
    }
    WriteWav(out_dir / kNoiseName, grid.noise, format);
  } else {
    WriteWav(out_dir / kMixtureName, truth.mixture, format);
    for (std::size_t j = 0; j < truth.early.size(); ++j) {
      WriteWav(out_dir / EarlyName(j), truth.early[j], format);
      WriteWav(out_dir / LateName(j), truth.late[j], format);
    }
    WriteWav(out_dir / kNoiseName, truth.noise, format);
  }
  SaveSteering(truth.steering, out_dir / kSteeringName);
}

SceneTruth RunSimulate(const SimulateOptions &options, std::ostream *log) {
  SceneSpec spec = LoadSceneManifest(options.scene);
  if (options.seed) spec.seed = *options.seed;
  spec.Validate();
  if (options.sources.size() != spec.speakers)
    throw ValidationError(fmt::format("simulate: {} source files for {} speakers",
                                      options.sources.size(), spec.speakers));
  std::vector<std::vector<double>> dry;
  for (const auto &p : options.sources) dry.push_back(ReadMono(p, spec.sample_rate));
  SceneTruth truth = Render(spec, dry);
  WriteScene(spec, truth, options.out_dir, options.format);
  if (log)
    *log << fmt::format("simulate: {} speakers, {} channels, {} samples -> {}\n", spec.speakers,
                        spec.channels, truth.mixture.num_samples(), options.out_dir.string());
  return truth;
}

std::vector<fs::path> RunEnhance(const EnhanceOptions &options, std::ostream *log) {
  const EnhanceConfig &config = options.config;
  config.Validate();
  const AudioBuffer mixture = ReadWav(options.mixture);
  const SpectroTensor spec = AnalyzeMixture(mixture, config);

  std::vector<fs::path> inputs = {options.mixture};
  std::vector<MaskSet> masks;
  const std::uint64_t seed = options.seed;
  std::optional<std::uint64_t> scene_seed;
  if (config.mask_source == MaskSource::kOracle) {
    if (options.truth_dir.empty())
      throw ValidationError("enhance: oracle masks need a truth directory");
    SceneSpec scene;
    const SceneTruth truth = LoadTruthDir(options.truth_dir, &scene);
    if (truth.mixture.num_samples() != mixture.num_samples() ||
        truth.mixture.num_channels() < spec.channels())
      throw ShapeError("enhance: truth directory does not match the mixture");
    try {
      masks = OracleMasks(ComputeSceneSpectra(truth, config.stft, spec.channels()), spec);
    } catch (Error &e) {
      e.set_stage("oracle masks");
      throw;
    }
    scene_seed = scene.seed;
    for (auto &p : TruthFiles(options.truth_dir, scene.speakers)) inputs.push_back(p);
  } else {
    masks = LoadMaskDir(config.mask_path);
    for (std::size_t j = 0; j < masks.size(); ++j)
      for (MaskRole r : {MaskRole::kWpe, MaskRole::kBfTarget, MaskRole::kBfNoise})
        inputs.push_back(fs::path(config.mask_path) / MaskFileName(r, j + 1));
  }
  for (const auto &p : options.extra_inputs) inputs.push_back(p);

  const EnhanceResult result = EnhanceSpectra(spec, masks, config);

  MakeDir(options.out_dir);
  std::vector<fs::path> written;
  for (std::size_t j = 0; j < result.outputs.size(); ++j) {
    written.push_back(options.out_dir / fmt::format("{}_{}.wav", config.output, j + 1));
    WriteWav(written.back(), result.outputs[j]);
  }

  std::string manifest = "[run]\ncommand = enhance\n";
  manifest += fmt::format("seed = {}\n", seed);
  if (scene_seed) manifest += fmt::format("scene_seed = {}\n", *scene_seed);
  manifest += fmt::format("speakers = {}\n", result.outputs.size());
  manifest += fmt::format("channels = {}\n\n", spec.channels());
  manifest += VersionSection() + "\n";
  manifest += ConfigEcho(config) + "\n[inputs]\n";
  for (std::size_t k = 0; k < inputs.size(); ++k)
    manifest += fmt::format("input{} = {}\ninput{}_sha256 = {}\n", k + 1, inputs[k].string(), k + 1,
                            Sha256Hex(inputs[k]));
  manifest += "\n[outputs]\n";
  for (std::size_t j = 0; j < written.size(); ++j)
    manifest += fmt::format("speaker{} = {}\n", j + 1, written[j].filename().string());
  manifest += "\n[timings]\n";
  for (const auto &[stage, secs] : result.timings.entries())
    manifest += fmt::format("{} = {:.6f}\n", stage, secs);
  WriteText(options.out_dir / kRunManifestName, manifest);

  if (log) {
    *log << fmt::format("enhance: {} speakers from {} channels -> {}\n", result.outputs.size(),
                        spec.channels(), options.out_dir.string());
    for (const auto &[stage, secs] : result.timings.entries())
      *log << fmt::format("  {:<11} {:9.4f} s\n", stage, secs);
  }
  return written;
}

ScoreReport RunEvaluate(const EvaluateOptions &options) {
  SceneSpec scene;
  const SceneTruth truth = LoadTruthDir(options.truth_dir, &scene);
  if (options.enhanced.size() != scene.speakers)
    throw ValidationError(fmt::format("evaluate: {} enhanced files for {} speakers",
                                      options.enhanced.size(), scene.speakers));
  if (options.ref_channel < 1 || options.ref_channel > scene.channels)
    throw ValidationError(fmt::format("evaluate: reference channel {} outside 1..{}",
                                      options.ref_channel, scene.channels));
  const std::size_t q = options.ref_channel - 1;
  const std::size_t J = scene.speakers;

  std::vector<std::vector<double>> all;
  for (const auto &p : options.enhanced) all.push_back(ReadMono(p, scene.sample_rate));
  for (std::size_t j = 0; j < J; ++j) all.push_back(truth.early[j].channels[q]);
  all.push_back(truth.mixture.channels[q]);
  for (const auto &s : all)
    if (s.size() <= 2 * options.edge)
      throw ValidationError("evaluate: signals are too short for the edge trim");
  all = TrimCommon(all, options.edge);

  const std::vector<std::vector<double>> estimates(all.begin(), all.begin() + J);
  const std::vector<std::vector<double>> references(all.begin() + J, all.begin() + 2 * J);
  const ScoreReport report = ScoreSeparation(estimates, references, all.back());

  MakeDir(options.out_dir);
  WriteText(options.out_dir / "report.txt", FormatReportTable(report));
  WriteText(options.out_dir / "report.tsv", FormatReportTsv(report));
  return report;
}

std::vector<double> DemoSource(std::uint64_t seed, std::size_t speaker, std::size_t num_samples,
                               double sample_rate) {
  std::mt19937_64 rng(seed * 1000003ULL + speaker);
  auto range = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> out(num_samples, 0.0);
  const double nyquist = sample_rate / 2.0;

  std::size_t pos = static_cast<std::size_t>(range(0.05, 0.3) * sample_rate);
  while (pos < num_samples) {
    const auto n = static_cast<std::size_t>(range(0.25, 0.7) * sample_rate);
    const double level = range(0.5, 1.0);
    if (speaker % 2 == 0) {
      // Linear chirp with two harmonics.
      const double f_a = range(150.0, 500.0), f_b = range(600.0, std::min(3000.0, 0.4 * nyquist));
      const bool up = range(0.0, 1.0) < 0.5;
      const double f0 = up ? f_a : f_b, f1 = up ? f_b : f_a;
      double phase = 0.0;
      for (std::size_t i = 0; i < n && pos + i < num_samples; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(n);
        phase += 2.0 * std::numbers::pi * (f0 + (f1 - f0) * x) / sample_rate;
        const double env = std::sin(std::numbers::pi * x);
        out[pos + i] += level * env * (std::sin(phase) + 0.4 * std::sin(2.0 * phase));
      }
    } else {
      // White noise through a two-pole resonator.
      const double fc = range(300.0, std::min(4000.0, 0.8 * nyquist));
      const double r = std::exp(-std::numbers::pi * range(150.0, 600.0) / sample_rate);
      const double a1 = 2.0 * r * std::cos(2.0 * std::numbers::pi * fc / sample_rate), a2 = -r * r;
      double y1 = 0.0, y2 = 0.0;
      for (std::size_t i = 0; i < n && pos + i < num_samples; ++i) {
        const double y = (1.0 - r) * gauss(rng) + a1 * y1 + a2 * y2;
        y2 = y1;
        y1 = y;
        const double x = static_cast<double>(i) / static_cast<double>(n);
        out[pos + i] += level * std::sin(std::numbers::pi * x) * y;
      }
    }
    pos += n + static_cast<std::size_t>(range(0.05, 0.25) * sample_rate);
  }

  double energy = 0.0;
  for (double v : out) energy += v * v;
  if (energy > 0.0) {
    const double scale = 0.1 / std::sqrt(energy / static_cast<double>(num_samples));
    for (auto &v : out) v *= scale;
  }
  for (auto &v : out) v += 1e-3 * gauss(rng);
  return out;
}

std::vector<DemoRow> RunDemo(const DemoOptions &options, std::ostream *log) {
  if (!(options.seconds > 0.0)) throw ValidationError("demo: duration must be positive");
  constexpr std::size_t kSpeakers = 2;
  const SceneSpec scene = RandomSceneSpec(kSpeakers, options.channels, 0.4, 20.0, options.seed);
  const auto N = static_cast<std::size_t>(std::lround(options.seconds * scene.sample_rate));
  std::vector<std::vector<double>> dry;
  for (std::size_t j = 0; j < kSpeakers; ++j)
    dry.push_back(DemoSource(options.seed, j, N, scene.sample_rate));
  const fs::path scene_dir = options.out_dir / "scene";
  WriteScene(scene, Render(scene, dry), scene_dir);
  if (log) *log << fmt::format("demo: scene written to {}\n", scene_dir.string());

  std::vector<DemoRow> rows;
  for (MaskType type : {MaskType::kTf, MaskType::kVad})
    for (BeamformerVariant variant : {BeamformerVariant::kMvdr, BeamformerVariant::kWmpdr})
      for (FilterFormula formula : {FilterFormula::kWithoutSv, FilterFormula::kWithSv}) {
        EnhanceConfig cfg = options.base;
        cfg.mask_type = type;
        cfg.mask_source = MaskSource::kOracle;
        cfg.beamformer.variant = variant;
        cfg.beamformer.formula = formula;
        cfg.output = "enhanced";

        DemoRow row;
        row.id = std::to_string(rows.size() + 1);
        row.model = std::string(cfg.wpe_enabled ? "WPE+" : "") +
                    (variant == BeamformerVariant::kMvdr ? "MVDR" : "wMPDR");
        row.formula = formula == FilterFormula::kWithSv ? "w/ SV" : "w/o SV";
        row.mask = type == MaskType::kTf ? "T-F" : "VAD";
        const fs::path cell = options.out_dir / fmt::format("cell{}_{}_{}_{}", row.id,
                                                            VariantName(variant),
                                                            FormulaName(formula), MaskTypeName(type));
        EnhanceOptions eo;
        eo.config = cfg;
        eo.mixture = scene_dir / kMixtureName;
        eo.truth_dir = scene_dir;
        eo.out_dir = cell;
        eo.seed = options.seed;
        const auto enhanced = RunEnhance(eo, nullptr);

        EvaluateOptions ev;
        ev.enhanced = enhanced;
        ev.truth_dir = scene_dir;
        ev.out_dir = cell;
        ev.ref_channel = cfg.beamformer.ref_channel;
        ev.edge = cfg.stft.window_len;
        row.report = RunEvaluate(ev);
        if (log)
          *log << fmt::format("demo: cell {} ({} {} {}) mean SI-SDR {:.2f} dB\n", row.id, row.model,
                              row.formula, row.mask, row.report.MeanSiSdr());
        rows.push_back(std::move(row));
      }

  WriteText(options.out_dir / "table.txt", FormatDemoTable(rows));
  WriteText(options.out_dir / "table.tsv", FormatDemoTsv(rows));
  return rows;
}

namespace {

double Mean(const std::vector<double> &v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

}  // namespace

std::string FormatDemoTable(const std::vector<DemoRow> &rows) {
  std::string out = fmt::format("{:<3} {:<11} {:<7} {:<5} {:>5} {:>5} {:>5} {:>8} {:>8} {:>9}\n",
                                "ID", "Model", "Formula", "Mask", "WER", "PESQ", "STOI", "SDR",
                                "SI-SDR", "dSI-SDR");
  for (const auto &r : rows)
    out += fmt::format("{:<3} {:<11} {:<7} {:<5} {:>5} {:>5} {:>5} {:>8.2f} {:>8.2f} {:>9.2f}\n",
                       r.id, r.model, r.formula, r.mask, "n/a", "n/a", "n/a", Mean(r.report.sdr),
                       Mean(r.report.si_sdr), Mean(r.report.SiSdrImprovement()));
  return out;
}

std::string FormatDemoTsv(const std::vector<DemoRow> &rows) {
  std::string out = "id\tmodel\tformula\tmask\tsdr\tsi_sdr\tsi_sdr_improvement\n";
  for (const auto &r : rows)
    out += fmt::format("{}\t{}\t{}\t{}\t{:.4f}\t{:.4f}\t{:.4f}\n", r.id, r.model, r.formula, r.mask,
                       Mean(r.report.sdr), Mean(r.report.si_sdr),
                       Mean(r.report.SiSdrImprovement()));
  return out;
}

}  // namespace convbeam
