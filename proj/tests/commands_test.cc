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

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <gtest/gtest.h>

#include "convbeam/commands.h"
#include "convbeam/error.h"
#include "convbeam/mask.h"
#include "convbeam/pipeline.h"
#include "support.h"

namespace convbeam {
namespace {

namespace fs = std::filesystem;

std::string Slurp(const fs::path &p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), {}};
}

class CommandsTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("convbeam_cmd_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  // Scene manifest plus mono sources; returns the options for RunSimulate.
  SimulateOptions Prepare(std::size_t speakers, std::size_t channels, double t60, double snr,
                          double seconds = 1.5) {
    const SceneSpec spec = RandomSceneSpec(speakers, channels, t60, snr, 130);
    {
      std::ofstream os(dir_ / "scene_in.ini");
      os << RenderSceneManifest(spec);
    }
    SimulateOptions o;
    o.scene = dir_ / "scene_in.ini";
    for (std::size_t j = 0; j < speakers; ++j) {
      const fs::path p = dir_ / ("src" + std::to_string(j) + ".wav");
      WriteWav(p, AudioBuffer{16000.0, {SpeechLikeSource(140 + j, static_cast<std::size_t>(seconds * 16000), 16000.0)}});
      o.sources.push_back(p);
    }
    o.out_dir = dir_ / "scene";
    return o;
  }

  fs::path dir_;
};

TEST_F(CommandsTest, SimulateWritesScene) {
  const SimulateOptions o = Prepare(2, 3, 0.3, 20.0);
  std::ostringstream log;
  const SceneTruth truth = RunSimulate(o, &log);
  EXPECT_NE(log.str().find("2 speakers"), std::string::npos);
  for (const char *name : {kSceneManifestName, kMixtureName, kNoiseName, kSteeringName, "early_1.wav",
                           "early_2.wav", "late_1.wav", "late_2.wav"})
    EXPECT_TRUE(fs::exists(o.out_dir / name)) << name;

  const AudioBuffer mix = ReadWav(o.out_dir / kMixtureName);
  EXPECT_EQ(mix.channels, truth.mixture.channels);
  std::vector<AudioBuffer> parts = {ReadWav(o.out_dir / kNoiseName)};
  for (std::size_t j = 0; j < 2; ++j) {
    parts.push_back(ReadWav(o.out_dir / EarlyName(j)));
    parts.push_back(ReadWav(o.out_dir / LateName(j)));
  }
  for (std::size_t c = 0; c < 3; ++c)
    for (std::size_t n = 0; n < mix.num_samples(); ++n) {
      double sum = 0.0;
      for (const auto &p : parts) sum += p.channels[c][n];
      ASSERT_EQ(mix.channels[c][n], sum);
    }
  EXPECT_EQ(LoadSteering(o.out_dir / kSteeringName), truth.steering);
  SceneSpec back;
  LoadTruthDir(o.out_dir, &back);
  EXPECT_EQ(back, LoadSceneManifest(o.scene));
}

TEST_F(CommandsTest, SimulatePcm16SumsWithinOneLsb) {
  SimulateOptions o = Prepare(2, 2, 0.3, 15.0);
  o.format = WavFormat::kPcm16;
  RunSimulate(o);
  const AudioBuffer mix = ReadWav(o.out_dir / kMixtureName);
  std::vector<AudioBuffer> parts = {ReadWav(o.out_dir / kNoiseName)};
  for (std::size_t j = 0; j < 2; ++j) {
    parts.push_back(ReadWav(o.out_dir / EarlyName(j)));
    parts.push_back(ReadWav(o.out_dir / LateName(j)));
  }
  for (std::size_t c = 0; c < 2; ++c)
    for (std::size_t n = 0; n < mix.num_samples(); ++n) {
      double sum = 0.0;
      for (const auto &p : parts) sum += p.channels[c][n];
      ASSERT_LE(std::abs(mix.channels[c][n] - sum), 1.0 / 32768.0);
    }
}

TEST_F(CommandsTest, SimulateAnechoicLateIsSilent) {
  const SimulateOptions o = Prepare(2, 2, 0.0, std::numeric_limits<double>::infinity());
  RunSimulate(o);
  for (std::size_t j = 0; j < 2; ++j)
    for (const auto &ch : ReadWav(o.out_dir / LateName(j)).channels)
      for (double v : ch) ASSERT_EQ(v, 0.0);
}

TEST_F(CommandsTest, SimulateIsByteIdenticalAndSeedable) {
  SimulateOptions o = Prepare(1, 2, 0.3, 20.0);
  RunSimulate(o);
  const std::string first = Sha256Hex(o.out_dir / kMixtureName);
  o.out_dir = dir_ / "again";
  RunSimulate(o);
  EXPECT_EQ(Sha256Hex(o.out_dir / kMixtureName), first);
  EXPECT_EQ(Slurp(dir_ / "scene" / kSteeringName), Slurp(o.out_dir / kSteeringName));
  o.out_dir = dir_ / "reseeded";
  o.seed = 999;
  RunSimulate(o);
  EXPECT_NE(Sha256Hex(o.out_dir / kMixtureName), first);
}

TEST_F(CommandsTest, SimulateErrors) {
  SimulateOptions o = Prepare(2, 2, 0.3, 20.0);
  o.sources.pop_back();
  EXPECT_THROW(RunSimulate(o), ValidationError);
  o = Prepare(1, 2, 0.3, 20.0);
  WriteWav(o.sources[0], AudioBuffer{8000.0, {std::vector<double>(800, 0.1)}});
  EXPECT_THROW(RunSimulate(o), ValidationError);
  o.scene = dir_ / "missing.ini";
  EXPECT_THROW(RunSimulate(o), Error);
}

TEST_F(CommandsTest, EnhanceOracleWritesOutputsAndManifest) {
  const SimulateOptions sim = Prepare(2, 2, 0.3, 20.0);
  RunSimulate(sim);
  EnhanceOptions o;
  o.mixture = sim.out_dir / kMixtureName;
  o.truth_dir = sim.out_dir;
  o.out_dir = dir_ / "enh";
  o.seed = 17;
  const auto paths = RunEnhance(o);
  ASSERT_EQ(paths.size(), 2u);
  EXPECT_EQ(paths[0].filename(), "enhanced_1.wav");
  EXPECT_EQ(paths[1].filename(), "enhanced_2.wav");
  const AudioBuffer out = ReadWav(paths[0]);
  EXPECT_EQ(out.num_channels(), 1u);

  const std::string manifest = Slurp(o.out_dir / kRunManifestName);
  for (const char *needle : {"[run]", "command = enhance", "seed = 17", "[versions]", "[config.wpe]",
                             "[config.beamformer]", "[inputs]", "[outputs]", "[timings]"})
    EXPECT_NE(manifest.find(needle), std::string::npos) << needle << "\n" << manifest;
  EXPECT_NE(manifest.find(Sha256Hex(o.mixture)), std::string::npos);
  EXPECT_NE(manifest.find(Sha256Hex(sim.out_dir / "early_2.wav")), std::string::npos);

  // Same inputs, same bytes.
  EnhanceOptions again = o;
  again.out_dir = dir_ / "enh2";
  RunEnhance(again);
  EXPECT_EQ(Slurp(paths[1]), Slurp(again.out_dir / "enhanced_2.wav"));
}

TEST_F(CommandsTest, EnhanceFileMasksMatchOracle) {
  const SimulateOptions sim = Prepare(2, 2, 0.3, 20.0);
  RunSimulate(sim);
  EnhanceOptions o;
  o.mixture = sim.out_dir / kMixtureName;
  o.truth_dir = sim.out_dir;
  o.out_dir = dir_ / "oracle";
  RunEnhance(o);

  const SceneTruth truth = LoadTruthDir(sim.out_dir);
  const SpectroTensor y = AnalyzeMixture(truth.mixture, o.config);
  const auto masks = OracleMasks(ComputeSceneSpectra(truth, o.config.stft, 2), y);
  const fs::path mask_dir = dir_ / "masks";
  fs::create_directories(mask_dir);
  for (std::size_t j = 0; j < 2; ++j) {
    const auto id = static_cast<std::uint8_t>(j);
    SaveMask(MaskTensor(MaskRole::kWpe, id, masks[j].wpe.dims(), masks[j].wpe.values()),
             mask_dir / MaskFileName(MaskRole::kWpe, j + 1));
    SaveMask(MaskTensor(MaskRole::kBfTarget, id, masks[j].target.dims(), masks[j].target.values()),
             mask_dir / MaskFileName(MaskRole::kBfTarget, j + 1));
    SaveMask(MaskTensor(MaskRole::kBfNoise, id, masks[j].noise.dims(), masks[j].noise.values()),
             mask_dir / MaskFileName(MaskRole::kBfNoise, j + 1));
  }
  EnhanceOptions f = o;
  f.truth_dir.clear();
  f.config.mask_source = MaskSource::kFile;
  f.config.mask_path = mask_dir.string();
  f.out_dir = dir_ / "file";
  RunEnhance(f);
  for (const char *name : {"enhanced_1.wav", "enhanced_2.wav"})
    EXPECT_EQ(Slurp(o.out_dir / name), Slurp(f.out_dir / name)) << name;

  fs::remove(mask_dir / MaskFileName(MaskRole::kBfNoise, 2));
  EXPECT_THROW(RunEnhance(f), IoError);
  SaveMask(MaskTensor(MaskRole::kBfNoise, 0, masks[1].noise.dims(), masks[1].noise.values()),
           mask_dir / MaskFileName(MaskRole::kBfNoise, 2));
  EXPECT_THROW(RunEnhance(f), ValidationError);
}

TEST_F(CommandsTest, EnhanceErrors) {
  const SimulateOptions sim = Prepare(1, 2, 0.3, 20.0);
  RunSimulate(sim);
  EnhanceOptions o;
  o.mixture = sim.out_dir / kMixtureName;
  o.out_dir = dir_ / "enh";
  EXPECT_THROW(RunEnhance(o), ValidationError);  // oracle without truth
  o.truth_dir = sim.out_dir;
  o.config.channels_used = 4;
  o.config.beamformer.ref_channel = 1;
  EXPECT_THROW(RunEnhance(o), ValidationError);
  o.config = {};
  o.mixture = dir_ / "nope.wav";
  EXPECT_THROW(RunEnhance(o), IoError);
}

TEST_F(CommandsTest, EvaluateReferencesAndSwaps) {
  const SimulateOptions sim = Prepare(2, 2, 0.3, 20.0);
  RunSimulate(sim);
  const SceneTruth truth = LoadTruthDir(sim.out_dir);
  const fs::path a = dir_ / "a.wav", b = dir_ / "b.wav", m = dir_ / "m.wav";
  WriteWav(a, AudioBuffer{16000.0, {truth.early[0].channels[0]}});
  WriteWav(b, AudioBuffer{16000.0, {truth.early[1].channels[0]}});
  WriteWav(m, AudioBuffer{16000.0, {truth.mixture.channels[0]}});

  EvaluateOptions o;
  o.truth_dir = sim.out_dir;
  o.out_dir = dir_ / "eval";
  o.enhanced = {a, b};
  ScoreReport r = RunEvaluate(o);
  EXPECT_EQ(r.permutation, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(r.si_sdr, (std::vector<double>{kMaxScoreDb, kMaxScoreDb}));
  const std::string tsv = Slurp(o.out_dir / "report.tsv");
  EXPECT_NE(tsv.find("1\tsi_sdr\t100"), std::string::npos) << tsv;
  EXPECT_TRUE(fs::exists(o.out_dir / "report.txt"));

  o.enhanced = {b, a};
  r = RunEvaluate(o);
  EXPECT_EQ(r.permutation, (std::vector<std::size_t>{1, 0}));
  EXPECT_EQ(r.si_sdr, (std::vector<double>{kMaxScoreDb, kMaxScoreDb}));

  o.enhanced = {m, m};
  r = RunEvaluate(o);
  for (double d : r.SiSdrImprovement()) EXPECT_EQ(d, 0.0);

  o.enhanced = {a};
  EXPECT_THROW(RunEvaluate(o), ValidationError);
  o.enhanced = {a, b};
  o.ref_channel = 3;
  EXPECT_THROW(RunEvaluate(o), ValidationError);
}

TEST_F(CommandsTest, SteeringFileFormat) {
  testing::Gen g(131);
  std::vector<SteeringVectors> v(2, SteeringVectors(5));
  for (auto &s : v)
    for (auto &bin : s) bin = g.Vector(3);
  const fs::path p = dir_ / "sv.bin";
  SaveSteering(v, p);
  EXPECT_EQ(fs::file_size(p), 20u + 2 * 5 * 3 * 16);
  EXPECT_EQ(LoadSteering(p), v);
  std::string bytes = Slurp(p);
  EXPECT_EQ(bytes.substr(0, 4), "CBSV");
  {
    std::ofstream os(p, std::ios::binary);
    os << bytes.substr(0, bytes.size() - 1);
  }
  EXPECT_THROW(LoadSteering(p), ParseError);
  bytes[0] = 'X';
  {
    std::ofstream os(p, std::ios::binary);
    os << bytes;
  }
  EXPECT_THROW(LoadSteering(p), ParseError);
}

TEST_F(CommandsTest, Sha256KnownValue) {
  {
    std::ofstream os(dir_ / "abc.txt", std::ios::binary);
    os << "abc";
  }
  EXPECT_EQ(Sha256Hex(dir_ / "abc.txt"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_F(CommandsTest, DemoGridIsCompleteAndFinite) {
  DemoOptions o;
  o.out_dir = dir_ / "demo";
  o.seconds = 2.0;
  o.channels = 2;
  const auto rows = RunDemo(o);
  ASSERT_EQ(rows.size(), 8u);
  for (const auto &row : rows) {
    for (double v : row.report.si_sdr) EXPECT_TRUE(std::isfinite(v)) << row.id;
    for (double v : row.report.sdr) EXPECT_TRUE(std::isfinite(v)) << row.id;
  }
  const std::string table = Slurp(o.out_dir / "table.txt");
  for (const char *needle : {"WPE+MVDR", "WPE+wMPDR", "w/ SV", "w/o SV", "T-F", "VAD", "PESQ", "n/a"})
    EXPECT_NE(table.find(needle), std::string::npos) << needle;
  EXPECT_EQ(table, FormatDemoTable(rows));
  const std::string tsv = Slurp(o.out_dir / "table.tsv");
  EXPECT_EQ(static_cast<std::size_t>(std::count(tsv.begin(), tsv.end(), '\n')), 9u);
  const auto a = DemoSource(1, 0, 16000, 16000.0), b = DemoSource(1, 1, 16000, 16000.0);
  EXPECT_EQ(a, DemoSource(1, 0, 16000, 16000.0));
  EXPECT_NE(a, b);
}

// The CLI binary, driven the way a user would.
class CliTest : public CommandsTest {
 protected:
  int Run(const std::string &args, const std::string &env = "") {
    const std::string cmd = env + " " + CONVBEAM_CLI + " " + args + " >" + (dir_ / "stdout").string() +
                            " 2>" + (dir_ / "stderr").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  std::string Err() { return Slurp(dir_ / "stderr"); }
};

TEST_F(CliTest, HelpAndUsageErrors) {
  EXPECT_EQ(Run("--help"), 0);
  EXPECT_NE(Slurp(dir_ / "stdout").find("simulate"), std::string::npos);
  EXPECT_NE(Run(""), 0);
  EXPECT_NE(Run("bogus"), 0);
  EXPECT_NE(Run("demo --channels 3 --out x"), 0);
}

TEST_F(CliTest, EndToEnd) {
  const SimulateOptions sim = Prepare(2, 2, 0.3, 20.0);
  const std::string scene = (dir_ / "scene").string();
  ASSERT_EQ(Run("simulate --config " + sim.scene.string() + " --out " + scene + " " + sim.sources[0].string() +
                " " + sim.sources[1].string()),
            0)
      << Err();
  EXPECT_TRUE(fs::exists(dir_ / "scene" / kMixtureName));

  const std::string enh = (dir_ / "enh").string();
  ASSERT_EQ(Run("enhance --out " + enh + " --seed 3 --verbose " + scene + "/mixture.wav --truth " + scene), 0)
      << Err();
  EXPECT_TRUE(fs::exists(dir_ / "enh" / "enhanced_1.wav"));
  EXPECT_NE(Slurp(dir_ / "enh" / kRunManifestName).find("seed = 3"), std::string::npos);

  const std::string ev = (dir_ / "ev").string();
  ASSERT_EQ(Run("evaluate --out " + ev + " --truth " + scene + " " + enh + "/enhanced_1.wav " + enh +
                "/enhanced_2.wav"),
            0)
      << Err();
  EXPECT_NE(Slurp(dir_ / "ev" / "report.tsv").find("si_sdr"), std::string::npos);

  // Environment override reaches the config: without_sv changes the output.
  const std::string enh2 = (dir_ / "enh2").string();
  ASSERT_EQ(Run("enhance --out " + enh2 + " " + scene + "/mixture.wav --truth " + scene,
                "CONVBEAM_BEAMFORMER_FORMULA=without_sv"),
            0)
      << Err();
  EXPECT_NE(Slurp(dir_ / "enh" / "enhanced_1.wav"), Slurp(dir_ / "enh2" / "enhanced_1.wav"));
  EXPECT_NE(Slurp(dir_ / "enh2" / kRunManifestName).find("formula = without_sv"), std::string::npos);
}

TEST_F(CliTest, ErrorsExitNonzero) {
  EXPECT_EQ(Run("enhance " + (dir_ / "none.wav").string() + " --out " + dir_.string()), 1);
  EXPECT_NE(Err().find("convbeam: error:"), std::string::npos) << Err();
  EXPECT_EQ(Run("enhance x.wav"), 1);
  EXPECT_NE(Err().find("--out"), std::string::npos) << Err();
  EXPECT_EQ(Run("demo --out " + dir_.string(), "CONVBEAM_WPE_TAPS=lots"), 1);
  EXPECT_NE(Err().find("CONVBEAM_WPE_TAPS"), std::string::npos) << Err();
  {
    std::ofstream os(dir_ / "bad.ini");
    os << "[wpe]\nunknown = 1\n";
  }
  EXPECT_EQ(Run("demo --out " + dir_.string() + " --config " + (dir_ / "bad.ini").string()), 1);
}

}  // namespace
}  // namespace convbeam
