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

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <numeric>

#include <gtest/gtest.h>

#include "convbeam/error.h"
#include "convbeam/mask.h"
#include "support.h"

namespace convbeam {
namespace {

using testing::Gen;

MaskTensor RandomMask(Gen &g, std::vector<std::size_t> dims, MaskRole role = MaskRole::kBfTarget) {
  std::size_t n = 1;
  for (auto d : dims) n *= d;
  std::vector<double> v(n);
  for (auto &x : v) x = g.Uniform(0.0, 1.0);
  return MaskTensor(role, 0, std::move(dims), std::move(v));
}

SpectroTensor RandomSpec(Gen &g, std::size_t T, std::size_t F, std::size_t C) {
  SpectroTensor s(T, F, C);
  for (auto &x : s.data()) x = g.ComplexNormal();
  return s;
}

TEST(OracleMasks, SingleCleanSpeakerIsOne) {
  Gen g(41);
  SceneSpectra truth{{RandomSpec(g, 6, 5, 2)}, SpectroTensor(6, 5, 2), SpectroTensor(6, 5, 2)};
  const auto masks = OracleMasks(truth, truth.early[0]);
  ASSERT_EQ(masks.size(), 1u);
  const auto &y = truth.early[0].data();
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double mag = std::abs(y[i]);
    EXPECT_NEAR(masks[0].target.values()[i], mag / (mag + kOracleDelta), 1e-15);
    EXPECT_NEAR(masks[0].target.values()[i], 1.0, 1e-6);
  }
  EXPECT_EQ(masks[0].wpe.values(), masks[0].target.values());
  EXPECT_EQ(masks[0].target.dims(), (std::vector<std::size_t>{6, 5, 2}));
}

TEST(OracleMasks, SilenceIsNoise) {
  SceneSpectra truth{{SpectroTensor(3, 4, 1), SpectroTensor(3, 4, 1)}, SpectroTensor(3, 4, 1),
                     SpectroTensor(3, 4, 1)};
  const auto masks = OracleMasks(truth, SpectroTensor(3, 4, 1));
  for (const auto &m : masks) {
    for (double v : m.target.values()) EXPECT_EQ(v, 0.0);
    for (double v : m.noise.values()) EXPECT_EQ(v, 1.0);
  }
}

TEST(OracleMasks, EqualSpeakersSplitEvenly) {
  Gen g(42);
  SpectroTensor a = RandomSpec(g, 4, 3, 2), b(4, 3, 2);
  for (std::size_t i = 0; i < a.data().size(); ++i)
    b.data()[i] = std::abs(a.data()[i]) * Complex(0.0, 1.0);
  SceneSpectra truth{{a, b}, SpectroTensor(4, 3, 2), SpectroTensor(4, 3, 2)};
  for (const auto &m : OracleMasks(truth, a))
    for (double v : m.target.values()) EXPECT_NEAR(v, 0.5, 1e-9);
}

TEST(OracleMasks, TargetPlusNoiseIsOne) {
  Gen g(43);
  SceneSpectra truth{{RandomSpec(g, 5, 4, 3), RandomSpec(g, 5, 4, 3)}, RandomSpec(g, 5, 4, 3),
                     RandomSpec(g, 5, 4, 3)};
  for (const auto &m : OracleMasks(truth, truth.noise)) {
    for (std::size_t i = 0; i < m.target.values().size(); ++i)
      EXPECT_EQ(m.target.values()[i] + m.noise.values()[i], 1.0);
  }
}

TEST(OracleMasks, ShapeMismatch) {
  SceneSpectra truth{{SpectroTensor(3, 4, 1)}, SpectroTensor(3, 4, 1), SpectroTensor(3, 4, 2)};
  EXPECT_THROW(OracleMasks(truth, SpectroTensor(3, 4, 1)), ShapeError);
}

TEST(FloorMask, Examples) {
  const MaskTensor z(MaskRole::kWpe, 0, {3, 2}, 0.0);
  const MaskTensor floored = FloorMask(z, 1e-2);
  for (double v : floored.values()) EXPECT_EQ(v, 1e-2);
  Gen g(44);
  MaskTensor m = RandomMask(g, {4, 3});
  for (auto &v : m.values()) v = std::max(v, 0.2);
  EXPECT_EQ(FloorMask(m, 0.1), m);
}

TEST(FloorMask, LowerBoundAndIdempotent) {
  Gen g(45);
  for (int trial = 0; trial < 50; ++trial) {
    const MaskTensor m = RandomMask(g, {g.Index(1, 6), g.Index(1, 6), g.Index(1, 3)});
    const double xi = g.Uniform(0.0, 0.9);
    const MaskTensor f = FloorMask(m, xi);
    for (double v : f.values()) EXPECT_GE(v, xi);
    EXPECT_EQ(FloorMask(f, xi), f);
  }
}

TEST(FloorMask, RejectsBadXi) {
  const MaskTensor z(MaskRole::kWpe, 0, {3}, 0.0);
  EXPECT_THROW(FloorMask(z, 1.0), ValidationError);
  EXPECT_THROW(FloorMask(z, -0.1), ValidationError);
}

TEST(ChannelAverage, Examples) {
  Gen g(46);
  const MaskTensor one = RandomMask(g, {4, 3, 1});
  const MaskTensor avg = ChannelAverage(one);
  EXPECT_EQ(avg.dims(), (std::vector<std::size_t>{4, 3}));
  for (std::size_t t = 0; t < 4; ++t)
    for (std::size_t f = 0; f < 3; ++f) EXPECT_EQ(avg.At(t, f), one.At(t, f, 0));

  const MaskTensor two(MaskRole::kBfNoise, 1, {1, 1, 2}, std::vector<double>{0.2, 0.4});
  EXPECT_NEAR(ChannelAverage(two).At(0, 0), 0.3, 1e-15);
  const MaskTensor c(MaskRole::kBfNoise, 1, {2, 2, 3}, 0.37);
  const MaskTensor ca = ChannelAverage(c);
  for (double v : ca.values()) EXPECT_EQ(v, 0.37);
  EXPECT_EQ(ChannelAverage(two).role(), MaskRole::kBfNoise);
}

TEST(VadCollapse, Examples) {
  MaskTensor m(MaskRole::kBfTarget, 0, {2, 4}, 0.0);
  for (std::size_t f = 0; f < 4; ++f) m.Mutable(0, f) = 0.6;
  for (std::size_t f = 0; f < 2; ++f) m.Mutable(1, f) = 1.0;
  const MaskTensor v = VadCollapse(m);
  EXPECT_EQ(v.dims(), (std::vector<std::size_t>{2}));
  EXPECT_NEAR(v.At(0), 0.6, 1e-15);
  EXPECT_EQ(v.At(1), 0.5);
}

TEST(VadCollapse, BroadcastRoundTrip) {
  Gen g(47);
  const MaskTensor v = RandomMask(g, {7});
  EXPECT_EQ(VadCollapse(BroadcastFrames(v, 9)), v);
}

TEST(VadCollapse, FrequencyPermutationInvariant) {
  Gen g(48);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t T = g.Index(1, 5), F = g.Index(2, 40), C = g.Index(1, 3);
    const MaskTensor m = RandomMask(g, {T, F, C});
    std::vector<std::size_t> perm(F);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), g.engine());
    MaskTensor p = m;
    for (std::size_t t = 0; t < T; ++t)
      for (std::size_t f = 0; f < F; ++f)
        for (std::size_t c = 0; c < C; ++c) p.Mutable(t, f, c) = m.At(t, perm[f], c);
    EXPECT_EQ(VadCollapse(p), VadCollapse(m));
  }
}

TEST(MaskWeights, ConstantAcrossFrequencyForVad) {
  Gen g(49);
  const MaskTensor v = VadCollapse(RandomMask(g, {6, 10}));
  const TfGrid w = MaskWeights(v, 10);
  for (std::size_t t = 0; t < 6; ++t)
    for (std::size_t f = 0; f < 10; ++f) EXPECT_EQ(w(t, f), w(t, 0));
}

TEST(MaskFile, RoundTripBitExact) {
  Gen g(50);
  const auto dir = std::filesystem::temp_directory_path() / "convbeam_mask_test";
  std::filesystem::create_directories(dir);
  for (std::vector<std::size_t> dims :
       {std::vector<std::size_t>{5}, std::vector<std::size_t>{4, 3}, std::vector<std::size_t>{3, 4, 2}}) {
    MaskTensor m = RandomMask(g, dims, MaskRole::kBfNoise);
    m = MaskTensor(MaskRole::kBfNoise, 3, m.dims(), m.values());
    const auto path = dir / "m.cbmk";
    SaveMask(m, path);
    const MaskTensor back = LoadMask(path);
    EXPECT_EQ(back, m);
    EXPECT_EQ(back.role(), MaskRole::kBfNoise);
    EXPECT_EQ(back.speaker(), 3);
    EXPECT_EQ(DecodeMask(EncodeMask(m)), m);
  }
  std::filesystem::remove_all(dir);
}

TEST(MaskFile, Layout) {
  const MaskTensor m(MaskRole::kBfTarget, 2, {1, 2}, std::vector<double>{0.25, 0.5});
  const auto bytes = EncodeMask(m);
  ASSERT_EQ(bytes.size(), 4u + 4 + 3 + 2 * 4 + 2 * 8);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "CBMK");
  EXPECT_EQ(bytes[4], 1);
  EXPECT_EQ(bytes[8], 1);   // role
  EXPECT_EQ(bytes[9], 2);   // speaker
  EXPECT_EQ(bytes[10], 2);  // rank
  EXPECT_EQ(bytes[11], 1);  // T
  EXPECT_EQ(bytes[15], 2);  // F
  double first;
  std::memcpy(&first, bytes.data() + 19, 8);
  EXPECT_EQ(first, 0.25);
}

TEST(MaskFile, Truncated) {
  const MaskTensor m(MaskRole::kWpe, 0, {3, 2}, 0.5);
  auto bytes = EncodeMask(m);
  for (std::size_t cut : {2u, 9u, 14u}) {
    std::vector<std::uint8_t> b(bytes.begin(), bytes.begin() + cut);
    EXPECT_THROW(DecodeMask(b), ParseError) << cut;
  }
  bytes.pop_back();
  EXPECT_THROW(DecodeMask(bytes), ParseError);
}

TEST(MaskFile, OutOfRangeValueNamesIndex) {
  const MaskTensor m(MaskRole::kWpe, 0, {2, 2}, 0.5);
  auto bytes = EncodeMask(m);
  const double bad = 1.5;
  std::memcpy(bytes.data() + bytes.size() - 8 * 2, &bad, 8);  // flat index 2 = (1, 0)
  try {
    DecodeMask(bytes);
    FAIL() << "no error";
  } catch (const ValidationError &e) {
    EXPECT_NE(std::string(e.what()).find("t=1, f=0"), std::string::npos) << e.what();
  }
}

TEST(MaskFile, BadMagicAndRole) {
  const MaskTensor m(MaskRole::kWpe, 0, {2}, 0.5);
  auto bytes = EncodeMask(m);
  bytes[0] = 'X';
  EXPECT_THROW(DecodeMask(bytes), ParseError);
  bytes = EncodeMask(m);
  bytes[8] = 7;
  EXPECT_THROW(DecodeMask(bytes), ParseError);
}

TEST(MaskTensor, RejectsOutOfRange) {
  EXPECT_THROW(MaskTensor(MaskRole::kWpe, 0, {2}, std::vector<double>{0.5, -0.1}), ValidationError);
  EXPECT_THROW(MaskTensor(MaskRole::kWpe, 0, {2}, std::vector<double>{0.5, NAN}), ValidationError);
  EXPECT_THROW(MaskTensor(MaskRole::kWpe, 0, {2}, std::vector<double>{0.5}), ShapeError);
}

}  // namespace
}  // namespace convbeam
