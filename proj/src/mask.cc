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

#include "convbeam/mask.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>

#include "convbeam/error.h"

namespace convbeam {

namespace {

constexpr std::array<char, 4> kMagic = {'C', 'B', 'M', 'K'};
constexpr std::uint32_t kVersion = 1;

std::size_t Product(const std::vector<std::size_t> &dims) {
  std::size_t n = 1;
  for (auto d : dims) n *= d;
  return n;
}

std::string IndexString(const std::vector<std::size_t> &dims, std::size_t flat) {
  static const char *names[] = {"t", "f", "c"};
  std::vector<std::size_t> idx(dims.size());
  for (std::size_t k = dims.size(); k-- > 0;) {
    idx[k] = flat % dims[k];
    flat /= dims[k];
  }
  std::string s = "(";
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (k) s += ", ";
    s += std::string(names[k]) + "=" + std::to_string(idx[k]);
  }
  return s + ")";
}

void CheckDims(const std::vector<std::size_t> &dims) {
  if (dims.empty() || dims.size() > 3)
    throw ShapeError("mask: rank must be 1, 2 or 3, got " + std::to_string(dims.size()));
  for (auto d : dims)
    if (d == 0) throw ShapeError("mask: dimensions must be positive");
}

class Writer {
 public:
  void U8(std::uint8_t v) { bytes.push_back(v); }
  void U32(std::uint32_t v) {
    for (int k = 0; k < 4; ++k) bytes.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
  }
  void F64(double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int k = 0; k < 8; ++k) bytes.push_back(static_cast<std::uint8_t>(bits >> (8 * k)));
  }
  std::vector<std::uint8_t> bytes;
};

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t> &b) : bytes_(b) {}

  void Need(std::size_t n, const char *what) const {
    if (bytes_.size() - pos_ < n)
      throw ParseError(std::string("mask file truncated while reading ") + what + " at byte " +
                       std::to_string(pos_));
  }
  std::uint8_t U8(const char *what) {
    Need(1, what);
    return bytes_[pos_++];
  }
  std::uint32_t U32(const char *what) {
    Need(4, what);
    std::uint32_t v = 0;
    for (int k = 0; k < 4; ++k) v |= static_cast<std::uint32_t>(bytes_[pos_++]) << (8 * k);
    return v;
  }
  double F64(const char *what) {
    Need(8, what);
    std::uint64_t v = 0;
    for (int k = 0; k < 8; ++k) v |= static_cast<std::uint64_t>(bytes_[pos_++]) << (8 * k);
    return std::bit_cast<double>(v);
  }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  const std::vector<std::uint8_t> &bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

const char *MaskRoleName(MaskRole role) {
  switch (role) {
    case MaskRole::kWpe:
      return "wpe";
    case MaskRole::kBfTarget:
      return "bf_target";
    case MaskRole::kBfNoise:
      return "bf_noise";
  }
  return "unknown";
}

MaskTensor::MaskTensor(MaskRole role, std::uint8_t speaker, std::vector<std::size_t> dims,
                       double fill)
    : role_(role), speaker_(speaker), dims_(std::move(dims)) {
  CheckDims(dims_);
  if (!(fill >= 0.0 && fill <= 1.0)) throw ValidationError("mask: fill value outside [0, 1]");
  values_.assign(Product(dims_), fill);
}

MaskTensor::MaskTensor(MaskRole role, std::uint8_t speaker, std::vector<std::size_t> dims,
                       std::vector<double> values)
    : role_(role), speaker_(speaker), dims_(std::move(dims)), values_(std::move(values)) {
  CheckDims(dims_);
  if (values_.size() != Product(dims_))
    throw ShapeError("mask: " + std::to_string(values_.size()) + " values for shape of " +
                     std::to_string(Product(dims_)));
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (!(values_[i] >= 0.0 && values_[i] <= 1.0))
      throw ValidationError("mask value " + std::to_string(values_[i]) + " outside [0, 1] at " +
                            IndexString(dims_, i));
}

std::size_t MaskTensor::Index(std::size_t t, std::size_t f, std::size_t c) const {
  switch (dims_.size()) {
    case 1:
      return t;
    case 2:
      return t * dims_[1] + f;
    default:
      return (t * dims_[1] + f) * dims_[2] + c;
  }
}

std::vector<MaskSet> OracleMasks(const SceneSpectra &truth, const SpectroTensor &mixture) {
  if (truth.early.empty()) throw ShapeError("oracle masks: no speakers");
  auto check = [&](const SpectroTensor &s, const std::string &what) {
    if (!s.SameShape(mixture))
      throw ShapeError("oracle masks: " + what + " shape differs from the mixture");
  };
  for (std::size_t j = 0; j < truth.early.size(); ++j)
    check(truth.early[j], "early image " + std::to_string(j + 1));
  check(truth.late_sum, "late reverberation");
  check(truth.noise, "noise");
  if (truth.early.size() > std::numeric_limits<std::uint8_t>::max())
    throw ShapeError("oracle masks: too many speakers");

  const std::size_t T = mixture.frames(), F = mixture.bins(), C = mixture.channels();
  const std::vector<std::size_t> dims = {T, F, C};
  std::vector<MaskSet> out;
  for (std::size_t j = 0; j < truth.early.size(); ++j) {
    const auto spk = static_cast<std::uint8_t>(j);
    out.push_back({MaskTensor(MaskRole::kWpe, spk, dims), MaskTensor(MaskRole::kBfTarget, spk, dims),
                   MaskTensor(MaskRole::kBfNoise, spk, dims)});
  }
  std::vector<double> mags(truth.early.size());
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t f = 0; f < F; ++f)
      for (std::size_t c = 0; c < C; ++c) {
        double denom = std::abs(truth.late_sum(t, f, c)) + std::abs(truth.noise(t, f, c)) +
                       kOracleDelta;
        for (std::size_t j = 0; j < mags.size(); ++j) {
          mags[j] = std::abs(truth.early[j](t, f, c));
          denom += mags[j];
        }
        for (std::size_t j = 0; j < mags.size(); ++j) {
          const double tgt = std::clamp(mags[j] / denom, 0.0, 1.0);
          out[j].target.Mutable(t, f, c) = tgt;
          out[j].noise.Mutable(t, f, c) = 1.0 - tgt;
          out[j].wpe.Mutable(t, f, c) = tgt;
        }
      }
  return out;
}

MaskTensor FloorMask(const MaskTensor &m, double xi) {
  if (!(xi >= 0.0 && xi < 1.0)) throw ValidationError("floor_mask: xi must be in [0, 1)");
  MaskTensor out = m;
  for (auto &v : out.values()) v = std::max(v, xi);
  return out;
}

MaskTensor ChannelAverage(const MaskTensor &m) {
  if (m.rank() != 3) throw ShapeError("channel_average: expected a (T, F, C) mask");
  const std::size_t T = m.frames(), F = m.bins(), C = m.channels();
  MaskTensor out(m.role(), m.speaker(), {T, F});
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t f = 0; f < F; ++f) {
      double lo = m.At(t, f, 0);
      for (std::size_t c = 1; c < C; ++c) lo = std::min(lo, m.At(t, f, c));
      double acc = 0.0;
      for (std::size_t c = 0; c < C; ++c) acc += m.At(t, f, c) - lo;
      out.Mutable(t, f) = std::min(lo + acc / static_cast<double>(C), 1.0);
    }
  return out;
}

MaskTensor VadCollapse(const MaskTensor &m) {
  if (m.rank() == 1) return m;
  const std::size_t T = m.frames();
  const std::size_t per_frame = m.values().size() / T;
  MaskTensor out(m.role(), m.speaker(), {T});
  std::vector<double> row(per_frame);
  for (std::size_t t = 0; t < T; ++t) {
    const auto first = m.values().begin() + static_cast<std::ptrdiff_t>(t * per_frame);
    std::copy(first, first + static_cast<std::ptrdiff_t>(per_frame), row.begin());
    // Summing in sorted order makes the mean independent of bin order; the
    // offset from the minimum makes constant rows come back exactly.
    std::sort(row.begin(), row.end());
    double acc = 0.0;
    for (double v : row) acc += v - row.front();
    out.Mutable(t) = std::min(row.front() + acc / static_cast<double>(per_frame), 1.0);
  }
  return out;
}

MaskTensor BroadcastFrames(const MaskTensor &m, std::size_t bins) {
  if (m.rank() != 1) throw ShapeError("broadcast: expected a (T) mask");
  MaskTensor out(m.role(), m.speaker(), {m.frames(), bins});
  for (std::size_t t = 0; t < m.frames(); ++t)
    for (std::size_t f = 0; f < bins; ++f) out.Mutable(t, f) = m.At(t);
  return out;
}

TfGrid MaskWeights(const MaskTensor &m, std::size_t bins) {
  if (m.rank() == 3) throw ShapeError("mask weights: average channels first");
  if (m.rank() == 2 && m.bins() != bins)
    throw ShapeError("mask weights: mask has " + std::to_string(m.bins()) + " bins, expected " +
                     std::to_string(bins));
  TfGrid w(m.frames(), bins);
  for (std::size_t t = 0; t < m.frames(); ++t)
    for (std::size_t f = 0; f < bins; ++f) w(t, f) = m.At(t, f);
  return w;
}

std::vector<std::uint8_t> EncodeMask(const MaskTensor &m) {
  Writer w;
  for (char ch : kMagic) w.U8(static_cast<std::uint8_t>(ch));
  w.U32(kVersion);
  w.U8(static_cast<std::uint8_t>(m.role()));
  w.U8(m.speaker());
  w.U8(static_cast<std::uint8_t>(m.rank()));
  for (auto d : m.dims()) {
    if (d > std::numeric_limits<std::uint32_t>::max())
      throw ShapeError("mask: dimension does not fit in u32");
    w.U32(static_cast<std::uint32_t>(d));
  }
  for (double v : m.values()) w.F64(v);
  return std::move(w.bytes);
}

MaskTensor DecodeMask(const std::vector<std::uint8_t> &bytes) {
  Reader r(bytes);
  for (char ch : kMagic)
    if (r.U8("magic") != static_cast<std::uint8_t>(ch))
      throw ParseError("mask file: bad magic (expected \"CBMK\")");
  const auto version = r.U32("version");
  if (version != kVersion)
    throw ParseError("mask file: unsupported version " + std::to_string(version));
  const auto role = r.U8("role");
  if (role > 2) throw ParseError("mask file: unknown role " + std::to_string(role));
  const auto speaker = r.U8("speaker");
  const auto rank = r.U8("rank");
  if (rank < 1 || rank > 3) throw ParseError("mask file: invalid rank " + std::to_string(rank));
  std::vector<std::size_t> dims(rank);
  std::size_t count = 1;
  for (auto &d : dims) {
    d = r.U32("dims");
    if (d == 0) throw ParseError("mask file: zero dimension");
    if (count > std::numeric_limits<std::size_t>::max() / 8 / d)
      throw ParseError("mask file: shape overflow");
    count *= d;
  }
  if (count > r.remaining() / 8)
    throw ParseError("mask file: shape overflow (" + std::to_string(count) +
                     " values declared, file truncated)");
  std::vector<double> values(count);
  for (auto &v : values) v = r.F64("values");
  if (r.remaining() != 0) throw ParseError("mask file: trailing bytes after values");
  return MaskTensor(static_cast<MaskRole>(role), speaker, std::move(dims), std::move(values));
}

void SaveMask(const MaskTensor &m, const std::filesystem::path &path) {
  const auto bytes = EncodeMask(m);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw IoError("failed writing " + path.string());
}

MaskTensor LoadMask(const std::filesystem::path &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(is)),
                                  std::istreambuf_iterator<char>());
  try {
    return DecodeMask(bytes);
  } catch (Error &e) {
    e.set_stage("load " + path.filename().string());
    throw;
  }
}

}  // namespace convbeam
