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

#ifndef CONVBEAM_ERROR_H_
#define CONVBEAM_ERROR_H_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace convbeam {

// Base of every error raised by the library. Carries optional pipeline
// context (stage name, frequency bin) that callers attach while the
// exception propagates; what() always reflects the current context.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string &message);

  const char *what() const noexcept override { return formatted_.c_str(); }
  const std::string &message() const { return message_; }

  const std::optional<std::size_t> &bin() const { return bin_; }
  const std::string &stage() const { return stage_; }

  void set_bin(std::size_t bin);
  void set_stage(const std::string &stage);

 private:
  void Reformat();

  std::string message_;
  std::string stage_;
  std::optional<std::size_t> bin_;
  std::string formatted_;
};

// Pivot fell under the singularity threshold in a real-embedding elimination.
class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

// Power iteration produced a vanishing iterate.
class ZeroVectorError : public Error {
 public:
  using Error::Error;
};

// Inconsistent dimensions between operands.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Input that violates a documented precondition (NaN entries, out-of-range
// parameters, mask values outside [0, 1], ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Malformed file contents (mask files, WAV, config, manifests).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Degenerate statistics: vanishing weight sums, traces or denominators.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

// Not enough STFT frames for the requested prediction filter.
class TooFewFramesError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace convbeam

#endif  // CONVBEAM_ERROR_H_
