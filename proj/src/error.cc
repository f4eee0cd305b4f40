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

#include "convbeam/error.h"

namespace convbeam {

Error::Error(const std::string &message)
    : std::runtime_error(message), message_(message) {
  Reformat();
}

void Error::set_bin(std::size_t bin) {
  bin_ = bin;
  Reformat();
}

void Error::set_stage(const std::string &stage) {
  stage_ = stage;
  Reformat();
}

void Error::Reformat() {
  formatted_.clear();
  if (!stage_.empty()) formatted_ += "[" + stage_ + "] ";
  if (bin_) formatted_ += "frequency bin " + std::to_string(*bin_) + ": ";
  formatted_ += message_;
}

}  // namespace convbeam
