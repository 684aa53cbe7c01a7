// Copyright 2026 The lpcode Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace lpcode {

/// One 8-bit bus/memory word.
using Word = std::uint8_t;

/// Word width in bits. Only 8-bit words are supported.
inline constexpr int kBitWidth = 8;

enum class ErrorCode {
  InadmissibleWord,
  EmptyStream,
  DomainError,
  InvalidParam,
  AccumulatorOverflow,
  ParseError,
  SizeMismatch,
  NotFound,
  UnknownEncoding,
  DuplicateName,
  IoError,
};

const char* to_string(ErrorCode code) noexcept;

/// Validation error raised by every lpcode module. The CLI maps these to exit
/// code 1; anything else escaping is an internal error.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace lpcode
