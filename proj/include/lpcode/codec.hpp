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

// Lossless, overhead-free word codes for 8-bit quantized NN streams.
//
// A scheme is a memoryless probability stage (a per-word bijection that lowers
// the 1-bit or 0-bit probability) optionally followed by a temporal stage that
// converts minimized bit probability into minimized switching (decorrelate)
// or back (correlate). Encoding applies probability then temporal; decoding
// runs the inverses in reverse order.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lpcode/common.hpp"

namespace lpcode {

enum class ProbabilityStage { Raw, XorMsb, XnorMsb, SignMagnitude, XorZp, XnorZp };

enum class TemporalStage { None, Decorrelate, Correlate };

enum class Interpretation { TwosComplement, Unsigned, SignMag, Coded };

struct CodingScheme {
  ProbabilityStage probability = ProbabilityStage::Raw;
  /// Zero-point word, used only by XorZp/XnorZp.
  Word zp = 0;
  TemporalStage temporal = TemporalStage::None;

  /// XNOR probability stages minimize 0-bits, so the temporal stage swaps
  /// XOR for XNOR.
  bool uses_xnor() const noexcept {
    return probability == ProbabilityStage::XnorMsb || probability == ProbabilityStage::XnorZp;
  }

  /// Reset value of the temporal stage register: 0x00 for XOR, 0xFF for XNOR,
  /// so an idle stream produces no transitions from reset.
  Word reset_state() const noexcept { return uses_xnor() ? Word{0xFF} : Word{0x00}; }

  /// Parses names like `raw`, `xor-msb`, `sm`, `xnor-zp+decorr`, `xor-msb+corr`.
  /// The zero point is supplied by the caller (tensor metadata).
  static CodingScheme parse(std::string_view name, Word zp = 0);

  /// Canonical name; parse(name(), zp) round-trips.
  std::string name() const;

  friend bool operator==(const CodingScheme&, const CodingScheme&) = default;
};

struct WordStream {
  std::vector<Word> words;
  Interpretation interpretation = Interpretation::TwosComplement;

  std::size_t size() const noexcept { return words.size(); }
  friend bool operator==(const WordStream&, const WordStream&) = default;
};

struct LaneState {
  /// Previous output (decorrelator) or previous input (correlator).
  Word prev = 0;
};

/// Probability stage only; the scheme's temporal stage is ignored.
Word encode_word(const CodingScheme& scheme, Word w);
Word decode_word(const CodingScheme& scheme, Word w);

/// In-place probability stage over a span; throws InadmissibleWord with the
/// offending index for sign-magnitude.
void encode_words(const CodingScheme& scheme, std::span<const Word> in, std::span<Word> out);
void decode_words(const CodingScheme& scheme, std::span<const Word> in, std::span<Word> out);

/// y_t = y_{t-1} ^ x_t (XNOR variant: complemented). `state` carries y across
/// calls so a stream may be processed in chunks.
WordStream decorrelate_stream(const WordStream& stream, LaneState& state, bool use_xnor);

/// x_t = y_{t-1} ^ y_t (XNOR variant: complemented); exact inverse of
/// decorrelate_stream for the same initial state.
WordStream correlate_stream(const WordStream& stream, LaneState& state, bool use_xnor);

enum class Direction { Encode, Decode };

/// Full scheme, temporal state reset to scheme.reset_state().
WordStream apply_scheme(const CodingScheme& scheme, const WordStream& stream, Direction direction);

}  // namespace lpcode
