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

// Bit-accurate full-integer MAC execution for three operand encodings:
//   A: int8 weight x int8 activation (two's complement)
//   B: sign-magnitude weight (uint7 + sign) x int8 activation
//   C: sign-magnitude weight x uint8 activation (XOR-ZP coded, ZP = -128)
// B and C select add/subtract from the weight sign instead of multiplying
// signed operands; with the compile-time bias adjustment for C all three give
// identical accumulators.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lpcode/common.hpp"

namespace lpcode {

enum class MacVariant { A, B, C };

MacVariant parse_mac_variant(std::string_view name);
const char* to_string(MacVariant v) noexcept;

/// Longest vector accepted without risking 32-bit accumulator overflow.
inline constexpr std::size_t kMaxDotLength = std::size_t{1} << 16;

/// Requantization: out = sat8(round_half_away(acc * multiplier / 2^shift)).
struct RescaleParams {
  std::int32_t multiplier = 0;
  int shift = 0;
  std::int32_t effective_bias = 0;

  /// Q-format encoding of a real factor M in [0, 1]: multiplier in
  /// [2^30, 2^31) with shift up to 62, or zero for M == 0.
  static RescaleParams from_real(double m, std::int32_t effective_bias = 0);
  double real_multiplier() const;
};

/// Σ w·a + bias for the variant's operand encoding. For C the bias must come
/// from adjust_bias_for_unsigned. Throws InadmissibleWord for an SM weight of
/// 0x80, InvalidParam on length mismatch, AccumulatorOverflow when the length
/// exceeds kMaxDotLength or the bias pushes the sum out of int32.
std::int32_t dot_accumulate(MacVariant variant, std::span<const Word> weights,
                            std::span<const Word> activations, std::int32_t bias);

/// bias - 128·Σw for decoded int8 weights; makes C agree with A.
std::int32_t adjust_bias_for_unsigned(std::span<const Word> weights, std::int32_t bias);

std::int8_t rescale_saturate(std::int32_t acc, const RescaleParams& params);

/// Converts an int8 weight/activation pair into the operand encoding used by
/// `variant` (SM weights for B/C, XOR-ZP activations for C).
std::vector<Word> weights_for(MacVariant variant, std::span<const Word> int8_weights);
std::vector<Word> activations_for(MacVariant variant, std::span<const Word> int8_activations);

/// Row-major int8 weights [rows, activations.size()], int8 activations and one
/// RescaleParams per row whose effective bias is expressed for variant A.
/// Operands and biases are converted for `variant` before execution, so every
/// variant returns the same outputs.
std::vector<std::int8_t> quantized_layer(MacVariant variant, std::span<const Word> int8_weights,
                                         std::span<const Word> int8_activations,
                                         std::span<const RescaleParams> params);

}  // namespace lpcode
