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

#include "lpcode/macsim.hpp"

#include <cmath>
#include <limits>

#include "lpcode/codec.hpp"
#include "lpcode/kernels.hpp"

namespace lpcode {

MacVariant parse_mac_variant(std::string_view name) {
  if (name == "A" || name == "a") return MacVariant::A;
  if (name == "B" || name == "b") return MacVariant::B;
  if (name == "C" || name == "c") return MacVariant::C;
  throw Error(ErrorCode::InvalidParam, "unknown MAC variant '" + std::string(name) + "'");
}

const char* to_string(MacVariant v) noexcept {
  switch (v) {
    case MacVariant::A: return "A";
    case MacVariant::B: return "B";
    case MacVariant::C: return "C";
  }
  return "?";
}

RescaleParams RescaleParams::from_real(double m, std::int32_t effective_bias) {
  if (!(m >= 0.0 && m <= 1.0)) throw Error(ErrorCode::InvalidParam, "rescale factor must lie in [0, 1]");
  RescaleParams p;
  p.effective_bias = effective_bias;
  if (m == 0.0) return p;
  int exponent = 0;
  const double fraction = std::frexp(m, &exponent);  // m = fraction * 2^exponent, fraction in [0.5, 1)
  auto q = static_cast<std::int64_t>(std::llround(fraction * 2147483648.0));
  if (q == (std::int64_t{1} << 31)) {
    q /= 2;
    ++exponent;
  }
  int shift = 31 - exponent;
  while (shift > 62) {
    q >>= 1;
    --shift;
  }
  p.multiplier = static_cast<std::int32_t>(q);
  p.shift = shift;
  return p;
}

double RescaleParams::real_multiplier() const { return std::ldexp(static_cast<double>(multiplier), -shift); }

namespace {

void check_sm_weights(std::span<const Word> weights) {
  for (std::size_t i = 0; i < weights.size(); ++i)
    if (weights[i] == 0x80)
      throw Error(ErrorCode::InadmissibleWord, "sign-magnitude weight 0x80 at index " + std::to_string(i));
}

std::int32_t checked_int32(std::int64_t v, const char* what) {
  if (v < std::numeric_limits<std::int32_t>::min() || v > std::numeric_limits<std::int32_t>::max())
    throw Error(ErrorCode::AccumulatorOverflow, what);
  return static_cast<std::int32_t>(v);
}

}  // namespace

std::int32_t dot_accumulate(MacVariant variant, std::span<const Word> weights,
                            std::span<const Word> activations, std::int32_t bias) {
  if (weights.size() != activations.size())
    throw Error(ErrorCode::InvalidParam, "weight and activation vectors differ in length");
  if (weights.size() > kMaxDotLength)
    throw Error(ErrorCode::AccumulatorOverflow, "dot product longer than 2^16 lanes");
  const auto& k = kernels::active();
  std::int64_t sum = 0;
  switch (variant) {
    case MacVariant::A: sum = k.dot_s8s8(weights, activations); break;
    case MacVariant::B:
      check_sm_weights(weights);
      sum = k.dot_sm_s8(weights, activations);
      break;
    case MacVariant::C:
      check_sm_weights(weights);
      sum = k.dot_sm_u8(weights, activations);
      break;
  }
  return checked_int32(sum + bias, "accumulator overflow");
}

std::int32_t adjust_bias_for_unsigned(std::span<const Word> weights, std::int32_t bias) {
  std::int64_t sum = 0;
  for (const Word w : weights) sum += static_cast<std::int8_t>(w);
  return checked_int32(std::int64_t{bias} - 128 * sum, "adjusted bias overflow");
}

std::int8_t rescale_saturate(std::int32_t acc, const RescaleParams& params) {
  if (params.multiplier < 0 || params.shift < 0 || params.shift > 62)
    throw Error(ErrorCode::InvalidParam, "rescale needs multiplier >= 0 and shift in [0, 62]");
  const std::int64_t product = std::int64_t{acc} * params.multiplier;
  std::int64_t out = product;
  if (params.shift > 0) {
    // round half away from zero on the magnitude
    const std::int64_t half = std::int64_t{1} << (params.shift - 1);
    const std::int64_t mag = product < 0 ? -product : product;
    const std::int64_t rounded = (mag + half) >> params.shift;
    out = product < 0 ? -rounded : rounded;
  }
  if (out > 127) return 127;
  if (out < -128) return -128;
  return static_cast<std::int8_t>(out);
}

std::vector<Word> weights_for(MacVariant variant, std::span<const Word> int8_weights) {
  std::vector<Word> out(int8_weights.begin(), int8_weights.end());
  if (variant != MacVariant::A)
    encode_words(CodingScheme{ProbabilityStage::SignMagnitude}, int8_weights, out);
  return out;
}

std::vector<Word> activations_for(MacVariant variant, std::span<const Word> int8_activations) {
  std::vector<Word> out(int8_activations.begin(), int8_activations.end());
  if (variant == MacVariant::C)
    encode_words(CodingScheme{ProbabilityStage::XorZp, 0x80}, int8_activations, out);
  return out;
}

std::vector<std::int8_t> quantized_layer(MacVariant variant, std::span<const Word> int8_weights,
                                         std::span<const Word> int8_activations,
                                         std::span<const RescaleParams> params) {
  const std::size_t cols = int8_activations.size();
  const std::size_t rows = params.size();
  if (cols == 0 || int8_weights.size() != rows * cols)
    throw Error(ErrorCode::InvalidParam, "weight matrix does not match [rows, activations]");
  const auto weights = weights_for(variant, int8_weights);
  const auto activations = activations_for(variant, int8_activations);
  std::vector<std::int8_t> out(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto row = std::span<const Word>(weights).subspan(r * cols, cols);
    std::int32_t bias = params[r].effective_bias;
    if (variant == MacVariant::C) bias = adjust_bias_for_unsigned(int8_weights.subspan(r * cols, cols), bias);
    out[r] = rescale_saturate(dot_accumulate(variant, row, activations, bias), params[r]);
  }
  return out;
}

}  // namespace lpcode
