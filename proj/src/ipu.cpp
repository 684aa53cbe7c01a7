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

#include "lpcode/ipu.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <limits>
#include <string>

namespace lpcode {

ToggleReport& ToggleReport::operator+=(const ToggleReport& o) noexcept {
  input_registers += o.input_registers;
  partial_products += o.partial_products;
  row_sums += o.row_sums;
  multiplier_outputs += o.multiplier_outputs;
  negation_xor += o.negation_xor;
  adder_tree += o.adder_tree;
  cycles += o.cycles;
  return *this;
}

namespace {

constexpr std::uint32_t kMask15 = 0x7FFF;
constexpr std::uint32_t kMask16 = 0xFFFF;
constexpr std::uint32_t kTreeMask[3] = {(1u << 17) - 1, (1u << 18) - 1, (1u << 19) - 1};

inline bool bit(unsigned v, int i) { return ((v >> i) & 1u) != 0; }

struct LaneValues {
  std::uint64_t partial_products = 0;
  std::array<std::uint32_t, 6> row_sums{};
  std::uint32_t product = 0;
  std::uint32_t negated = 0;
  std::int32_t leaf = 0;  // signed value entering the adder tree
};

// Running sums of the partial-product rows as an array multiplier forms them.
// An R-row matrix needs R-1 row additions; the last one is the product node,
// so R-2 intermediate sums are recorded (6 for A, 5 for B/C).
void fill_row_sums(LaneValues& v, int rows) {
  std::uint32_t acc = 0;
  for (int i = 0; i < rows - 1; ++i) {
    const std::uint32_t row = static_cast<std::uint32_t>((v.partial_products >> (i * 8)) & 0xFFu) << i;
    acc = (acc + row) & kMask16;
    if (i >= 1) v.row_sums[i - 1] = acc;
  }
}

LaneValues evaluate_lane(MacVariant variant, Word w, Word a) {
  LaneValues v;
  if (variant == MacVariant::A) {
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j) {
        bool t = bit(w, i) && bit(a, j);
        if ((i == 7) != (j == 7)) t = !t;
        if (t) v.partial_products |= std::uint64_t{1} << (i * 8 + j);
      }
    v.leaf = static_cast<std::int8_t>(w) * static_cast<std::int8_t>(a);
    v.product = static_cast<std::uint32_t>(v.leaf) & kMask16;
    fill_row_sums(v, 8);
    return v;
  }
  const unsigned mag = w & 0x7Fu;
  const bool negative = (w & 0x80u) != 0;
  const bool signed_activation = variant == MacVariant::B;
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 8; ++j) {
      bool t = bit(mag, i) && bit(a, j);
      if (signed_activation && j == 7) t = !t;
      if (t) v.partial_products |= std::uint64_t{1} << (i * 8 + j);
    }
  const std::int32_t magnitude_product =
      static_cast<std::int32_t>(mag) * (signed_activation ? static_cast<std::int8_t>(a) : static_cast<std::int32_t>(a));
  fill_row_sums(v, 7);
  v.product = static_cast<std::uint32_t>(magnitude_product) & kMask15;
  v.negated = negative ? (v.product ^ kMask15) : v.product;
  v.leaf = negative ? -magnitude_product : magnitude_product;
  return v;
}


}  // namespace

InnerProductUnit::InnerProductUnit(MacVariant variant, IpuConfig) : variant_(variant) {
  const LaneValues zero = evaluate_lane(variant, 0, 0);
  for (auto& lane : lanes_) {
    lane.partial_products = zero.partial_products;
    lane.row_sums = zero.row_sums;
    lane.product = zero.product;
    lane.negated = zero.negated;
  }
}

void InnerProductUnit::cycle(std::span<const Word> weights, std::span<const Word> activations) {
  std::int32_t leaves[IpuConfig::kLanes]{};
  for (std::size_t l = 0; l < weights.size(); ++l) {
    LaneState& s = lanes_[l];
    const LaneValues v = evaluate_lane(variant_, weights[l], activations[l]);
    toggles_.input_registers += std::popcount(static_cast<unsigned>(s.weight ^ weights[l])) +
                                std::popcount(static_cast<unsigned>(s.activation ^ activations[l]));
    toggles_.partial_products += std::popcount(s.partial_products ^ v.partial_products);
    for (std::size_t k = 0; k < v.row_sums.size(); ++k)
      toggles_.row_sums += std::popcount(s.row_sums[k] ^ v.row_sums[k]);
    toggles_.multiplier_outputs += std::popcount(s.product ^ v.product);
    toggles_.negation_xor += std::popcount(s.negated ^ v.negated);
    s = {weights[l], activations[l], v.partial_products, v.row_sums, v.product, v.negated};
    leaves[l] = v.leaf;
  }
  std::int32_t sums[7];
  for (int n = 0; n < 4; ++n) sums[n] = leaves[2 * n] + leaves[2 * n + 1];
  sums[4] = sums[0] + sums[1];
  sums[5] = sums[2] + sums[3];
  sums[6] = sums[4] + sums[5];
  for (int n = 0; n < 7; ++n) {
    const std::uint32_t mask = kTreeMask[n < 4 ? 0 : (n < 6 ? 1 : 2)];
    const std::uint32_t node = static_cast<std::uint32_t>(sums[n]) & mask;
    toggles_.adder_tree += std::popcount(tree_[n] ^ node);
    tree_[n] = node;
  }
  ++toggles_.cycles;
  // width growth keeps every node exact; the accumulator sees the root sum
  acc_ += sums[6];
}

std::int8_t InnerProductUnit::execute(std::span<const Word> weights, std::span<const Word> activations,
                                      std::int32_t bias, const RescaleParams& rescale) {
  if (weights.size() != activations.size())
    throw Error(ErrorCode::InvalidParam, "weight and activation vectors differ in length");
  if (weights.size() > kMaxDotLength)
    throw Error(ErrorCode::AccumulatorOverflow, "dot product longer than 2^16 lanes");
  if (variant_ != MacVariant::A)
    for (std::size_t i = 0; i < weights.size(); ++i)
      if (weights[i] == 0x80)
        throw Error(ErrorCode::InadmissibleWord, "sign-magnitude weight 0x80 at index " + std::to_string(i));
  std::int64_t acc = bias;
  acc_ = 0;
  for (std::size_t i = 0; i < weights.size(); i += IpuConfig::kLanes) {
    const std::size_t n = std::min(IpuConfig::kLanes, weights.size() - i);
    cycle(weights.subspan(i, n), activations.subspan(i, n));
  }
  acc += acc_;
  if (acc < std::numeric_limits<std::int32_t>::min() || acc > std::numeric_limits<std::int32_t>::max())
    throw Error(ErrorCode::AccumulatorOverflow, "accumulator overflow");
  acc_ = static_cast<std::int32_t>(acc);
  return rescale_saturate(acc_, rescale);
}

std::pair<std::int8_t, ToggleReport> ipu_execute(MacVariant variant, const IpuConfig& config,
                                                 std::span<const Word> weights,
                                                 std::span<const Word> activations, std::int32_t bias,
                                                 const RescaleParams& rescale) {
  InnerProductUnit unit(variant, config);
  const std::int8_t out = unit.execute(weights, activations, bias, rescale);
  return {out, unit.toggles()};
}

}  // namespace lpcode
