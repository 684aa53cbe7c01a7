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

// Eight-lane inner-product unit (IPU): eight multipliers feeding a pairwise
// adder tree and a 32-bit accumulator, one 8-lane issue per cycle.
//
// Besides computing the result, the unit keeps the stable value of every
// modeled node from the previous cycle and counts Hamming distances between
// consecutive cycles. This toggle count is a switching-energy proxy; glitches
// inside carry chains are not modeled, so only relative orderings between
// variants are meaningful.
//
// Modeled nodes per lane:
//   input registers   weight word and activation word as presented
//   partial products  AND terms of the multiplier array; variant A uses the
//                     8x8 Baugh-Wooley form (complemented sign-row/column
//                     terms), B uses 7x8 with a complemented activation-sign
//                     column, C uses a plain 7x8 unsigned array
//   row sums          running sums of the partial-product rows (16 bits) as
//                     an array multiplier adds them; R rows give R-2
//                     intermediate sums, 6 for A and 5 for B/C
//   multiplier out    16-bit product (A), 15-bit magnitude product (B, C)
//   negation XOR      15-bit product XOR weight sign (B, C only); the sign
//                     bits enter the tree as carry-ins
// Adder tree: 4 + 2 + 1 node sums (17/18/19 bits). The accumulator register
// is not part of the proxy. All nodes reset to their zero-operand values.
// The negation XOR stage is attributed to the multiplier component.

#include <array>
#include <cstdint>
#include <span>
#include <utility>

#include "lpcode/macsim.hpp"

namespace lpcode {

struct IpuConfig {
  static constexpr std::size_t kLanes = 8;
  static constexpr int kAccumulatorBits = 32;
};

struct ToggleReport {
  std::uint64_t input_registers = 0;
  std::uint64_t partial_products = 0;
  std::uint64_t row_sums = 0;
  std::uint64_t multiplier_outputs = 0;
  std::uint64_t negation_xor = 0;
  std::uint64_t adder_tree = 0;
  std::uint64_t cycles = 0;

  std::uint64_t multiplier() const noexcept {
    return input_registers + partial_products + row_sums + multiplier_outputs + negation_xor;
  }
  std::uint64_t total() const noexcept { return multiplier() + adder_tree; }

  ToggleReport& operator+=(const ToggleReport& o) noexcept;
};

class InnerProductUnit {
 public:
  explicit InnerProductUnit(MacVariant variant, IpuConfig config = {});

  /// Runs one dot product (operands already in the variant's encoding, bias
  /// already adjusted for C) and rescales. The vector is zero-padded to a
  /// multiple of 8; padded lanes are clock-gated and excluded from toggles.
  std::int8_t execute(std::span<const Word> weights, std::span<const Word> activations, std::int32_t bias,
                      const RescaleParams& rescale);

  /// Accumulator value of the last execute().
  std::int32_t last_accumulator() const noexcept { return acc_; }
  const ToggleReport& toggles() const noexcept { return toggles_; }
  MacVariant variant() const noexcept { return variant_; }

 private:
  struct LaneState {
    Word weight = 0;
    Word activation = 0;
    std::uint64_t partial_products = 0;
    std::array<std::uint32_t, 6> row_sums{};
    std::uint32_t product = 0;
    std::uint32_t negated = 0;
  };

  void cycle(std::span<const Word> weights, std::span<const Word> activations);

  MacVariant variant_;
  LaneState lanes_[IpuConfig::kLanes]{};
  std::uint32_t tree_[7]{};
  std::int32_t acc_ = 0;
  ToggleReport toggles_;
};

/// Fresh unit, single dot product.
std::pair<std::int8_t, ToggleReport> ipu_execute(MacVariant variant, const IpuConfig& config,
                                                 std::span<const Word> weights,
                                                 std::span<const Word> activations, std::int32_t bias,
                                                 const RescaleParams& rescale);

}  // namespace lpcode
