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

// Data-parallel inner loops. Every kernel has a scalar reference
// implementation; vectorized variants must produce bit-identical results and
// are picked once at startup based on the running CPU.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

#include "lpcode/common.hpp"

namespace lpcode::kernels {

using ConstWords = std::span<const Word>;
using MutWords = std::span<Word>;

/// Returned by the sign-magnitude kernels when every word was admissible.
inline constexpr std::size_t kAllAdmissible = static_cast<std::size_t>(-1);

struct KernelTable {
  const char* name;

  /// out = in ^ (msb ? 0x7F : 0), or with the mask complemented when `xnor`.
  void (*xor_msb)(ConstWords in, MutWords out, bool xnor);
  /// out = in ^ c.
  void (*xor_const)(ConstWords in, MutWords out, Word c);
  /// Two's complement -> sign-magnitude. Returns the index of the first 0x80
  /// word or kAllAdmissible.
  std::size_t (*sm_encode)(ConstWords in, MutWords out);
  /// Sign-magnitude -> two's complement, rejecting 0x80 the same way.
  std::size_t (*sm_decode)(ConstWords in, MutWords out);
  /// y_t = y_{t-1} ^ x_t ^ invert with y_{-1} = state. Returns the last output
  /// (or `state` for empty input).
  Word (*prefix_xor)(ConstWords in, MutWords out, Word state, Word invert);
  /// y_t = x_t ^ x_{t-1} ^ invert with x_{-1} = state. Returns the last input.
  /// `out` must not alias `in`.
  Word (*adjacent_xor)(ConstWords in, MutWords out, Word state, Word invert);
  /// ones[b] += number of words with bit b set.
  void (*lane_ones)(ConstWords in, std::array<std::uint64_t, 8>& ones);
  /// toggles[b] += number of consecutive pairs inside `in` differing in bit b.
  void (*lane_toggles)(ConstWords in, std::array<std::uint64_t, 8>& toggles);
  /// Σ int8(w) * int8(a). Lengths up to 2^16.
  std::int64_t (*dot_s8s8)(ConstWords w, ConstWords a);
  /// Σ ±mag7(w) * int8(a), sign taken from bit 7 of w. Caller rejects 0x80.
  std::int64_t (*dot_sm_s8)(ConstWords w, ConstWords a);
  /// Σ ±mag7(w) * uint8(a), sign taken from bit 7 of w. Caller rejects 0x80.
  std::int64_t (*dot_sm_u8)(ConstWords w, ConstWords a);
};

const KernelTable& scalar();

/// AVX2 table, or nullptr when not compiled in or not supported by the CPU.
const KernelTable* avx2();

/// Table used by the library. Chosen on first use: the best supported variant,
/// unless LPCODE_KERNELS=scalar|avx2 forces one.
const KernelTable& active();

}  // namespace lpcode::kernels
