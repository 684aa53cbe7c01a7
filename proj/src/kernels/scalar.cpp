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

#include <bit>

#include "lpcode/kernels.hpp"

namespace lpcode::kernels {
namespace {

void xor_msb(ConstWords in, MutWords out, bool xnor) {
  for (std::size_t i = 0; i < in.size(); ++i) {
    const bool msb = (in[i] & 0x80) != 0;
    const Word mask = (msb != xnor) ? 0x7F : 0x00;
    out[i] = static_cast<Word>(in[i] ^ mask);
  }
}

void xor_const(ConstWords in, MutWords out, Word c) {
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = static_cast<Word>(in[i] ^ c);
}

std::size_t sm_encode(ConstWords in, MutWords out) {
  for (std::size_t i = 0; i < in.size(); ++i) {
    const int v = static_cast<std::int8_t>(in[i]);
    if (v == -128) return i;
    out[i] = v < 0 ? static_cast<Word>(0x80 | -v) : static_cast<Word>(v);
  }
  return kAllAdmissible;
}

std::size_t sm_decode(ConstWords in, MutWords out) {
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (in[i] == 0x80) return i;
    const int mag = in[i] & 0x7F;
    out[i] = static_cast<Word>((in[i] & 0x80) ? -mag : mag);
  }
  return kAllAdmissible;
}

Word prefix_xor(ConstWords in, MutWords out, Word state, Word invert) {
  for (std::size_t i = 0; i < in.size(); ++i) {
    state = static_cast<Word>(state ^ in[i] ^ invert);
    out[i] = state;
  }
  return state;
}

Word adjacent_xor(ConstWords in, MutWords out, Word state, Word invert) {
  for (std::size_t i = 0; i < in.size(); ++i) {
    const Word x = in[i];
    out[i] = static_cast<Word>(x ^ state ^ invert);
    state = x;
  }
  return state;
}

void lane_ones(ConstWords in, std::array<std::uint64_t, 8>& ones) {
  for (const Word w : in)
    for (int b = 0; b < 8; ++b) ones[b] += (w >> b) & 1u;
}

void lane_toggles(ConstWords in, std::array<std::uint64_t, 8>& toggles) {
  for (std::size_t i = 1; i < in.size(); ++i) {
    const Word d = static_cast<Word>(in[i] ^ in[i - 1]);
    for (int b = 0; b < 8; ++b) toggles[b] += (d >> b) & 1u;
  }
}

std::int64_t dot_s8s8(ConstWords w, ConstWords a) {
  std::int64_t acc = 0;
  for (std::size_t i = 0; i < w.size(); ++i)
    acc += static_cast<std::int8_t>(w[i]) * static_cast<std::int8_t>(a[i]);
  return acc;
}

// Unsigned magnitude product followed by a sign-selected add or subtract.
std::int64_t dot_sm_s8(ConstWords w, ConstWords a) {
  std::int64_t acc = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const std::int64_t p = (w[i] & 0x7F) * static_cast<std::int8_t>(a[i]);
    acc = (w[i] & 0x80) ? acc - p : acc + p;
  }
  return acc;
}

std::int64_t dot_sm_u8(ConstWords w, ConstWords a) {
  std::int64_t acc = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const std::int64_t p = (w[i] & 0x7F) * a[i];
    acc = (w[i] & 0x80) ? acc - p : acc + p;
  }
  return acc;
}

}  // namespace

const KernelTable& scalar() {
  static const KernelTable table{
      "scalar",     xor_msb,   xor_const,    sm_encode, sm_decode, prefix_xor,
      adjacent_xor, lane_ones, lane_toggles, dot_s8s8,  dot_sm_s8, dot_sm_u8,
  };
  return table;
}

}  // namespace lpcode::kernels
