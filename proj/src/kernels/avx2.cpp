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

#include <immintrin.h>

#include <bit>

#include "lpcode/kernels.hpp"

namespace lpcode::kernels {
namespace {

constexpr std::size_t A = 32;

inline __m256i load(const Word* p) { return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p)); }
inline void store(Word* p, __m256i v) { _mm256_storeu_si256(reinterpret_cast<__m256i*>(p), v); }

void xor_msb(ConstWords in, MutWords out, bool xnor) {
  const std::size_t n = in.size();
  const __m256i zero = _mm256_setzero_si256();
  const __m256i lsb7 = _mm256_set1_epi8(0x7F);
  std::size_t i = 0;
  for (; i + A <= n; i += A) {
    const __m256i v = load(in.data() + i);
    const __m256i neg = _mm256_cmpgt_epi8(zero, v);
    const __m256i mask = xnor ? _mm256_andnot_si256(neg, lsb7) : _mm256_and_si256(neg, lsb7);
    store(out.data() + i, _mm256_xor_si256(v, mask));
  }
  scalar().xor_msb(in.subspan(i), out.subspan(i), xnor);
}

void xor_const(ConstWords in, MutWords out, Word c) {
  const std::size_t n = in.size();
  const __m256i k = _mm256_set1_epi8(static_cast<char>(c));
  std::size_t i = 0;
  for (; i + A <= n; i += A) store(out.data() + i, _mm256_xor_si256(load(in.data() + i), k));
  scalar().xor_const(in.subspan(i), out.subspan(i), c);
}

std::size_t first_set(__m256i bad) {
  return static_cast<std::size_t>(std::countr_zero(static_cast<std::uint32_t>(_mm256_movemask_epi8(bad))));
}

std::size_t sm_encode(ConstWords in, MutWords out) {
  const std::size_t n = in.size();
  const __m256i min8 = _mm256_set1_epi8(static_cast<char>(0x80));
  std::size_t i = 0;
  for (; i + A <= n; i += A) {
    const __m256i v = load(in.data() + i);
    const __m256i bad = _mm256_cmpeq_epi8(v, min8);
    if (!_mm256_testz_si256(bad, bad)) return i + first_set(bad);
    store(out.data() + i, _mm256_or_si256(_mm256_abs_epi8(v), _mm256_and_si256(v, min8)));
  }
  const std::size_t tail = scalar().sm_encode(in.subspan(i), out.subspan(i));
  return tail == kAllAdmissible ? tail : i + tail;
}

std::size_t sm_decode(ConstWords in, MutWords out) {
  const std::size_t n = in.size();
  const __m256i zero = _mm256_setzero_si256();
  const __m256i min8 = _mm256_set1_epi8(static_cast<char>(0x80));
  const __m256i lsb7 = _mm256_set1_epi8(0x7F);
  std::size_t i = 0;
  for (; i + A <= n; i += A) {
    const __m256i v = load(in.data() + i);
    const __m256i bad = _mm256_cmpeq_epi8(v, min8);
    if (!_mm256_testz_si256(bad, bad)) return i + first_set(bad);
    const __m256i neg = _mm256_cmpgt_epi8(zero, v);
    const __m256i mag = _mm256_and_si256(v, lsb7);
    // (mag ^ -1) - (-1) == -mag where negative, mag otherwise
    store(out.data() + i, _mm256_sub_epi8(_mm256_xor_si256(mag, neg), neg));
  }
  const std::size_t tail = scalar().sm_decode(in.subspan(i), out.subspan(i));
  return tail == kAllAdmissible ? tail : i + tail;
}

Word prefix_xor(ConstWords in, MutWords out, Word state, Word invert) {
  const std::size_t n = in.size();
  const __m256i inv = _mm256_set1_epi8(static_cast<char>(invert));
  const __m256i byte15 = _mm256_set1_epi8(15);
  __m256i carry = _mm256_set1_epi8(static_cast<char>(state));
  std::size_t i = 0;
  for (; i + A <= n; i += A) {
    __m256i x = _mm256_xor_si256(load(in.data() + i), inv);
    // inclusive prefix inside each 128-bit lane
    x = _mm256_xor_si256(x, _mm256_slli_si256(x, 1));
    x = _mm256_xor_si256(x, _mm256_slli_si256(x, 2));
    x = _mm256_xor_si256(x, _mm256_slli_si256(x, 4));
    x = _mm256_xor_si256(x, _mm256_slli_si256(x, 8));
    // fold the low lane's total into the high lane
    const __m256i totals = _mm256_shuffle_epi8(x, byte15);
    x = _mm256_xor_si256(x, _mm256_permute2x128_si256(totals, totals, 0x08));
    x = _mm256_xor_si256(x, carry);
    store(out.data() + i, x);
    const __m256i last = _mm256_shuffle_epi8(x, byte15);
    carry = _mm256_permute2x128_si256(last, last, 0x11);
  }
  if (i > 0) state = out[i - 1];
  return scalar().prefix_xor(in.subspan(i), out.subspan(i), state, invert);
}

Word adjacent_xor(ConstWords in, MutWords out, Word state, Word invert) {
  const std::size_t n = in.size();
  if (n == 0) return state;
  out[0] = static_cast<Word>(in[0] ^ state ^ invert);
  const __m256i inv = _mm256_set1_epi8(static_cast<char>(invert));
  std::size_t i = 1;
  for (; i + A <= n; i += A) {
    const __m256i d = _mm256_xor_si256(load(in.data() + i), load(in.data() + i - 1));
    store(out.data() + i, _mm256_xor_si256(d, inv));
  }
  return scalar().adjacent_xor(in.subspan(i), out.subspan(i), in[i - 1], invert);
}

// Moves bit b of every byte to the byte's sign position and counts them.
inline void count_bits(__m256i v, std::array<std::uint64_t, 8>& acc) {
  acc[7] += std::popcount(static_cast<std::uint32_t>(_mm256_movemask_epi8(v)));
  acc[6] += std::popcount(static_cast<std::uint32_t>(_mm256_movemask_epi8(_mm256_slli_epi16(v, 1))));
  acc[5] += std::popcount(static_cast<std::uint32_t>(_mm256_movemask_epi8(_mm256_slli_epi16(v, 2))));
  acc[4] += std::popcount(static_cast<std::uint32_t>(_mm256_movemask_epi8(_mm256_slli_epi16(v, 3))));
  acc[3] += std::popcount(static_cast<std::uint32_t>(_mm256_movemask_epi8(_mm256_slli_epi16(v, 4))));
  acc[2] += std::popcount(static_cast<std::uint32_t>(_mm256_movemask_epi8(_mm256_slli_epi16(v, 5))));
  acc[1] += std::popcount(static_cast<std::uint32_t>(_mm256_movemask_epi8(_mm256_slli_epi16(v, 6))));
  acc[0] += std::popcount(static_cast<std::uint32_t>(_mm256_movemask_epi8(_mm256_slli_epi16(v, 7))));
}

void lane_ones(ConstWords in, std::array<std::uint64_t, 8>& ones) {
  const std::size_t n = in.size();
  std::size_t i = 0;
  for (; i + A <= n; i += A) count_bits(load(in.data() + i), ones);
  scalar().lane_ones(in.subspan(i), ones);
}

void lane_toggles(ConstWords in, std::array<std::uint64_t, 8>& toggles) {
  const std::size_t n = in.size();
  if (n < 2) return;
  std::size_t i = 1;
  for (; i + A <= n; i += A)
    count_bits(_mm256_xor_si256(load(in.data() + i), load(in.data() + i - 1)), toggles);
  scalar().lane_toggles(in.subspan(i - 1), toggles);
}

inline std::int64_t hsum_epi32(__m256i v) {
  const __m128i s = _mm_add_epi32(_mm256_castsi256_si128(v), _mm256_extracti128_si256(v, 1));
  alignas(16) std::int32_t lanes[4];
  _mm_store_si128(reinterpret_cast<__m128i*>(lanes), s);
  return std::int64_t{lanes[0]} + lanes[1] + lanes[2] + lanes[3];
}

inline __m128i load16(const Word* p) { return _mm_loadu_si128(reinterpret_cast<const __m128i*>(p)); }

std::int64_t dot_s8s8(ConstWords w, ConstWords a) {
  const std::size_t n = w.size();
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    const __m256i w16 = _mm256_cvtepi8_epi16(load16(w.data() + i));
    const __m256i a16 = _mm256_cvtepi8_epi16(load16(a.data() + i));
    acc = _mm256_add_epi32(acc, _mm256_madd_epi16(w16, a16));
  }
  return hsum_epi32(acc) + scalar().dot_s8s8(w.subspan(i), a.subspan(i));
}

// sign_epi16 by (w | 1) negates where the SM sign bit is set and never zeroes.
std::int64_t dot_sm_s8(ConstWords w, ConstWords a) {
  const std::size_t n = w.size();
  const __m256i lsb7 = _mm256_set1_epi16(0x7F);
  const __m256i one = _mm256_set1_epi16(1);
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    const __m256i ws = _mm256_cvtepi8_epi16(load16(w.data() + i));
    const __m256i mag = _mm256_and_si256(ws, lsb7);
    const __m256i a16 = _mm256_sign_epi16(_mm256_cvtepi8_epi16(load16(a.data() + i)), _mm256_or_si256(ws, one));
    acc = _mm256_add_epi32(acc, _mm256_madd_epi16(mag, a16));
  }
  return hsum_epi32(acc) + scalar().dot_sm_s8(w.subspan(i), a.subspan(i));
}

std::int64_t dot_sm_u8(ConstWords w, ConstWords a) {
  const std::size_t n = w.size();
  const __m256i lsb7 = _mm256_set1_epi16(0x7F);
  const __m256i one = _mm256_set1_epi16(1);
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    const __m256i ws = _mm256_cvtepi8_epi16(load16(w.data() + i));
    const __m256i mag = _mm256_sign_epi16(_mm256_and_si256(ws, lsb7), _mm256_or_si256(ws, one));
    const __m256i u16 = _mm256_cvtepu8_epi16(load16(a.data() + i));
    acc = _mm256_add_epi32(acc, _mm256_madd_epi16(mag, u16));
  }
  return hsum_epi32(acc) + scalar().dot_sm_u8(w.subspan(i), a.subspan(i));
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable table{
      "avx2",       xor_msb,   xor_const,    sm_encode, sm_decode, prefix_xor,
      adjacent_xor, lane_ones, lane_toggles, dot_s8s8,  dot_sm_s8, dot_sm_u8,
  };
  return table;
}

}  // namespace lpcode::kernels
