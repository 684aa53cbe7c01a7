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

#include "lpcode/entropy.hpp"

#include <algorithm>
#include <cmath>

#include "lpcode/stats.hpp"

namespace lpcode {

void Histogram::add(std::span<const Word> words) {
  // four sub-histograms break the store-to-load dependency on repeated words
  std::array<std::array<std::uint32_t, 256>, 4> sub{};
  std::size_t i = 0;
  constexpr std::size_t kFlush = std::size_t{1} << 30;
  while (i < words.size()) {
    const std::size_t end = std::min(words.size(), i + kFlush);
    for (; i + 4 <= end; i += 4) {
      ++sub[0][words[i]];
      ++sub[1][words[i + 1]];
      ++sub[2][words[i + 2]];
      ++sub[3][words[i + 3]];
    }
    for (; i < end; ++i) ++sub[0][words[i]];
    for (int s = 0; s < 4; ++s)
      for (int b = 0; b < 256; ++b) {
        bins[b] += sub[s][b];
        sub[s][b] = 0;
      }
  }
  total += words.size();
}

void Histogram::merge(const Histogram& other) {
  for (int b = 0; b < 256; ++b) bins[b] += other.bins[b];
  total += other.total;
}

double Histogram::entropy() const {
  if (total == 0) throw Error(ErrorCode::EmptyStream, "entropy of an empty stream");
  const double n = static_cast<double>(total);
  double h = 0.0;
  for (const auto c : bins) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    h -= p * std::log2(p);
  }
  return std::clamp(h, 0.0, 8.0);
}

double pattern_entropy(std::span<const Word> words) {
  Histogram hist;
  hist.add(words);
  return hist.entropy();
}

double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double binary_entropy_inverse(double h) {
  if (!(h >= 0.0 && h <= 1.0)) throw Error(ErrorCode::DomainError, "binary entropy must lie in [0, 1]");
  if (h == 0.0) return 0.0;
  if (h == 1.0) return 0.5;
  double lo = 0.0;
  double hi = 0.5;
  // H is strictly increasing on [0, 0.5]; bisect until the bracket collapses
  while (true) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (binary_entropy(mid) < h) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::abs(binary_entropy(lo) - h) <= std::abs(binary_entropy(hi) - h) ? lo : hi;
}

double transition_lower_bound(double entropy_bits, int bit_width) {
  if (bit_width <= 0) throw Error(ErrorCode::DomainError, "bit width must be positive");
  if (!(entropy_bits >= 0.0 && entropy_bits <= bit_width))
    throw Error(ErrorCode::DomainError, "pattern entropy must lie in [0, B]");
  return bit_width * binary_entropy_inverse(entropy_bits / bit_width);
}

EntropyBound entropy_bound(std::span<const Word> words) {
  EntropyBound b;
  b.pattern_entropy = pattern_entropy(words);
  b.bound = transition_lower_bound(b.pattern_entropy);
  return b;
}

BoundGapReport bound_gap_report(const WordStream& stream, const CodingScheme& scheme) {
  const EntropyBound source = entropy_bound(stream.words);
  const BitStats coded = measure(apply_scheme(scheme, stream, Direction::Encode));
  BoundGapReport r;
  r.pattern_entropy = source.pattern_entropy;
  r.bound = source.bound;
  r.switching_defined = coded.switching_defined;
  r.measured_transitions = coded.total_switching;
  r.measured_min_ones_zeros = std::min(coded.total_ones, coded.total_zeros());
  r.transition_gap = r.measured_transitions - r.bound;
  r.bitprob_gap = r.measured_min_ones_zeros - r.bound;
  return r;
}

}  // namespace lpcode
