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

#include "lpcode/stats.hpp"

#include <cmath>
#include <random>

#include "lpcode/kernels.hpp"

namespace lpcode {

void LaneCounts::add(std::span<const Word> chunk) {
  if (chunk.empty()) return;
  const auto& k = kernels::active();
  if (words > 0) {
    const Word d = static_cast<Word>(last ^ chunk.front());
    for (int b = 0; b < 8; ++b) toggles[b] += (d >> b) & 1u;
    ++pairs;
  } else {
    first = chunk.front();
  }
  k.lane_ones(chunk, ones);
  k.lane_toggles(chunk, toggles);
  words += chunk.size();
  pairs += chunk.size() - 1;
  last = chunk.back();
}

void LaneCounts::append(const LaneCounts& next) {
  if (next.words == 0) return;
  if (words > 0) {
    const Word d = static_cast<Word>(last ^ next.first);
    for (int b = 0; b < 8; ++b) toggles[b] += (d >> b) & 1u;
    ++pairs;
  } else {
    first = next.first;
  }
  combine(next);
  last = next.last;
}

void LaneCounts::combine(const LaneCounts& other) {
  for (int b = 0; b < 8; ++b) {
    ones[b] += other.ones[b];
    toggles[b] += other.toggles[b];
  }
  if (words == 0) first = other.first;
  words += other.words;
  pairs += other.pairs;
  if (other.words > 0) last = other.last;
}

BitStats finalize(const LaneCounts& counts) {
  if (counts.words == 0) throw Error(ErrorCode::EmptyStream, "cannot measure an empty stream");
  BitStats s;
  s.n_words = counts.words;
  s.switching_defined = counts.pairs > 0;
  for (int b = 0; b < 8; ++b) {
    s.lane_prob[b] = static_cast<double>(counts.ones[b]) / static_cast<double>(counts.words);
    s.total_ones += s.lane_prob[b];
    if (s.switching_defined) {
      s.lane_switching[b] = static_cast<double>(counts.toggles[b]) / static_cast<double>(counts.pairs);
      s.total_switching += s.lane_switching[b];
    }
  }
  return s;
}

BitStats measure(std::span<const Word> words) {
  LaneCounts counts;
  counts.add(words);
  return finalize(counts);
}

ReductionReport reduction_vs_random(const BitStats& stats) {
  constexpr double baseline = kBitWidth * ReductionReport::kBaseline;
  ReductionReport r;
  if (stats.switching_defined) r.switching_pct = (stats.total_switching / baseline - 1.0) * 100.0;
  r.bitprob_pct = (stats.total_ones / baseline - 1.0) * 100.0;
  return r;
}

std::array<double, 8> uncorrelated_consistency(const BitStats& stats) {
  if (!stats.switching_defined)
    throw Error(ErrorCode::EmptyStream, "switching is undefined for fewer than two words");
  std::array<double, 8> residual{};
  for (int b = 0; b < 8; ++b) {
    const double p = stats.lane_prob[b];
    residual[b] = std::abs(stats.lane_switching[b] - 2.0 * p * (1.0 - p));
  }
  return residual;
}

void shuffle_words(std::vector<Word>& words, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (std::size_t i = words.size(); i > 1; --i) {
    // modulo bias is below 2^-40 for streams shorter than 2^24 words
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(words[i - 1], words[j]);
  }
}

std::vector<SchemeResult> compare_schemes(const WordStream& stream, std::span<const CodingScheme> schemes,
                                          std::optional<std::uint64_t> shuffle_seed) {
  WordStream input = stream;
  if (shuffle_seed) shuffle_words(input.words, *shuffle_seed);
  std::vector<SchemeResult> out;
  out.reserve(schemes.size());
  for (const auto& scheme : schemes) {
    const WordStream coded = apply_scheme(scheme, input, Direction::Encode);
    SchemeResult r{scheme, measure(coded), {}};
    r.reduction = reduction_vs_random(r.stats);
    out.push_back(r);
  }
  return out;
}

}  // namespace lpcode
