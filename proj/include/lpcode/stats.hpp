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

// Bit-lane statistics that drive interconnect and memory power: per-lane
// switching activity t_i and 1-bit probability p_i, and their reduction
// relative to a random stream (0.5 per lane).

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lpcode/codec.hpp"

namespace lpcode {

/// Mergeable raw counts. Chunks appended in order carry their boundary pair.
struct LaneCounts {
  std::array<std::uint64_t, 8> ones{};
  std::array<std::uint64_t, 8> toggles{};
  std::uint64_t words = 0;
  std::uint64_t pairs = 0;
  Word first = 0;
  Word last = 0;

  /// Appends the next chunk of the same stream.
  void add(std::span<const Word> chunk);
  /// Appends the counts of the chunk that directly follows this one.
  void append(const LaneCounts& next);
  /// Adds the counts of an independent stream (no boundary pair).
  void combine(const LaneCounts& other);
};

struct BitStats {
  std::array<double, 8> lane_switching{};
  std::array<double, 8> lane_prob{};
  double total_switching = 0.0;  ///< T = Σ t_i, transitions per word
  double total_ones = 0.0;       ///< PR1 = Σ p_i, 1-bits per word
  std::uint64_t n_words = 0;
  /// Switching needs at least two words; t_i and T are 0 when false.
  bool switching_defined = false;

  double total_zeros() const noexcept { return kBitWidth - total_ones; }
};

struct ReductionReport {
  static constexpr double kBaseline = 0.5;
  /// Percent change vs. random; negative means a reduction (-50 == halved).
  /// Empty when switching is undefined.
  std::optional<double> switching_pct;
  double bitprob_pct = 0.0;
};

BitStats finalize(const LaneCounts& counts);

/// Throws EmptyStream for an empty stream.
BitStats measure(std::span<const Word> words);
inline BitStats measure(const WordStream& stream) { return measure(stream.words); }

ReductionReport reduction_vs_random(const BitStats& stats);

/// |t_i - 2 p_i (1 - p_i)| per lane; ~0 for temporally uncorrelated streams.
/// Throws EmptyStream when switching is undefined.
std::array<double, 8> uncorrelated_consistency(const BitStats& stats);

/// Deterministic Fisher-Yates shuffle driven by a 64-bit seed.
void shuffle_words(std::vector<Word>& words, std::uint64_t seed);

struct SchemeResult {
  CodingScheme scheme;
  BitStats stats;
  ReductionReport reduction;
};

/// Optionally shuffles (once, before coding), then encodes with each scheme
/// and measures.
std::vector<SchemeResult> compare_schemes(const WordStream& stream, std::span<const CodingScheme> schemes,
                                          std::optional<std::uint64_t> shuffle_seed = std::nullopt);

}  // namespace lpcode
