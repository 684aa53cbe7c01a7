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

// Pattern entropy of a word stream and the coding lower bound it implies:
// no lossless code can push the expected transitions (or expected 1-bits, or
// 0-bits) per word below B * H_inv(H / B).

#include <array>
#include <cstdint>
#include <span>

#include "lpcode/codec.hpp"

namespace lpcode {

/// 256-bin word histogram; chunk-mergeable.
struct Histogram {
  std::array<std::uint64_t, 256> bins{};
  std::uint64_t total = 0;

  void add(std::span<const Word> words);
  void merge(const Histogram& other);
  /// Maximum-likelihood Shannon entropy in bits/word (no bias correction).
  double entropy() const;
};

/// Empirical Shannon entropy of the word distribution, bits/word in [0, 8].
double pattern_entropy(std::span<const Word> words);

/// H(p) = -p log2 p - (1-p) log2 (1-p), with H(0) = H(1) = 0.
double binary_entropy(double p);

/// Inverse of H on [0, 0.5] by bisection. Throws DomainError outside [0, 1].
double binary_entropy_inverse(double h);

/// B * H_inv(H / B). Throws DomainError unless 0 <= H <= B.
double transition_lower_bound(double entropy_bits, int bit_width = kBitWidth);

struct EntropyBound {
  double pattern_entropy = 0.0;
  double bound = 0.0;
};

struct BoundGapReport {
  double pattern_entropy = 0.0;  ///< of the uncoded source stream
  double bound = 0.0;
  double measured_transitions = 0.0;  ///< T of the coded stream (0 if undefined)
  double measured_min_ones_zeros = 0.0;  ///< min(PR1, PR0) of the coded stream
  double transition_gap = 0.0;
  double bitprob_gap = 0.0;
  bool switching_defined = false;
};

EntropyBound entropy_bound(std::span<const Word> words);

/// Encodes `stream` with `scheme` and compares the coded statistics with the
/// bound of the source's pattern entropy.
BoundGapReport bound_gap_report(const WordStream& stream, const CodingScheme& scheme);

}  // namespace lpcode
