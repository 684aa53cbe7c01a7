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

// Synthetic weight and activation streams following the statistical models of
// quantized CNN data: generalized-Gaussian (GG) weights, symmetric int8
// quantization, magnitude pruning, and ReLU activations with zero point -128.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lpcode/common.hpp"

namespace lpcode {

struct GGParams {
  double nu = 2.0;     ///< shape; 2 = Gaussian, 1 = Laplacian
  double sigma = 1.0;  ///< standard deviation of the real-valued samples
  std::uint64_t seed = 0;
};

/// Excess kurtosis Γ(5/ν)Γ(1/ν)/Γ(3/ν)² − 3 of GG(ν).
double gg_excess_kurtosis(double nu);

/// i.i.d. GG samples: |x| = G^(1/ν), G ~ Gamma(1/ν, 1), uniform sign, scaled to
/// standard deviation sigma. Throws InvalidParam for ν <= 0 or sigma <= 0.
std::vector<double> sample_gg(const GGParams& params, std::size_t n);

struct QuantParams {
  /// One scale per tensor, or one per channel when `axis` is set.
  std::vector<double> scales;
  std::int32_t zero_point = 0;
  std::optional<int> axis;
};

struct QuantizedTensor {
  std::vector<Word> words;  ///< int8 two's complement
  QuantParams params;
  std::vector<std::string> warnings;
};

/// S = max|v| / 127 per group, q = clamp(round(v / S), -127, 127) with
/// round-half-away-from-zero. `values` is row-major [channels, n / channels];
/// channels == 1 means per-tensor. An all-zero group gets S = 1 and a warning.
QuantizedTensor quantize_symmetric(std::span<const double> values, std::size_t channels = 1);

/// Zeroes the floor(rho * n) smallest-magnitude weights, ties by earliest
/// index. Throws InvalidParam unless 0 <= rho < 1.
std::vector<Word> prune_magnitude(std::span<const Word> weights, double rho);

/// ReLU activations with ZP = -128: x ~ N(0, sigma_pre²), q = round(max(x,0)/S) - 128,
/// saturated to int8. Every positive pre-activation maps at least one step above
/// the zero point, so exactly the non-positive ones become 0x80.
std::vector<Word> synth_relu_activations(double sigma_pre, double scale, std::size_t n, std::uint64_t seed);

/// Named weight profile: GG shape plus per-channel group length.
struct WeightPreset {
  std::string_view name;
  double nu;
  std::size_t group;
};

/// `resnet-like` and `mobilenet-like`; throws InvalidParam for unknown names.
const WeightPreset& weight_preset(std::string_view name);

/// Per-channel quantized GG weights with ceil(n / group) channels, optionally
/// magnitude-pruned.
QuantizedTensor synth_weights(double nu, std::size_t group, std::size_t n, std::uint64_t seed, double rho = 0.0);

/// Quantization step used by the default activation profile, relative to the
/// pre-activation standard deviation.
inline constexpr double kReluScaleFraction = 1.0 / 8.0;

}  // namespace lpcode
