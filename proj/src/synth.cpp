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

#include "lpcode/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>

namespace lpcode {

double gg_excess_kurtosis(double nu) {
  if (!(nu > 0.0)) throw Error(ErrorCode::InvalidParam, "GG shape must be positive");
  return std::exp(std::lgamma(5.0 / nu) + std::lgamma(1.0 / nu) - 2.0 * std::lgamma(3.0 / nu)) - 3.0;
}

std::vector<double> sample_gg(const GGParams& params, std::size_t n) {
  if (!(params.nu > 0.0)) throw Error(ErrorCode::InvalidParam, "GG shape must be positive");
  if (!(params.sigma > 0.0)) throw Error(ErrorCode::InvalidParam, "GG sigma must be positive");
  std::mt19937_64 rng(params.seed);
  std::gamma_distribution<double> gamma(1.0 / params.nu, 1.0);
  // E|x|^2 of G^(1/ν) is Γ(3/ν)/Γ(1/ν); normalize to unit variance
  const double unit = std::exp(0.5 * (std::lgamma(1.0 / params.nu) - std::lgamma(3.0 / params.nu)));
  const double k = params.sigma * unit;
  const double inv_nu = 1.0 / params.nu;
  std::vector<double> out(n);
  for (auto& x : out) {
    const double mag = std::pow(gamma(rng), inv_nu);
    x = (rng() & 1u) ? -k * mag : k * mag;
  }
  return out;
}

QuantizedTensor quantize_symmetric(std::span<const double> values, std::size_t channels) {
  if (channels == 0 || values.size() % channels != 0)
    throw Error(ErrorCode::InvalidParam, "value count must be a multiple of the channel count");
  QuantizedTensor t;
  t.words.resize(values.size());
  t.params.zero_point = 0;
  if (channels > 1) t.params.axis = 0;
  const std::size_t group = values.size() / channels;
  for (std::size_t c = 0; c < channels; ++c) {
    const auto v = values.subspan(c * group, group);
    double max_abs = 0.0;
    for (const double x : v) max_abs = std::max(max_abs, std::abs(x));
    double scale = max_abs / 127.0;
    if (!(scale > 0.0)) {
      scale = 1.0;
      t.warnings.push_back("quantization group " + std::to_string(c) + " is all zeros; using scale 1");
    }
    t.params.scales.push_back(scale);
    for (std::size_t i = 0; i < group; ++i) {
      const double q = std::clamp(std::round(v[i] / scale), -127.0, 127.0);
      t.words[c * group + i] = static_cast<Word>(static_cast<std::int8_t>(q));
    }
  }
  return t;
}

std::vector<Word> prune_magnitude(std::span<const Word> weights, double rho) {
  if (!(rho >= 0.0 && rho < 1.0)) throw Error(ErrorCode::InvalidParam, "pruning fraction must lie in [0, 1)");
  std::vector<Word> out(weights.begin(), weights.end());
  const auto count = static_cast<std::size_t>(std::floor(rho * static_cast<double>(weights.size())));
  if (count == 0) return out;
  auto magnitude = [](Word w) { return std::abs(static_cast<int>(static_cast<std::int8_t>(w))); };
  std::array<std::size_t, 129> histogram{};
  for (const Word w : weights) ++histogram[magnitude(w)];
  // everything below `cutoff` is pruned, plus the first `at_cutoff` words equal to it
  int cutoff = 0;
  std::size_t at_cutoff = count;
  while (at_cutoff > histogram[cutoff]) at_cutoff -= histogram[cutoff++];
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const int m = magnitude(weights[i]);
    if (m < cutoff) {
      out[i] = 0;
    } else if (m == cutoff && at_cutoff > 0) {
      out[i] = 0;
      --at_cutoff;
    }
  }
  return out;
}

std::vector<Word> synth_relu_activations(double sigma_pre, double scale, std::size_t n, std::uint64_t seed) {
  if (!(sigma_pre >= 0.0) || !(scale > 0.0))
    throw Error(ErrorCode::InvalidParam, "activation sigma must be >= 0 and scale > 0");
  std::vector<Word> out(n, Word{0x80});
  if (sigma_pre == 0.0) return out;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, sigma_pre);
  for (auto& w : out) {
    const double x = normal(rng);
    if (!(x > 0.0)) continue;
    const double steps = std::max(1.0, std::round(x / scale));
    w = static_cast<Word>(static_cast<std::int8_t>(std::min(steps - 128.0, 127.0)));
  }
  return out;
}

namespace {

// The group length sets the integer spread left after per-channel scaling.
constexpr std::array<WeightPreset, 2> kPresets{{
    {"resnet-like", 0.7, 250},
    {"mobilenet-like", 1.3, 700},
}};

}  // namespace

const WeightPreset& weight_preset(std::string_view name) {
  for (const auto& p : kPresets)
    if (p.name == name) return p;
  throw Error(ErrorCode::InvalidParam, "unknown weight preset '" + std::string(name) + "'");
}

QuantizedTensor synth_weights(double nu, std::size_t group, std::size_t n, std::uint64_t seed, double rho) {
  if (group == 0 || n == 0) throw Error(ErrorCode::InvalidParam, "group and count must be positive");
  const std::size_t channels = (n + group - 1) / group;
  const auto values = sample_gg({nu, 1.0, seed}, channels * group);
  QuantizedTensor t = quantize_symmetric(values, channels);
  if (rho > 0.0) t.words = prune_magnitude(t.words, rho);
  return t;
}

}  // namespace lpcode
