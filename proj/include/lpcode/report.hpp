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

// Bundle-level pipelines behind the CLI: stored-stream analysis, Table-style
// coding comparison (Standard / probability coding / probability coding +
// decorrelator per tensor), entropy-bound gaps, and MAC-variant simulation.
// Every document renders deterministically to JSON, and the tabular ones to
// CSV as well.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lpcode/bundle.hpp"
#include "lpcode/entropy.hpp"
#include "lpcode/ipu.hpp"
#include "lpcode/macsim.hpp"
#include "lpcode/stats.hpp"

namespace lpcode {

enum class TensorKind { Weights, Activations };

const char* to_string(TensorKind k) noexcept;

/// ZP = -128 marks ReLU activations; anything else is treated as weights.
TensorKind classify(const TensorRecord& record) noexcept;

/// raw, xor-msb, xor-msb+decorr for weights; raw, xor-zp, xor-zp+decorr for
/// activations (ZP from the record).
std::vector<CodingScheme> default_schemes(const TensorRecord& record);

struct ReportOptions {
  /// Shuffle every tensor once before coding; stored order when empty.
  std::optional<std::uint64_t> shuffle_seed;
  bool aggregate = true;
  /// Scheme names applied to every tensor; per-kind defaults when empty.
  std::vector<std::string> schemes;
  /// Tensor names to include; all 8-bit tensors when empty.
  std::vector<std::string> tensors;
};

struct ReportRow {
  std::string tensor;
  TensorKind kind = TensorKind::Weights;
  std::string scheme;
  LaneCounts counts;
  BitStats stats;
  ReductionReport reduction;
  /// Percentage-point change vs. the same tensor's raw stream.
  std::optional<double> switching_delta_vs_raw;
  double bitprob_delta_vs_raw = 0.0;
  /// |t_i - 2p_i(1-p_i)|, analyze only.
  std::optional<std::array<double, 8>> uncorrelated_residual;
};

struct ReportDocument {
  std::string command;
  std::optional<std::uint64_t> shuffle_seed;
  std::vector<ReportRow> rows;
  /// Word-count weighted totals per (kind, scheme).
  std::vector<ReportRow> aggregate;

  std::string to_json() const;
  /// Columns: tensor, scheme, T, PR1, switching_reduction_pct, bitprob_reduction_pct.
  std::string to_csv() const;
};

/// Statistics of each tensor's bytes exactly as stored.
ReportDocument analyze(const Bundle& bundle, const ReportOptions& options);

/// Decodes each tensor to raw and measures every scheme. The `raw` row is
/// measure() of the decoded stream with no further coding.
ReportDocument report(const Bundle& bundle, const ReportOptions& options);

struct BoundRow {
  std::string tensor;
  std::string scheme;
  BoundGapReport gap;
};

struct BoundDocument {
  std::optional<std::uint64_t> shuffle_seed;
  std::vector<BoundRow> rows;

  std::string to_json() const;
  std::string to_csv() const;
};

BoundDocument bound(const Bundle& bundle, const ReportOptions& options);

/// One quantized layer: int8 weights [rows, cols], int8 activations [cols].
struct MacWorkload {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Word> weights;
  std::vector<Word> activations;
  /// Variant-A effective biases folded with the activation zero point, and a
  /// shared rescale factor that maps the largest accumulator to full scale.
  std::vector<RescaleParams> params;
};

/// Takes the first rows*cols weights and the first cols activations.
/// `activation_zero_point` is folded into the biases (-ZP·Σw per row).
MacWorkload make_workload(std::span<const Word> weights, std::span<const Word> activations, std::size_t cols,
                          std::size_t rows, std::int32_t activation_zero_point);

struct VariantRun {
  MacVariant variant = MacVariant::A;
  std::vector<std::int8_t> outputs;
  std::vector<std::int32_t> accumulators;
  ToggleReport toggles;
};

struct MacsimDocument {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<VariantRun> runs;
  /// Every run matches variant A and the reference quantized_layer path.
  bool equivalent = false;

  std::string to_json() const;
};

MacsimDocument run_macsim(const MacWorkload& workload, std::span<const MacVariant> variants);

/// FNV-1a 64 of the output bytes, as 16 hex digits.
std::string digest(std::span<const std::int8_t> outputs);

}  // namespace lpcode
