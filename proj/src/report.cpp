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

#include "lpcode/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace lpcode {

using ordered_json = nlohmann::ordered_json;

const char* to_string(TensorKind k) noexcept { return k == TensorKind::Activations ? "activations" : "weights"; }

TensorKind classify(const TensorRecord& record) noexcept {
  return record.zero_point == -128 ? TensorKind::Activations : TensorKind::Weights;
}

std::vector<CodingScheme> default_schemes(const TensorRecord& record) {
  const Word zp = record.zero_point_word();
  if (classify(record) == TensorKind::Activations)
    return {CodingScheme{}, CodingScheme{ProbabilityStage::XorZp, zp},
            CodingScheme{ProbabilityStage::XorZp, zp, TemporalStage::Decorrelate}};
  return {CodingScheme{}, CodingScheme{ProbabilityStage::XorMsb},
          CodingScheme{ProbabilityStage::XorMsb, 0, TemporalStage::Decorrelate}};
}

namespace {

std::vector<const TensorRecord*> selected_tensors(const Bundle& bundle, const ReportOptions& options) {
  std::vector<const TensorRecord*> out;
  if (options.tensors.empty()) {
    for (const auto& r : bundle.manifest().tensors)
      if (r.is_8bit()) out.push_back(&r);
    return out;
  }
  for (const auto& name : options.tensors) {
    const TensorRecord& r = bundle.record(name);
    if (!r.is_8bit()) throw Error(ErrorCode::InvalidParam, "tensor '" + name + "' is not an 8-bit tensor");
    out.push_back(&r);
  }
  return out;
}

// Per-tensor shuffle seeds differ so tensors are not permuted identically.
std::uint64_t tensor_seed(std::uint64_t seed, std::size_t index) {
  return seed ^ (0x9E3779B97F4A7C15ull * (index + 1));
}

std::vector<CodingScheme> schemes_for(const TensorRecord& r, const ReportOptions& options) {
  if (options.schemes.empty()) return default_schemes(r);
  std::vector<CodingScheme> out;
  for (const auto& name : options.schemes) out.push_back(CodingScheme::parse(name, r.zero_point_word()));
  return out;
}

ReportRow make_row(const std::string& tensor, TensorKind kind, const std::string& scheme, const LaneCounts& counts) {
  ReportRow row;
  row.tensor = tensor;
  row.kind = kind;
  row.scheme = scheme;
  row.counts = counts;
  row.stats = finalize(counts);
  row.reduction = reduction_vs_random(row.stats);
  return row;
}

void fill_deltas(ReportRow& row, const ReportRow& raw) {
  if (row.reduction.switching_pct && raw.reduction.switching_pct)
    row.switching_delta_vs_raw = *row.reduction.switching_pct - *raw.reduction.switching_pct;
  row.bitprob_delta_vs_raw = row.reduction.bitprob_pct - raw.reduction.bitprob_pct;
}

std::vector<ReportRow> aggregate_rows(const std::vector<ReportRow>& rows) {
  std::vector<std::pair<std::pair<TensorKind, std::string>, LaneCounts>> groups;
  for (const auto& row : rows) {
    const auto key = std::make_pair(row.kind, row.scheme);
    auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g.first == key; });
    if (it == groups.end()) {
      groups.push_back({key, row.counts});
    } else {
      it->second.combine(row.counts);
    }
  }
  std::vector<ReportRow> out;
  for (const auto& [key, counts] : groups)
    out.push_back(make_row(std::string("all-") + to_string(key.first), key.first, key.second, counts));
  for (auto& row : out) {
    const auto raw = std::find_if(out.begin(), out.end(),
                                  [&](const ReportRow& r) { return r.kind == row.kind && r.scheme == "raw"; });
    if (raw != out.end()) fill_deltas(row, *raw);
  }
  return out;
}

ordered_json optional_number(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(); }

ordered_json row_to_json(const ReportRow& row) {
  ordered_json j;
  j["tensor"] = row.tensor;
  j["kind"] = to_string(row.kind);
  j["scheme"] = row.scheme;
  j["n_words"] = row.stats.n_words;
  j["T"] = row.stats.switching_defined ? ordered_json(row.stats.total_switching) : ordered_json();
  j["PR1"] = row.stats.total_ones;
  j["PR0"] = row.stats.total_zeros();
  j["switching_reduction_pct"] = optional_number(row.reduction.switching_pct);
  j["bitprob_reduction_pct"] = row.reduction.bitprob_pct;
  j["switching_delta_vs_raw_pct"] = optional_number(row.switching_delta_vs_raw);
  j["bitprob_delta_vs_raw_pct"] = row.bitprob_delta_vs_raw;
  if (row.stats.switching_defined) {
    j["lane_switching"] = row.stats.lane_switching;
  } else {
    j["lane_switching"] = nullptr;
  }
  j["lane_prob"] = row.stats.lane_prob;
  if (row.uncorrelated_residual) j["uncorrelated_residual"] = *row.uncorrelated_residual;
  return j;
}

std::string csv_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string csv_number(const std::optional<double>& v) { return v ? csv_number(*v) : std::string(); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void seed_to_json(ordered_json& j, const std::optional<std::uint64_t>& seed) {
  j["shuffle_seed"] = seed ? ordered_json(*seed) : ordered_json();
}

}  // namespace

std::string ReportDocument::to_json() const {
  ordered_json j;
  j["command"] = command;
  j["baseline_per_lane"] = ReductionReport::kBaseline;
  seed_to_json(j, shuffle_seed);
  j["rows"] = ordered_json::array();
  for (const auto& r : rows) j["rows"].push_back(row_to_json(r));
  j["aggregate"] = ordered_json::array();
  for (const auto& r : aggregate) j["aggregate"].push_back(row_to_json(r));
  return j.dump(2) + "\n";
}

std::string ReportDocument::to_csv() const {
  std::ostringstream out;
  out << "tensor,scheme,T,PR1,switching_reduction_pct,bitprob_reduction_pct\n";
  auto emit = [&](const ReportRow& r) {
    out << csv_field(r.tensor) << ',' << r.scheme << ','
        << (r.stats.switching_defined ? csv_number(r.stats.total_switching) : std::string()) << ','
        << csv_number(r.stats.total_ones) << ',' << csv_number(r.reduction.switching_pct) << ','
        << csv_number(r.reduction.bitprob_pct) << '\n';
  };
  for (const auto& r : rows) emit(r);
  for (const auto& r : aggregate) emit(r);
  return out.str();
}

ReportDocument analyze(const Bundle& bundle, const ReportOptions& options) {
  ReportDocument doc;
  doc.command = "analyze";
  doc.shuffle_seed = options.shuffle_seed;
  const auto tensors = selected_tensors(bundle, options);
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    const TensorRecord& r = *tensors[i];
    auto words = bundle.load(r.name);
    if (options.shuffle_seed) shuffle_words(words, tensor_seed(*options.shuffle_seed, i));
    LaneCounts counts;
    counts.add(words);
    ReportRow row = make_row(r.name, classify(r), r.scheme().name(), counts);
    if (row.stats.switching_defined) row.uncorrelated_residual = uncorrelated_consistency(row.stats);
    doc.rows.push_back(std::move(row));
  }
  if (options.aggregate) doc.aggregate = aggregate_rows(doc.rows);
  return doc;
}

ReportDocument report(const Bundle& bundle, const ReportOptions& options) {
  ReportDocument doc;
  doc.command = "report";
  doc.shuffle_seed = options.shuffle_seed;
  const auto tensors = selected_tensors(bundle, options);
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    const TensorRecord& r = *tensors[i];
    WordStream plain{decode_payload(r, bundle.load(r.name)), Interpretation::TwosComplement};
    if (options.shuffle_seed) shuffle_words(plain.words, tensor_seed(*options.shuffle_seed, i));
    LaneCounts raw_counts;
    raw_counts.add(plain.words);
    const ReportRow raw = make_row(r.name, classify(r), "raw", raw_counts);
    for (const auto& scheme : schemes_for(r, options)) {
      LaneCounts counts;
      if (scheme == CodingScheme{}) {
        counts = raw_counts;
      } else {
        counts.add(apply_scheme(scheme, plain, Direction::Encode).words);
      }
      ReportRow row = make_row(r.name, classify(r), scheme.name(), counts);
      fill_deltas(row, raw);
      doc.rows.push_back(std::move(row));
    }
  }
  if (options.aggregate) doc.aggregate = aggregate_rows(doc.rows);
  return doc;
}

std::string BoundDocument::to_json() const {
  ordered_json j;
  j["command"] = "bound";
  seed_to_json(j, shuffle_seed);
  j["rows"] = ordered_json::array();
  for (const auto& r : rows) {
    ordered_json row;
    row["tensor"] = r.tensor;
    row["scheme"] = r.scheme;
    row["pattern_entropy"] = r.gap.pattern_entropy;
    row["bound"] = r.gap.bound;
    row["measured_T"] = r.gap.switching_defined ? ordered_json(r.gap.measured_transitions) : ordered_json();
    row["measured_PRmin"] = r.gap.measured_min_ones_zeros;
    row["transition_gap"] = r.gap.switching_defined ? ordered_json(r.gap.transition_gap) : ordered_json();
    row["bitprob_gap"] = r.gap.bitprob_gap;
    j["rows"].push_back(row);
  }
  return j.dump(2) + "\n";
}

std::string BoundDocument::to_csv() const {
  std::ostringstream out;
  out << "tensor,scheme,H,bound,T,PRmin,transition_gap,bitprob_gap\n";
  for (const auto& r : rows) {
    const auto t = r.gap.switching_defined ? std::optional<double>(r.gap.measured_transitions) : std::nullopt;
    const auto tg = r.gap.switching_defined ? std::optional<double>(r.gap.transition_gap) : std::nullopt;
    out << csv_field(r.tensor) << ',' << r.scheme << ',' << csv_number(r.gap.pattern_entropy) << ','
        << csv_number(r.gap.bound) << ',' << csv_number(t) << ',' << csv_number(r.gap.measured_min_ones_zeros)
        << ',' << csv_number(tg) << ',' << csv_number(r.gap.bitprob_gap) << '\n';
  }
  return out.str();
}

BoundDocument bound(const Bundle& bundle, const ReportOptions& options) {
  BoundDocument doc;
  doc.shuffle_seed = options.shuffle_seed;
  const auto tensors = selected_tensors(bundle, options);
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    const TensorRecord& r = *tensors[i];
    WordStream plain{decode_payload(r, bundle.load(r.name)), Interpretation::TwosComplement};
    if (options.shuffle_seed) shuffle_words(plain.words, tensor_seed(*options.shuffle_seed, i));
    for (const auto& scheme : schemes_for(r, options))
      doc.rows.push_back({r.name, scheme.name(), bound_gap_report(plain, scheme)});
  }
  return doc;
}

MacWorkload make_workload(std::span<const Word> weights, std::span<const Word> activations, std::size_t cols,
                          std::size_t rows, std::int32_t activation_zero_point) {
  if (cols == 0 || rows == 0) throw Error(ErrorCode::InvalidParam, "workload needs at least one row and column");
  if (cols > kMaxDotLength) throw Error(ErrorCode::InvalidParam, "vector length exceeds 2^16");
  if (weights.size() < rows * cols)
    throw Error(ErrorCode::InvalidParam, "not enough weights for " + std::to_string(rows) + " rows");
  if (activations.size() < cols) throw Error(ErrorCode::InvalidParam, "not enough activations for one vector");
  MacWorkload w;
  w.rows = rows;
  w.cols = cols;
  w.weights.assign(weights.begin(), weights.begin() + static_cast<std::ptrdiff_t>(rows * cols));
  w.activations.assign(activations.begin(), activations.begin() + static_cast<std::ptrdiff_t>(cols));
  std::vector<std::int32_t> biases(rows);
  std::int64_t max_abs = 1;
  for (std::size_t r = 0; r < rows; ++r) {
    const auto row = std::span<const Word>(w.weights).subspan(r * cols, cols);
    std::int64_t sum_w = 0;
    for (const Word x : row) sum_w += static_cast<std::int8_t>(x);
    biases[r] = static_cast<std::int32_t>(-std::int64_t{activation_zero_point} * sum_w);
    const std::int64_t acc = dot_accumulate(MacVariant::A, row, w.activations, biases[r]);
    max_abs = std::max<std::int64_t>(max_abs, acc < 0 ? -acc : acc);
  }
  const double m = std::min(1.0, 127.0 / static_cast<double>(max_abs));
  for (const auto b : biases) w.params.push_back(RescaleParams::from_real(m, b));
  return w;
}

std::string digest(std::span<const std::int8_t> outputs) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const auto v : outputs) {
    h ^= static_cast<std::uint8_t>(v);
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

MacsimDocument run_macsim(const MacWorkload& workload, std::span<const MacVariant> variants) {
  MacsimDocument doc;
  doc.rows = workload.rows;
  doc.cols = workload.cols;
  const auto reference = quantized_layer(MacVariant::A, workload.weights, workload.activations, workload.params);
  doc.equivalent = true;
  std::vector<std::int32_t> reference_acc;
  for (const MacVariant v : variants) {
    VariantRun run;
    run.variant = v;
    InnerProductUnit unit(v);
    const auto w = weights_for(v, workload.weights);
    const auto a = activations_for(v, workload.activations);
    for (std::size_t r = 0; r < workload.rows; ++r) {
      const auto row = std::span<const Word>(w).subspan(r * workload.cols, workload.cols);
      std::int32_t bias = workload.params[r].effective_bias;
      if (v == MacVariant::C)
        bias = adjust_bias_for_unsigned(std::span<const Word>(workload.weights).subspan(r * workload.cols, workload.cols),
                                        bias);
      run.outputs.push_back(unit.execute(row, a, bias, workload.params[r]));
      run.accumulators.push_back(unit.last_accumulator());
      if (unit.last_accumulator() != dot_accumulate(v, row, a, bias)) doc.equivalent = false;
    }
    run.toggles = unit.toggles();
    if (run.outputs != reference) doc.equivalent = false;
    if (v == MacVariant::C || v == MacVariant::B) {
      // C accumulates Σw(q+128) + bias - 128Σw, the same value as A
      if (reference_acc.empty()) {
        for (std::size_t r = 0; r < workload.rows; ++r)
          reference_acc.push_back(dot_accumulate(
              MacVariant::A, std::span<const Word>(workload.weights).subspan(r * workload.cols, workload.cols),
              workload.activations, workload.params[r].effective_bias));
      }
      if (run.accumulators != reference_acc) doc.equivalent = false;
    }
    doc.runs.push_back(std::move(run));
  }
  return doc;
}

std::string MacsimDocument::to_json() const {
  ordered_json j;
  j["command"] = "macsim";
  j["rows"] = rows;
  j["length"] = cols;
  j["equivalence"] = equivalent ? "pass" : "fail";
  j["outputs_digest"] = runs.empty() ? std::string() : digest(runs.front().outputs);
  j["toggles"] = ordered_json::array();
  const VariantRun* a = nullptr;
  for (const auto& run : runs)
    if (run.variant == MacVariant::A) a = &run;
  for (const auto& run : runs) {
    ordered_json t;
    t["variant"] = to_string(run.variant);
    t["outputs_digest"] = digest(run.outputs);
    t["cycles"] = run.toggles.cycles;
    t["per_component"] = {
        {"input_registers", run.toggles.input_registers},
        {"partial_products", run.toggles.partial_products},
        {"row_sums", run.toggles.row_sums},
        {"multiplier_outputs", run.toggles.multiplier_outputs},
        {"negation_xor", run.toggles.negation_xor},
        {"adder_tree", run.toggles.adder_tree},
    };
    t["multiplier"] = run.toggles.multiplier();
    t["total"] = run.toggles.total();
    if (a != nullptr && a->toggles.total() > 0) {
      t["total_ratio_vs_A"] = static_cast<double>(run.toggles.total()) / static_cast<double>(a->toggles.total());
      t["multiplier_ratio_vs_A"] =
          static_cast<double>(run.toggles.multiplier()) / static_cast<double>(a->toggles.multiplier());
    }
    j["toggles"].push_back(t);
  }
  return j.dump(2) + "\n";
}

}  // namespace lpcode
