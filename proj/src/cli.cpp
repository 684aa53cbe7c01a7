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

#include "lpcode/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "lpcode/report.hpp"
#include "lpcode/synth.hpp"

namespace lpcode {
namespace {

struct GlobalOptions {
  std::string bundle;
  std::string out;
  std::string format = "json";
  std::uint64_t seed = 0;
  bool seed_given = false;
};

void emit(const GlobalOptions& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(g.out, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + g.out);
}

Bundle open_bundle(const GlobalOptions& g) {
  if (g.bundle.empty()) throw Error(ErrorCode::InvalidParam, "--bundle is required");
  return Bundle::open(g.bundle);
}

ReportOptions report_options(const GlobalOptions& g, bool shuffle, const std::vector<std::string>& schemes,
                             const std::vector<std::string>& tensors, bool no_aggregate) {
  if (shuffle && !g.seed_given) throw Error(ErrorCode::InvalidParam, "--shuffle requires --seed");
  ReportOptions o;
  if (shuffle) o.shuffle_seed = g.seed;
  o.schemes = schemes;
  o.tensors = tensors;
  o.aggregate = !no_aggregate;
  return o;
}

template <typename Doc>
void emit_table(const GlobalOptions& g, const Doc& doc) {
  emit(g, g.format == "csv" ? doc.to_csv() : doc.to_json());
}

void recode_bundle(const GlobalOptions& g, const std::string& scheme, const std::vector<std::string>& tensors) {
  const Bundle in = open_bundle(g);
  Manifest manifest = in.manifest();
  std::vector<std::vector<std::uint8_t>> payloads;
  for (auto& record : manifest.tensors) {
    auto bytes = in.load(record.name);
    const bool selected =
        tensors.empty() ? record.is_8bit() : std::find(tensors.begin(), tensors.end(), record.name) != tensors.end();
    if (selected) {
      auto [updated, data] = reencode(record, bytes, scheme);
      record = std::move(updated);
      bytes = std::move(data);
    }
    payloads.push_back(std::move(bytes));
  }
  for (const auto& name : tensors) in.record(name);
  write_bundle(g.out.empty() ? in.root() : std::filesystem::path(g.out), manifest, payloads);
}

std::vector<std::uint8_t> as_bytes(const std::vector<Word>& words) { return {words.begin(), words.end()}; }

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Low-power coding analysis for 8-bit quantized NN tensors", "lpcode"};
  app.require_subcommand(1);
  GlobalOptions g;
  app.add_option("--bundle", g.bundle, "Input bundle directory or manifest.json");
  app.add_option("--out", g.out, "Output file (reports) or bundle directory (encode/decode/synth)");
  app.add_option("--format", g.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option_function<std::uint64_t>(
      "--seed", [&](const std::uint64_t& s) { g.seed = s, g.seed_given = true; }, "PRNG / shuffle seed");
  app.fallthrough();

  bool shuffle = false;
  bool no_aggregate = false;
  std::vector<std::string> schemes;
  std::vector<std::string> tensors;
  auto add_selection = [&](CLI::App* sub, bool with_schemes) {
    sub->add_option("--tensor", tensors, "Restrict to these tensors (repeatable)");
    sub->add_flag("--shuffle", shuffle, "Shuffle each tensor with --seed before measuring");
    if (with_schemes) sub->add_option("--schemes", schemes, "Scheme names, e.g. raw,xor-msb,xor-msb+decorr")->delimiter(',');
  };

  auto* analyze_cmd = app.add_subcommand("analyze", "Bit-lane statistics of tensors as stored");
  add_selection(analyze_cmd, false);
  analyze_cmd->add_flag("--no-aggregate", no_aggregate, "Omit per-kind aggregate rows");

  auto* report_cmd = app.add_subcommand("report", "Standard vs. coded switching and bit-probability table");
  add_selection(report_cmd, true);
  report_cmd->add_flag("--no-aggregate", no_aggregate, "Omit per-kind aggregate rows");

  auto* bound_cmd = app.add_subcommand("bound", "Entropy lower bound and gap per scheme");
  add_selection(bound_cmd, true);

  std::string scheme;
  auto* encode_cmd = app.add_subcommand("encode", "Re-encode tensors (in place unless --out is given)");
  encode_cmd->add_option("--scheme", scheme, "Target coding scheme")->required();
  encode_cmd->add_option("--tensor", tensors, "Tensors to re-encode (default: all 8-bit)");
  auto* decode_cmd = app.add_subcommand("decode", "Decode tensors back to raw");
  decode_cmd->add_option("--tensor", tensors, "Tensors to decode (default: all 8-bit)");

  std::size_t count = 1'000'000;
  std::string weights_preset = "resnet-like";
  std::optional<double> nu;
  std::optional<std::size_t> group;
  double prune = 0.0;
  bool with_activations = true;
  double sigma_pre = 1.0;
  std::optional<double> act_scale;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic bundle");
  synth_cmd->add_option("--n", count, "Words per tensor (weights round up to whole channels)");
  synth_cmd->add_option("--weights", weights_preset, "Weight preset: resnet-like, mobilenet-like, none");
  synth_cmd->add_option("--nu", nu, "GG shape override");
  synth_cmd->add_option("--group", group, "Per-channel group length override");
  synth_cmd->add_option("--rho", prune, "Also emit weights magnitude-pruned to this fraction");
  synth_cmd->add_option("--sigma-pre", sigma_pre, "Pre-activation standard deviation");
  synth_cmd->add_option("--act-scale", act_scale, "Activation quantization step (default sigma-pre/8)");
  synth_cmd->add_flag("!--no-activations", with_activations, "Skip the activation tensor");

  std::string variant_name = "all";
  std::string weights_name = "weights";
  std::string activations_name = "activations";
  std::size_t length = 256;
  std::size_t rows = 64;
  auto* macsim_cmd = app.add_subcommand("macsim", "MAC-variant equivalence and toggle proxy");
  macsim_cmd->add_option("--variant", variant_name, "A, B, C or all")->check(CLI::IsMember({"A", "B", "C", "all"}));
  macsim_cmd->add_option("--weights", weights_name, "Weight tensor in --bundle");
  macsim_cmd->add_option("--activations", activations_name, "Activation tensor in --bundle");
  macsim_cmd->add_option("--length", length, "Dot-product length");
  macsim_cmd->add_option("--rows", rows, "Output rows");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (g.format == "csv" && (synth_cmd->parsed() || macsim_cmd->parsed()))
      throw Error(ErrorCode::InvalidParam, "csv output is only available for analyze, report and bound");
    if (analyze_cmd->parsed()) {
      emit_table(g, analyze(open_bundle(g), report_options(g, shuffle, {}, tensors, no_aggregate)));
    } else if (report_cmd->parsed()) {
      emit_table(g, report(open_bundle(g), report_options(g, shuffle, schemes, tensors, no_aggregate)));
    } else if (bound_cmd->parsed()) {
      emit_table(g, bound(open_bundle(g), report_options(g, shuffle, schemes, tensors, false)));
    } else if (encode_cmd->parsed()) {
      recode_bundle(g, scheme, tensors);
    } else if (decode_cmd->parsed()) {
      recode_bundle(g, "raw", tensors);
    } else if (synth_cmd->parsed()) {
      if (g.out.empty()) throw Error(ErrorCode::InvalidParam, "synth needs --out DIR");
      Manifest manifest;
      std::vector<std::vector<std::uint8_t>> payloads;
      if (weights_preset != "none") {
        const WeightPreset& preset = weight_preset(weights_preset);
        const double shape = nu.value_or(preset.nu);
        const std::size_t len = group.value_or(preset.group);
        std::ostringstream prov;
        prov << "synthetic weights=" << weights_preset << " nu=" << shape << " group=" << len;
        manifest.provenance = prov.str();
        auto add_weights = [&](const std::string& name, double rho) {
          QuantizedTensor t = synth_weights(shape, len, count, g.seed, rho);
          for (const auto& w : t.warnings) std::cerr << "warning: " << w << "\n";
          TensorRecord r;
          r.name = name;
          r.dtype = DType::Int8;
          r.shape = {static_cast<std::int64_t>(t.params.scales.size()), static_cast<std::int64_t>(len)};
          r.scales = t.params.scales;
          if (t.params.scales.size() > 1) r.axis = 0;
          r.zero_point = 0;
          r.data_file = name + ".bin";
          manifest.tensors.push_back(r);
          payloads.push_back(as_bytes(t.words));
        };
        add_weights("weights", 0.0);
        if (prune > 0.0) add_weights("weights_pruned", prune);
      }
      if (with_activations) {
        const double scale = act_scale.value_or(sigma_pre * kReluScaleFraction);
        TensorRecord r;
        r.name = "activations";
        r.dtype = DType::Int8;
        r.shape = {static_cast<std::int64_t>(count)};
        r.scales = {scale};
        r.zero_point = -128;
        r.data_file = "activations.bin";
        manifest.tensors.push_back(r);
        payloads.push_back(as_bytes(synth_relu_activations(sigma_pre, scale, count, g.seed + 1)));
        std::ostringstream prov;
        prov << (manifest.provenance.empty() ? "synthetic" : "") << " relu sigma_pre=" << sigma_pre
             << " scale=" << scale;
        manifest.provenance += prov.str();
      }
      write_bundle(g.out, manifest, payloads);
    } else if (macsim_cmd->parsed()) {
      std::vector<Word> w;
      std::vector<Word> a;
      std::int32_t zp = -128;
      if (!g.bundle.empty()) {
        const Bundle b = open_bundle(g);
        const auto& wr = b.record(weights_name);
        const auto& ar = b.record(activations_name);
        w = decode_payload(wr, b.load(weights_name));
        a = decode_payload(ar, b.load(activations_name));
        zp = ar.zero_point;
      } else {
        w = synth_weights(weight_preset("resnet-like").nu, weight_preset("resnet-like").group, rows * length, g.seed)
                .words;
        a = synth_relu_activations(1.0, kReluScaleFraction, length, g.seed + 1);
      }
      const MacWorkload workload = make_workload(w, a, length, rows, zp);
      std::vector<MacVariant> variants;
      if (variant_name == "all") {
        variants = {MacVariant::A, MacVariant::B, MacVariant::C};
      } else {
        variants = {parse_mac_variant(variant_name)};
      }
      emit(g, run_macsim(workload, variants).to_json());
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace lpcode
