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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lpcode/codec.hpp"
#include "lpcode/entropy.hpp"
#include "lpcode/ipu.hpp"
#include "lpcode/kernels.hpp"
#include "lpcode/macsim.hpp"
#include "lpcode/report.hpp"
#include "lpcode/stats.hpp"
#include "lpcode/synth.hpp"

using namespace lpcode;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += "FAILED " + what;
    }
  }
  void note(const std::string& s) {
    if (!detail.empty()) detail += "; ";
    detail += s;
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

constexpr std::size_t kN = 1'000'000;
constexpr std::uint64_t kSeed = 2026;

const char* const kSchemeNames[] = {
    "raw",         "xor-msb",         "xnor-msb",         "sm",         "xor-zp",         "xnor-zp",
    "raw+decorr",  "xor-msb+decorr",  "xnor-msb+decorr",  "sm+decorr",  "xor-zp+decorr",  "xnor-zp+decorr",
    "raw+corr",    "xor-msb+corr",    "xnor-msb+corr",    "sm+corr",    "xor-zp+corr",    "xnor-zp+corr",
};

Outcome codec_roundtrip() {
  Outcome o;
  std::mt19937_64 rng(kSeed);
  std::vector<WordStream> random_streams(1000);
  for (auto& st : random_streams) {
    st.words.resize(rng() % 4097);
    for (std::size_t i = 0; i < st.words.size(); i += 8) {
      const std::uint64_t r = rng();
      std::memcpy(st.words.data() + i, &r, std::min<std::size_t>(8, st.words.size() - i));
    }
  }
  std::vector<WordStream> admissible = random_streams;
  for (auto& st : admissible) std::replace(st.words.begin(), st.words.end(), Word{0x80}, Word{0x00});

  std::size_t streams = 0;
  bool ok = true;
  for (const char* name : kSchemeNames) {
    const CodingScheme s = CodingScheme::parse(name, 0x80);
    const bool sm = s.probability == ProbabilityStage::SignMagnitude;
    for (int w = 0; w < 256; ++w) {
      if (sm && w == 0x80) continue;
      const WordStream in{{static_cast<Word>(w)}};
      ok &= apply_scheme(s, apply_scheme(s, in, Direction::Encode), Direction::Decode).words == in.words;
      ++streams;
    }
    for (const auto& in : sm ? admissible : random_streams) {
      ok &= apply_scheme(s, apply_scheme(s, in, Direction::Encode), Direction::Decode).words == in.words;
      ++streams;
    }
  }
  o.require(ok, "decode(encode(s)) == s");
  o.note(std::to_string(streams) + " streams over 18 schemes");
  return o;
}

Outcome involution_and_sm() {
  Outcome o;
  const CodingScheme xm = CodingScheme::parse("xor-msb");
  const CodingScheme sm = CodingScheme::parse("sm");
  bool involution = true, rejection = true;
  for (int w = 0; w < 256; ++w) {
    const Word x = static_cast<Word>(w);
    involution &= encode_word(xm, encode_word(xm, x)) == x;
    for (const bool enc : {true, false}) {
      bool threw = false;
      try {
        enc ? encode_word(sm, x) : decode_word(sm, x);
      } catch (const Error& e) {
        threw = e.code() == ErrorCode::InadmissibleWord;
      }
      rejection &= threw == (x == 0x80);
    }
  }
  o.require(involution, "xor-msb involution");
  o.require(rejection, "sign-magnitude rejects exactly 0x80");
  return o;
}

Outcome mac_equivalence() {
  Outcome o;
  std::size_t pairs = 0;
  bool ok = true;
  for (int w = -127; w <= 127; ++w)
    for (int a = -128; a <= 127; ++a) {
      const std::vector<Word> wa{static_cast<Word>(static_cast<std::int8_t>(w))};
      const std::vector<Word> aa{static_cast<Word>(static_cast<std::int8_t>(a))};
      const std::int32_t ref = dot_accumulate(MacVariant::A, wa, aa, 0);
      ok &= ref == w * a;
      ok &= dot_accumulate(MacVariant::B, weights_for(MacVariant::B, wa), aa, 0) == ref;
      ok &= dot_accumulate(MacVariant::C, weights_for(MacVariant::C, wa), activations_for(MacVariant::C, aa),
                           adjust_bias_for_unsigned(wa, 0)) == ref;
      ++pairs;
    }
  std::mt19937_64 rng(kSeed);
  constexpr int kTrials = 10'000;
  for (int t = 0; t < kTrials; ++t) {
    const std::size_t n = 1 + rng() % 4096;
    std::vector<Word> w(n), a(n);
    for (auto& x : w) x = static_cast<Word>(static_cast<std::int8_t>(static_cast<int>(rng() % 255) - 127));
    for (auto& x : a) x = static_cast<Word>(rng());
    const auto bias = static_cast<std::int32_t>(static_cast<std::int64_t>(rng() % 20'000'001) - 10'000'000);
    const std::int32_t ref = dot_accumulate(MacVariant::A, w, a, bias);
    ok &= dot_accumulate(MacVariant::B, weights_for(MacVariant::B, w), a, bias) == ref;
    ok &= dot_accumulate(MacVariant::C, weights_for(MacVariant::C, w), activations_for(MacVariant::C, a),
                         adjust_bias_for_unsigned(w, bias)) == ref;
  }
  o.require(pairs == 65'280, "65,280 single-MAC pairs");
  o.require(ok, "B == A and C == A");
  o.note(std::to_string(pairs) + " pairs, " + std::to_string(kTrials) + " dot products");
  return o;
}

// Exact rounding reference in 128-bit arithmetic.
int exact_rescale(std::int32_t acc, const RescaleParams& p) {
  const __int128 prod = static_cast<__int128>(acc) * p.multiplier;
  const __int128 mag = prod < 0 ? -prod : prod;
  __int128 r = p.shift == 0 ? mag : (mag + (static_cast<__int128>(1) << (p.shift - 1))) >> p.shift;
  if (prod < 0) r = -r;
  return static_cast<int>(std::clamp<__int128>(r, -128, 127));
}

Outcome rescale() {
  Outcome o;
  std::mt19937_64 rng(kSeed);
  std::uniform_real_distribution<double> log_m(-20.0, 0.0);
  std::uniform_int_distribution<std::int32_t> acc_dist(std::numeric_limits<std::int32_t>::min(),
                                                       std::numeric_limits<std::int32_t>::max());
  int worst = 0;
  bool boundaries = true;
  for (int i = 0; i < 100'000; ++i) {
    const double m = std::exp2(log_m(rng));
    const RescaleParams p = RescaleParams::from_real(m);
    // mix of full-range and in-range accumulators
    std::int32_t acc = acc_dist(rng);
    if (i % 2) acc = static_cast<std::int32_t>(std::clamp<double>(std::ldexp(static_cast<double>(acc), -31) * 140.0 / m,
                                                                   -2147483648.0, 2147483647.0));
    const double ref = std::clamp(std::round(static_cast<double>(acc) * m), -128.0, 127.0);
    worst = std::max(worst, static_cast<int>(std::abs(rescale_saturate(acc, p) - ref)));

    // smallest |acc| whose product reaches 126.5 (-> 127) and 127.5 (-> -128), found exactly
    const auto first_reaching = [&](int half_steps) {
      const __int128 lim = static_cast<__int128>(half_steps) << (p.shift - 1);
      return static_cast<std::int64_t>((lim + p.multiplier - 1) / p.multiplier);
    };
    constexpr std::int64_t kMax = std::numeric_limits<std::int32_t>::max();
    if (const std::int64_t hi = first_reaching(253); hi <= kMax)
      boundaries &= rescale_saturate(static_cast<std::int32_t>(hi), p) == 127 &&
                    rescale_saturate(static_cast<std::int32_t>(hi - 1), p) == 126;
    if (const std::int64_t lo = first_reaching(255); lo <= kMax)
      boundaries &= rescale_saturate(static_cast<std::int32_t>(-lo), p) == -128 &&
                    rescale_saturate(static_cast<std::int32_t>(1 - lo), p) == -127;
    boundaries &= rescale_saturate(acc, p) == exact_rescale(acc, p);
  }
  o.require(worst <= 1, "|out - round(acc*M)| <= 1 LSB");
  o.require(boundaries, "exact saturation boundaries");
  o.note("100000 cases, max diff " + std::to_string(worst) + " LSB");
  return o;
}

std::vector<Word> synthetic_weights(const char* preset, double rho = 0.0, std::uint64_t seed = kSeed) {
  const WeightPreset& p = weight_preset(preset);
  auto w = synth_weights(p.nu, p.group, kN, seed, rho).words;
  w.resize(kN);
  return w;
}

std::vector<Word> synthetic_activations() { return synth_relu_activations(1.0, kReluScaleFraction, kN, kSeed + 1); }

Outcome entropy_machinery() {
  Outcome o;
  double worst = 0.0;
  for (int k = 0; k <= 1000; ++k) {
    const double h = k / 1000.0;
    worst = std::max(worst, std::abs(binary_entropy(binary_entropy_inverse(h)) - h));
  }
  o.require(worst < 1e-10, "H(H_inv(h)) == h on 1001 points");
  o.require(transition_lower_bound(8.0) == 4.0, "bound(8) == 4");
  o.require(transition_lower_bound(0.0) == 0.0, "bound(0) == 0");

  const std::pair<const char*, std::vector<Word>> streams[] = {
      {"resnet-like", synthetic_weights("resnet-like")},
      {"pruned", synthetic_weights("resnet-like", 0.8)},
      {"relu", synthetic_activations()},
  };
  double min_gap = std::numeric_limits<double>::infinity();
  int checked = 0;
  for (const auto& [label, words] : streams) {
    const WordStream s{words};
    for (const char* name : kSchemeNames) {
      const CodingScheme scheme = CodingScheme::parse(name, label == std::string("relu") ? 0x80 : 0x00);
      if (scheme.probability == ProbabilityStage::SignMagnitude && label == std::string("relu")) continue;
      const BoundGapReport r = bound_gap_report(s, scheme);
      min_gap = std::min({min_gap, r.transition_gap, r.bitprob_gap});
      const bool ok = r.transition_gap >= -0.01 && r.bitprob_gap >= -0.01;
      o.require(ok, std::string(label) + "/" + name);
      ++checked;
    }
  }
  o.note(std::to_string(checked) + " stream/scheme pairs, min gap " + fmt("%.4f", min_gap));
  return o;
}

Outcome uncorrelated_identity() {
  Outcome o;
  for (const char* preset : {"resnet-like", "mobilenet-like"}) {
    auto w = synthetic_weights(preset);
    shuffle_words(w, kSeed);
    const auto res = uncorrelated_consistency(measure(w));
    const double worst = *std::max_element(res.begin(), res.end());
    o.require(worst < 0.005, std::string(preset) + " residual < 0.005");
    o.note(std::string(preset) + " max residual " + fmt("%.5f", worst));
  }
  return o;
}

std::vector<SchemeResult> compare(const std::vector<Word>& words, std::initializer_list<const char*> names,
                                  Word zp = 0) {
  std::vector<CodingScheme> schemes;
  for (const char* n : names) schemes.push_back(CodingScheme::parse(n, zp));
  return compare_schemes(WordStream{words}, schemes);
}

Outcome pruned_stats() {
  Outcome o;
  const auto rows = compare(synthetic_weights("resnet-like", 0.8), {"raw", "xor-msb+decorr"});
  const double mean_p = rows[0].stats.total_ones / 8.0;
  const double sw = *rows[1].reduction.switching_pct;
  o.require(mean_p >= 0.07 && mean_p <= 0.13, "raw mean bit probability in [0.07, 0.13]");
  o.require(sw <= -75.0, "xor-msb+decorr switching reduction >= 75%");
  o.note("raw mean p " + fmt("%.4f", mean_p) + ", xor-msb+decorr switching " + fmt("%+.2f%%", sw));
  return o;
}

Outcome relu_stats() {
  Outcome o;
  const auto a = synthetic_activations();
  const double zp = static_cast<double>(std::count(a.begin(), a.end(), Word{0x80})) / static_cast<double>(a.size());
  const auto rows = compare(a, {"raw", "xor-zp"}, 0x80);
  const double raw_sw = *rows[0].reduction.switching_pct;
  const double zp_bp = rows[1].reduction.bitprob_pct;
  o.require(std::abs(zp - 0.5) <= 0.005, "ZP fraction 0.5 +- 0.005");
  o.require(raw_sw <= -50.0, "raw switching reduction >= 50%");
  o.require(zp_bp <= -45.0, "xor-zp bit-probability reduction >= 45%");
  o.note("ZP fraction " + fmt("%.4f", zp) + ", raw switching " + fmt("%+.2f%%", raw_sw) + ", xor-zp bitprob " +
         fmt("%+.2f%%", zp_bp));
  return o;
}

Outcome leptokurtic_weights() {
  Outcome o;
  for (const char* preset : {"resnet-like", "mobilenet-like"}) {
    const auto rows = compare(synthetic_weights(preset), {"raw", "xor-msb"});
    const double sw = *rows[1].reduction.switching_pct;
    o.require(sw <= -15.0 && sw >= -35.0, std::string(preset) + " xor-msb switching reduction in [15, 35]%");
    o.require(rows[1].stats.total_switching < rows[0].stats.total_switching,
              std::string(preset) + " switching below raw");
    o.require(rows[1].stats.total_ones < rows[0].stats.total_ones, std::string(preset) + " 1-bits below raw");
    o.note(std::string(preset) + " xor-msb switching " + fmt("%+.2f%%", sw) + " bitprob " +
           fmt("%+.2f%%", rows[1].reduction.bitprob_pct));
  }
  return o;
}

Outcome toggle_ordering() {
  Outcome o;
  constexpr std::size_t kRows = 64, kCols = 256;
  const WeightPreset& p = weight_preset("resnet-like");
  const auto w = synth_weights(p.nu, p.group, kRows * kCols, kSeed).words;
  const auto a = synth_relu_activations(1.0, kReluScaleFraction, kCols, kSeed + 1);
  const MacWorkload wl = make_workload(w, a, kCols, kRows, -128);
  const MacVariant all[] = {MacVariant::A, MacVariant::B, MacVariant::C};
  const MacsimDocument doc = run_macsim(wl, all);
  const ToggleReport& ta = doc.runs[0].toggles;
  const ToggleReport& tb = doc.runs[1].toggles;
  const ToggleReport& tc = doc.runs[2].toggles;
  o.require(doc.equivalent, "identical outputs across variants");
  o.require(tc.total() < ta.total(), "total(C) < total(A)");
  o.require(tb.multiplier() < ta.multiplier(), "multiplier(B) < multiplier(A)");
  const auto ratio = [](std::uint64_t x, std::uint64_t y) { return static_cast<double>(x) / static_cast<double>(y); };
  o.note("total B/A " + fmt("%.4f", ratio(tb.total(), ta.total())) + " C/A " + fmt("%.4f", ratio(tc.total(), ta.total())) +
         ", multiplier B/A " + fmt("%.4f", ratio(tb.multiplier(), ta.multiplier())) + " C/A " +
         fmt("%.4f", ratio(tc.multiplier(), ta.multiplier())));
  return o;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(LPCODE_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string dir_contents(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::string all;
  for (const auto& f : files) all += fs::relative(f, dir).string() + "\n" + slurp(f);
  return all;
}

Outcome cli_determinism() {
  Outcome o;
  const fs::path root = fs::temp_directory_path() / ("lpcode_acceptance_" + std::to_string(getpid()));
  fs::remove_all(root);
  fs::create_directories(root);
  const std::string b = (root / "bundle").string();
  if (run_cli("synth --seed 7 --n 200000 --rho 0.8 --out " + b) != 0) {
    o.require(false, "synth setup");
    return o;
  }
  struct Cmd {
    const char* name;
    std::string args;
    bool dir_output;
  };
  const std::vector<Cmd> cmds = {
      {"synth", "synth --seed 7 --n 200000 --rho 0.8 --out {out}", true},
      {"analyze", "analyze --bundle " + b + " --out {out}", false},
      {"analyze-csv", "analyze --format csv --bundle " + b + " --out {out}", false},
      {"report", "report --seed 7 --shuffle --bundle " + b + " --out {out}", false},
      {"report-csv", "report --format csv --seed 7 --shuffle --bundle " + b + " --out {out}", false},
      {"bound", "bound --seed 7 --shuffle --bundle " + b + " --out {out}", false},
      {"encode", "encode --scheme xor-msb+decorr --bundle " + b + " --out {out}", true},
      {"decode", "decode --bundle " + b + " --out {out}", true},
      {"macsim", "macsim --seed 7 --variant all --out {out}", false},
      {"macsim-bundle", "macsim --bundle " + b + " --weights weights --activations activations --out {out}", false},
  };
  int identical = 0;
  for (const auto& c : cmds) {
    std::string outputs[2];
    bool ran = true;
    for (int k = 0; k < 2; ++k) {
      const fs::path out = root / (std::string(c.name) + "_" + std::to_string(k));
      std::string args = c.args;
      args.replace(args.find("{out}"), 5, out.string());
      ran &= run_cli(args) == 0;
      outputs[k] = c.dir_output ? dir_contents(out) : slurp(out);
    }
    const bool same = ran && !outputs[0].empty() && outputs[0] == outputs[1];
    o.require(same, std::string(c.name) + " byte-identical");
    identical += same;
  }
  o.note(std::to_string(identical) + "/" + std::to_string(cmds.size()) + " commands byte-identical");
  fs::remove_all(root);
  return o;
}

struct Criterion {
  const char* id;
  double time_limit_s;  // 0: none
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  std::printf("kernels: %s\n", kernels::active().name);
  const Criterion criteria[] = {
      {"codec-roundtrip", 1.0, codec_roundtrip},
      {"xor-msb-involution-sm-rejection", 0.0, involution_and_sm},
      {"mac-equivalence", 10.0, mac_equivalence},
      {"rescale", 0.0, rescale},
      {"entropy-bound", 0.0, entropy_machinery},
      {"uncorrelated-identity", 0.0, uncorrelated_identity},
      {"pruned-stream-stats", 30.0, pruned_stats},
      {"relu-activation-stats", 0.0, relu_stats},
      {"leptokurtic-weight-stats", 0.0, leptokurtic_weights},
      {"toggle-proxy-ordering", 0.0, toggle_ordering},
      {"cli-determinism", 0.0, cli_determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit_s > 0.0) o.require(secs < c.time_limit_s, "runtime < " + fmt("%.0f s", c.time_limit_s));
    std::printf("%s %-34s %7.3fs  %s\n", o.pass ? "PASS" : "FAIL", c.id, secs, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed, std::size(criteria));
  return failed == 0 ? 0 : 1;
}
