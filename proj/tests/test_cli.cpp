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

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int status;
  std::string out;
};

Result run(const std::string& args) {
  const std::string cmd = std::string(LPCODE_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  while (const std::size_t n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  const int raw = pclose(pipe);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("lpcode_cli_" + std::to_string(getpid()) + "_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("exit codes") {
  CHECK(run("--help").status == 0);
  CHECK(run("").status != 0);
  CHECK(run("frobnicate").status == 1);
  CHECK(run("analyze").status == 1);
  CHECK(run("analyze --bundle /nonexistent/bundle").status == 1);
  CHECK(run("report --bundle " LPCODE_FIXTURE_DIR "/minimal --shuffle").status == 1);
  CHECK(run("report --bundle " LPCODE_FIXTURE_DIR "/minimal --schemes bogus").status == 1);
  CHECK(run("synth").status == 1);
  CHECK(run("macsim --variant D").status == 1);
  CHECK(run("macsim --format csv --rows 2 --length 8").status == 1);
}

TEST_CASE("analyze the fixture") {
  const Result r = run("analyze --bundle " LPCODE_FIXTURE_DIR "/minimal");
  REQUIRE(r.status == 0);
  const auto j = nlohmann::json::parse(r.out);
  REQUIRE(j["rows"].size() == 1);
  // 0x01 0xFF 0x7F 0x80: 1+8+7+1 ones over 4 words
  CHECK(j["rows"][0]["PR1"].get<double>() == doctest::Approx(17.0 / 4));

  const Result csv = run("analyze --format csv --bundle " LPCODE_FIXTURE_DIR "/minimal");
  REQUIRE(csv.status == 0);
  CHECK(csv.out.rfind("tensor,scheme,T,PR1,switching_reduction_pct,bitprob_reduction_pct\n", 0) == 0);
}

TEST_CASE("synth, encode, decode and report") {
  const fs::path dir = scratch("flow");
  REQUIRE(run("synth --seed 4 --n 20000 --rho 0.8 --out " + dir.string()).status == 0);
  const std::string weights = slurp(dir / "weights.bin");
  REQUIRE(weights.size() == 20000);

  const fs::path coded = scratch("flow_coded");
  REQUIRE(run("encode --bundle " + dir.string() + " --scheme xor-msb+decorr --tensor weights --out " +
              coded.string())
              .status == 0);
  CHECK(slurp(coded / "weights.bin") != weights);
  CHECK(slurp(coded / "activations.bin") == slurp(dir / "activations.bin"));
  CHECK(slurp(coded / "manifest.json").find("xor-msb+decorr") != std::string::npos);

  // stored-byte analysis differs, decoded reports match
  CHECK(run("analyze --bundle " + coded.string()).out != run("analyze --bundle " + dir.string()).out);
  CHECK(run("report --bundle " + coded.string()).out == run("report --bundle " + dir.string()).out);

  REQUIRE(run("decode --bundle " + coded.string()).status == 0);
  CHECK(slurp(coded / "weights.bin") == weights);
  CHECK(slurp(coded / "manifest.json") == slurp(dir / "manifest.json"));

  const Result rep = run("report --seed 9 --shuffle --bundle " + dir.string());
  REQUIRE(rep.status == 0);
  const auto j = nlohmann::json::parse(rep.out);
  CHECK(j["shuffle_seed"] == 9);
  CHECK(j["rows"].size() == 9);

  const Result bound = run("bound --bundle " + dir.string() + " --schemes raw,xor-msb");
  REQUIRE(bound.status == 0);
  CHECK(nlohmann::json::parse(bound.out)["rows"].size() == 6);

  const Result mac = run("macsim --bundle " + dir.string() +
                         " --weights weights --activations activations --rows 8 --length 256");
  REQUIRE(mac.status == 0);
  CHECK(nlohmann::json::parse(mac.out)["equivalence"] == "pass");
  fs::remove_all(dir);
  fs::remove_all(coded);
}

TEST_CASE("fixed seeds give identical output") {
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  REQUIRE(run("synth --seed 11 --n 5000 --out " + a.string()).status == 0);
  REQUIRE(run("synth --seed 11 --n 5000 --out " + b.string()).status == 0);
  for (const char* f : {"manifest.json", "weights.bin", "activations.bin"}) CHECK(slurp(a / f) == slurp(b / f));
  const std::string args = "report --seed 3 --shuffle --bundle " + a.string();
  CHECK(run(args).out == run(args).out);
  CHECK(run("macsim --seed 5 --rows 4 --length 64").out == run("macsim --seed 5 --rows 4 --length 64").out);
  CHECK(run("macsim --seed 5 --rows 4 --length 64").out != run("macsim --seed 6 --rows 4 --length 64").out);
  fs::remove_all(a);
  fs::remove_all(b);
}
