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

#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "lpcode/entropy.hpp"

using namespace lpcode;

// Reference roots of H(p) = h computed with an independent bracketing solver.
constexpr double kHinvHalf = 0.11002786443835955;
constexpr double kHinvEighth = 0.01712865507672656;

TEST_CASE("pattern entropy") {
  CHECK(pattern_entropy(std::vector<Word>(100, 0x42)) == 0.0);
  std::vector<Word> all;
  for (int w = 0; w < 256; ++w) all.push_back(static_cast<Word>(w));
  CHECK(pattern_entropy(all) == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(pattern_entropy(std::vector<Word>{1, 2, 1, 2}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(pattern_entropy(std::vector<Word>{}), Error);

  Histogram a, b, whole;
  a.add(std::vector<Word>{1, 1, 2});
  b.add(std::vector<Word>{3, 4});
  whole.add(std::vector<Word>{1, 1, 2, 3, 4});
  a.merge(b);
  CHECK(a.bins == whole.bins);
  CHECK(a.entropy() == whole.entropy());
}

TEST_CASE("binary entropy inverse") {
  CHECK(binary_entropy_inverse(1.0) == 0.5);
  CHECK(binary_entropy_inverse(0.0) == 0.0);
  CHECK(binary_entropy_inverse(0.5) == doctest::Approx(kHinvHalf).epsilon(1e-12));
  CHECK(binary_entropy_inverse(0.125) == doctest::Approx(kHinvEighth).epsilon(1e-12));
  for (int k = 0; k <= 1000; ++k) {
    const double h = k / 1000.0;
    CHECK(std::abs(binary_entropy(binary_entropy_inverse(h)) - h) < 1e-12);
  }
  for (const double bad : {-0.01, 1.01, std::nan("")}) {
    try {
      binary_entropy_inverse(bad);
      FAIL("expected DomainError");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::DomainError);
    }
  }
}

TEST_CASE("transition lower bound") {
  CHECK(transition_lower_bound(8.0) == 4.0);
  CHECK(transition_lower_bound(0.0) == 0.0);
  CHECK(transition_lower_bound(1.0) == doctest::Approx(8 * kHinvEighth).epsilon(1e-12));
  CHECK(transition_lower_bound(1.0) == doctest::Approx(0.136).epsilon(0.01));
  CHECK_THROWS_AS(transition_lower_bound(8.5), Error);
  CHECK_THROWS_AS(transition_lower_bound(1.0, 0), Error);
  // monotone in H
  double prev = 0.0;
  for (int k = 1; k <= 80; ++k) {
    const double b = transition_lower_bound(k / 10.0);
    CHECK(b > prev);
    prev = b;
  }
}

TEST_CASE("probability stages preserve pattern entropy") {
  std::mt19937_64 rng(21);
  WordStream s;
  for (int i = 0; i < 20000; ++i) s.words.push_back(static_cast<Word>(static_cast<int>(rng() % 31) - 15));
  const double h = pattern_entropy(s.words);
  for (const char* name : {"xor-msb", "xnor-msb", "sm", "xor-zp", "xnor-zp"}) {
    CAPTURE(name);
    const auto coded = apply_scheme(CodingScheme::parse(name, 0x80), s, Direction::Encode);
    CHECK(pattern_entropy(coded.words) == doctest::Approx(h).epsilon(1e-12));
  }
}

TEST_CASE("bound gap report") {
  WordStream constant{std::vector<Word>(1000, 0x00)};
  const auto c = bound_gap_report(constant, CodingScheme::parse("xor-msb+decorr"));
  CHECK(c.pattern_entropy == 0.0);
  CHECK(c.bound == 0.0);
  CHECK(c.measured_transitions == 0.0);

  std::mt19937_64 rng(1);
  WordStream uniform;
  for (int i = 0; i < 1'000'000; ++i) uniform.words.push_back(static_cast<Word>(rng()));
  const auto u = bound_gap_report(uniform, CodingScheme::parse("raw"));
  // B*H_inv(H/B) is steep near H = B: the plug-in entropy's small-sample bias
  // (about 255 / (2 N ln 2) bits) lowers the bound by roughly 0.02 here
  CHECK(u.bound > 3.95);
  CHECK(std::abs(u.transition_gap) < 0.05);
  CHECK(std::abs(u.bitprob_gap) < 0.05);
}
