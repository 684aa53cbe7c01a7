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

#include "lpcode/codec.hpp"

#include <algorithm>
#include <array>
#include <utility>

#include "lpcode/kernels.hpp"

namespace lpcode {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InadmissibleWord: return "InadmissibleWord";
    case ErrorCode::EmptyStream: return "EmptyStream";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::InvalidParam: return "InvalidParam";
    case ErrorCode::AccumulatorOverflow: return "AccumulatorOverflow";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::UnknownEncoding: return "UnknownEncoding";
    case ErrorCode::DuplicateName: return "DuplicateName";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

namespace {

constexpr std::array<std::pair<std::string_view, ProbabilityStage>, 6> kStageNames{{
    {"raw", ProbabilityStage::Raw},
    {"xor-msb", ProbabilityStage::XorMsb},
    {"xnor-msb", ProbabilityStage::XnorMsb},
    {"sm", ProbabilityStage::SignMagnitude},
    {"xor-zp", ProbabilityStage::XorZp},
    {"xnor-zp", ProbabilityStage::XnorZp},
}};

[[noreturn]] void throw_inadmissible(std::size_t index) {
  throw Error(ErrorCode::InadmissibleWord,
              "word 0x80 at index " + std::to_string(index) + " has no sign-magnitude form");
}

}  // namespace

CodingScheme CodingScheme::parse(std::string_view name, Word zp) {
  CodingScheme scheme;
  scheme.zp = zp;
  std::string_view base = name;
  if (const auto plus = name.find('+'); plus != std::string_view::npos) {
    base = name.substr(0, plus);
    const std::string_view suffix = name.substr(plus + 1);
    if (suffix == "decorr") {
      scheme.temporal = TemporalStage::Decorrelate;
    } else if (suffix == "corr") {
      scheme.temporal = TemporalStage::Correlate;
    } else {
      throw Error(ErrorCode::UnknownEncoding, "unknown temporal stage '" + std::string(suffix) + "'");
    }
  }
  for (const auto& [label, stage] : kStageNames) {
    if (label == base) {
      scheme.probability = stage;
      if (stage != ProbabilityStage::XorZp && stage != ProbabilityStage::XnorZp) scheme.zp = 0;
      return scheme;
    }
  }
  throw Error(ErrorCode::UnknownEncoding, "unknown coding scheme '" + std::string(name) + "'");
}

std::string CodingScheme::name() const {
  std::string out;
  for (const auto& [label, stage] : kStageNames)
    if (stage == probability) out = label;
  if (temporal == TemporalStage::Decorrelate) out += "+decorr";
  if (temporal == TemporalStage::Correlate) out += "+corr";
  return out;
}

Word encode_word(const CodingScheme& scheme, Word w) {
  Word out = 0;
  encode_words(scheme, {&w, 1}, {&out, 1});
  return out;
}

Word decode_word(const CodingScheme& scheme, Word w) {
  Word out = 0;
  decode_words(scheme, {&w, 1}, {&out, 1});
  return out;
}

void encode_words(const CodingScheme& scheme, std::span<const Word> in, std::span<Word> out) {
  const auto& k = kernels::active();
  switch (scheme.probability) {
    case ProbabilityStage::Raw:
      if (in.data() != out.data()) std::copy(in.begin(), in.end(), out.begin());
      return;
    case ProbabilityStage::XorMsb: k.xor_msb(in, out, false); return;
    case ProbabilityStage::XnorMsb: k.xor_msb(in, out, true); return;
    case ProbabilityStage::XorZp: k.xor_const(in, out, scheme.zp); return;
    case ProbabilityStage::XnorZp: k.xor_const(in, out, static_cast<Word>(~scheme.zp)); return;
    case ProbabilityStage::SignMagnitude:
      if (const auto bad = k.sm_encode(in, out); bad != kernels::kAllAdmissible) throw_inadmissible(bad);
      return;
  }
}

void decode_words(const CodingScheme& scheme, std::span<const Word> in, std::span<Word> out) {
  if (scheme.probability == ProbabilityStage::SignMagnitude) {
    if (const auto bad = kernels::active().sm_decode(in, out); bad != kernels::kAllAdmissible)
      throw_inadmissible(bad);
    return;
  }
  // every other probability stage is an involution
  encode_words(scheme, in, out);
}

WordStream decorrelate_stream(const WordStream& stream, LaneState& state, bool use_xnor) {
  WordStream out{std::vector<Word>(stream.size()), Interpretation::Coded};
  state.prev = kernels::active().prefix_xor(stream.words, out.words, state.prev, use_xnor ? 0xFF : 0x00);
  return out;
}

WordStream correlate_stream(const WordStream& stream, LaneState& state, bool use_xnor) {
  WordStream out{std::vector<Word>(stream.size()), Interpretation::Coded};
  state.prev = kernels::active().adjacent_xor(stream.words, out.words, state.prev, use_xnor ? 0xFF : 0x00);
  return out;
}

namespace {

Interpretation encoded_interpretation(const CodingScheme& scheme, Interpretation input) {
  if (scheme.temporal != TemporalStage::None) return Interpretation::Coded;
  switch (scheme.probability) {
    case ProbabilityStage::Raw: return input;
    case ProbabilityStage::SignMagnitude: return Interpretation::SignMag;
    case ProbabilityStage::XorZp: return scheme.zp == 0x80 ? Interpretation::Unsigned : Interpretation::Coded;
    default: return Interpretation::Coded;
  }
}

WordStream run_temporal(const CodingScheme& scheme, const WordStream& s, bool forward) {
  LaneState state{scheme.reset_state()};
  const bool decorrelate = (scheme.temporal == TemporalStage::Decorrelate) == forward;
  return decorrelate ? decorrelate_stream(s, state, scheme.uses_xnor())
                     : correlate_stream(s, state, scheme.uses_xnor());
}

}  // namespace

WordStream apply_scheme(const CodingScheme& scheme, const WordStream& stream, Direction direction) {
  if (direction == Direction::Encode) {
    WordStream coded{std::vector<Word>(stream.size()), encoded_interpretation(scheme, stream.interpretation)};
    encode_words(scheme, stream.words, coded.words);
    if (scheme.temporal == TemporalStage::None) return coded;
    return run_temporal(scheme, coded, true);
  }
  WordStream plain = scheme.temporal == TemporalStage::None ? stream : run_temporal(scheme, stream, false);
  decode_words(scheme, plain.words, plain.words);
  plain.interpretation = Interpretation::TwosComplement;
  return plain;
}

}  // namespace lpcode
