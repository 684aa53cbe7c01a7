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

// Tensor bundle: a directory holding `manifest.json` plus one raw
// little-endian, row-major payload file per tensor.
//
//   {
//     "format_version": 1,
//     "provenance": "free text",
//     "tensors": [
//       { "name": "conv1/w", "dtype": "int8", "shape": [64, 27],
//         "scale": [0.01, ...], "axis": 0,        // or "scale": 0.02
//         "zero_point": 0, "encoding": "xor-msb",
//         "data_file": "conv1_w.bin", "byte_order": "little" } ] }

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lpcode/codec.hpp"

namespace lpcode {

enum class DType { Int8, UInt8, Int32 };

const char* to_string(DType d) noexcept;
DType parse_dtype(std::string_view s);
std::size_t element_size(DType d) noexcept;

struct TensorRecord {
  std::string name;
  DType dtype = DType::Int8;
  std::vector<std::int64_t> shape;
  std::vector<double> scales;  ///< one entry, or one per channel along `axis`
  std::optional<int> axis;
  std::int32_t zero_point = 0;
  std::string encoding = "raw";
  std::string data_file;

  std::size_t element_count() const;
  std::size_t byte_count() const { return element_count() * element_size(dtype); }
  bool is_8bit() const noexcept { return dtype != DType::Int32; }
  /// Zero point as the 8-bit word the XOR-ZP codes use.
  Word zero_point_word() const noexcept { return static_cast<Word>(static_cast<std::uint32_t>(zero_point)); }
  CodingScheme scheme() const { return CodingScheme::parse(encoding, zero_point_word()); }

  friend bool operator==(const TensorRecord&, const TensorRecord&) = default;
};

struct Manifest {
  static constexpr int kFormatVersion = 1;
  int format_version = kFormatVersion;
  std::vector<TensorRecord> tensors;
  std::string provenance;

  const TensorRecord* find(std::string_view name) const;
  friend bool operator==(const Manifest&, const Manifest&) = default;
};

/// Checks the record invariants that do not need the payload file.
void validate_record(const TensorRecord& record);

std::string manifest_to_json(const Manifest& manifest);
Manifest manifest_from_json(std::string_view text);

/// A validated bundle on disk; payloads are read on request.
class Bundle {
 public:
  /// `path` is the bundle directory or its manifest.json. Throws ParseError,
  /// NotFound, SizeMismatch, UnknownEncoding or DuplicateName.
  static Bundle open(const std::filesystem::path& path);

  const Manifest& manifest() const noexcept { return manifest_; }
  const std::filesystem::path& root() const noexcept { return root_; }
  const TensorRecord& record(std::string_view name) const;
  std::vector<std::uint8_t> load(std::string_view name) const;

 private:
  std::filesystem::path root_;
  Manifest manifest_;
};

/// Writes manifest.json and one payload per record into `dir` (created if
/// needed). `payloads[i]` belongs to `manifest.tensors[i]`. Output bytes are a
/// pure function of the inputs.
void write_bundle(const std::filesystem::path& dir, const Manifest& manifest,
                  std::span<const std::vector<std::uint8_t>> payloads);

/// Payload decoded to plain int8/uint8 words (the record's encoding undone).
std::vector<Word> decode_payload(const TensorRecord& record, std::span<const std::uint8_t> bytes);

/// Re-encodes an 8-bit tensor: returns the updated record (only `encoding`
/// changes) and payload.
std::pair<TensorRecord, std::vector<std::uint8_t>> reencode(const TensorRecord& record,
                                                            std::span<const std::uint8_t> bytes,
                                                            std::string_view new_encoding);

}  // namespace lpcode
