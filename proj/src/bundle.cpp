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

#include "lpcode/bundle.hpp"

#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include "json.hpp"

namespace lpcode {

using ordered_json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kManifestName = "manifest.json";

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

template <typename T>
T field(const ordered_json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) parse_error(where + ": missing field '" + key + "'");
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    parse_error(where + ": field '" + key + "' has the wrong type");
  }
}

TensorRecord record_from_json(const ordered_json& j, std::size_t index) {
  const std::string where = "tensor #" + std::to_string(index);
  if (!j.is_object()) parse_error(where + " is not an object");
  TensorRecord r;
  r.name = field<std::string>(j, "name", where);
  r.dtype = parse_dtype(field<std::string>(j, "dtype", where));
  r.shape = field<std::vector<std::int64_t>>(j, "shape", where);
  const auto scale = j.find("scale");
  if (scale == j.end()) parse_error(where + ": missing field 'scale'");
  if (scale->is_number()) {
    r.scales = {scale->get<double>()};
  } else if (scale->is_array()) {
    r.scales = field<std::vector<double>>(j, "scale", where);
    r.axis = field<int>(j, "axis", where);
  } else {
    parse_error(where + ": 'scale' must be a number or an array");
  }
  r.zero_point = field<std::int32_t>(j, "zero_point", where);
  r.encoding = field<std::string>(j, "encoding", where);
  r.data_file = field<std::string>(j, "data_file", where);
  if (const auto bo = j.find("byte_order"); bo != j.end() && *bo != "little")
    parse_error(where + ": only little-endian payloads are supported");
  return r;
}

ordered_json record_to_json(const TensorRecord& r) {
  ordered_json j;
  j["name"] = r.name;
  j["dtype"] = to_string(r.dtype);
  j["shape"] = r.shape;
  if (r.axis) {
    j["scale"] = r.scales;
    j["axis"] = *r.axis;
  } else {
    j["scale"] = r.scales.empty() ? 1.0 : r.scales.front();
  }
  j["zero_point"] = r.zero_point;
  j["encoding"] = r.encoding;
  j["data_file"] = r.data_file;
  j["byte_order"] = "little";
  return j;
}

std::vector<std::uint8_t> read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::NotFound, "cannot open " + p.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

const char* to_string(DType d) noexcept {
  switch (d) {
    case DType::Int8: return "int8";
    case DType::UInt8: return "uint8";
    case DType::Int32: return "int32";
  }
  return "?";
}

DType parse_dtype(std::string_view s) {
  if (s == "int8") return DType::Int8;
  if (s == "uint8") return DType::UInt8;
  if (s == "int32") return DType::Int32;
  parse_error("unsupported dtype '" + std::string(s) + "'");
}

std::size_t element_size(DType d) noexcept { return d == DType::Int32 ? 4 : 1; }

std::size_t TensorRecord::element_count() const {
  std::size_t n = 1;
  for (const auto d : shape) n *= static_cast<std::size_t>(d);
  return n;
}

const TensorRecord* Manifest::find(std::string_view name) const {
  for (const auto& t : tensors)
    if (t.name == name) return &t;
  return nullptr;
}

void validate_record(const TensorRecord& r) {
  const std::string where = "tensor '" + r.name + "'";
  if (r.name.empty()) parse_error("tensor with empty name");
  for (const auto d : r.shape)
    if (d < 0) parse_error(where + ": negative dimension");
  if (r.scales.empty()) parse_error(where + ": no scale");
  for (const double s : r.scales)
    if (!(s > 0.0)) parse_error(where + ": scales must be positive");
  if (r.axis) {
    if (*r.axis < 0 || static_cast<std::size_t>(*r.axis) >= r.shape.size())
      parse_error(where + ": channel axis out of range");
    if (static_cast<std::int64_t>(r.scales.size()) != r.shape[*r.axis])
      throw Error(ErrorCode::SizeMismatch, where + ": per-channel scale count does not match the channel axis");
  } else if (r.scales.size() != 1) {
    parse_error(where + ": scale vector without a channel axis");
  }
  const CodingScheme scheme = r.scheme();
  if (!r.is_8bit() && scheme != CodingScheme{})
    throw Error(ErrorCode::UnknownEncoding, where + ": 32-bit tensors must use encoding 'raw'");
  const fs::path file(r.data_file);
  if (r.data_file.empty() || file.is_absolute())
    parse_error(where + ": data_file must be a relative path");
  for (const auto& part : file)
    if (part == "..") parse_error(where + ": data_file may not leave the bundle directory");
}

std::string manifest_to_json(const Manifest& m) {
  ordered_json j;
  j["format_version"] = m.format_version;
  j["provenance"] = m.provenance;
  j["tensors"] = ordered_json::array();
  for (const auto& t : m.tensors) j["tensors"].push_back(record_to_json(t));
  return j.dump(2) + "\n";
}

Manifest manifest_from_json(std::string_view text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    parse_error(std::string("manifest is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) parse_error("manifest must be a JSON object");
  Manifest m;
  m.format_version = field<int>(j, "format_version", "manifest");
  if (m.format_version != Manifest::kFormatVersion)
    parse_error("unsupported format_version " + std::to_string(m.format_version));
  if (const auto p = j.find("provenance"); p != j.end()) {
    if (!p->is_string()) parse_error("manifest: 'provenance' must be a string");
    m.provenance = p->get<std::string>();
  }
  const auto tensors = j.find("tensors");
  if (tensors == j.end() || !tensors->is_array()) parse_error("manifest: 'tensors' must be an array");
  std::set<std::string> names;
  for (std::size_t i = 0; i < tensors->size(); ++i) {
    TensorRecord r = record_from_json((*tensors)[i], i);
    validate_record(r);
    if (!names.insert(r.name).second) throw Error(ErrorCode::DuplicateName, "duplicate tensor name '" + r.name + "'");
    m.tensors.push_back(std::move(r));
  }
  return m;
}

Bundle Bundle::open(const fs::path& path) {
  Bundle b;
  fs::path manifest_path = path;
  if (fs::is_directory(path)) {
    manifest_path = path / kManifestName;
    b.root_ = path;
  } else {
    b.root_ = path.parent_path();
  }
  if (!fs::exists(manifest_path)) throw Error(ErrorCode::NotFound, "no manifest at " + manifest_path.string());
  const auto bytes = read_file(manifest_path);
  b.manifest_ = manifest_from_json(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
  for (const auto& r : b.manifest_.tensors) {
    const fs::path data = b.root_ / r.data_file;
    std::error_code ec;
    const auto size = fs::file_size(data, ec);
    if (ec) throw Error(ErrorCode::NotFound, "tensor '" + r.name + "': missing payload " + data.string());
    if (size != r.byte_count())
      throw Error(ErrorCode::SizeMismatch, "tensor '" + r.name + "': payload has " + std::to_string(size) +
                                               " bytes, shape needs " + std::to_string(r.byte_count()));
  }
  return b;
}

const TensorRecord& Bundle::record(std::string_view name) const {
  if (const TensorRecord* r = manifest_.find(name)) return *r;
  throw Error(ErrorCode::NotFound, "no tensor named '" + std::string(name) + "'");
}

std::vector<std::uint8_t> Bundle::load(std::string_view name) const {
  const TensorRecord& r = record(name);
  auto bytes = read_file(root_ / r.data_file);
  if (bytes.size() != r.byte_count())
    throw Error(ErrorCode::SizeMismatch, "tensor '" + r.name + "': payload changed size on disk");
  return bytes;
}

void write_bundle(const fs::path& dir, const Manifest& manifest, std::span<const std::vector<std::uint8_t>> payloads) {
  if (payloads.size() != manifest.tensors.size())
    throw Error(ErrorCode::InvalidParam, "one payload per tensor record is required");
  std::set<std::string> names;
  for (std::size_t i = 0; i < payloads.size(); ++i) {
    const auto& r = manifest.tensors[i];
    validate_record(r);
    if (!names.insert(r.name).second) throw Error(ErrorCode::DuplicateName, "duplicate tensor name '" + r.name + "'");
    if (payloads[i].size() != r.byte_count())
      throw Error(ErrorCode::SizeMismatch, "tensor '" + r.name + "': payload size does not match its shape");
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());
  auto write = [](const fs::path& p, const void* data, std::size_t size) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + p.string());
  };
  for (std::size_t i = 0; i < payloads.size(); ++i)
    write(dir / manifest.tensors[i].data_file, payloads[i].data(), payloads[i].size());
  const std::string text = manifest_to_json(manifest);
  write(dir / kManifestName, text.data(), text.size());
}

std::vector<Word> decode_payload(const TensorRecord& record, std::span<const std::uint8_t> bytes) {
  if (!record.is_8bit()) throw Error(ErrorCode::InvalidParam, "tensor '" + record.name + "' is not 8-bit");
  return apply_scheme(record.scheme(), WordStream{{bytes.begin(), bytes.end()}, Interpretation::Coded},
                      Direction::Decode)
      .words;
}

std::pair<TensorRecord, std::vector<std::uint8_t>> reencode(const TensorRecord& record,
                                                            std::span<const std::uint8_t> bytes,
                                                            std::string_view new_encoding) {
  TensorRecord updated = record;
  updated.encoding = std::string(new_encoding);
  const CodingScheme target = updated.scheme();
  updated.encoding = target.name();
  WordStream plain{decode_payload(record, bytes), Interpretation::TwosComplement};
  return {updated, apply_scheme(target, plain, Direction::Encode).words};
}

}  // namespace lpcode
