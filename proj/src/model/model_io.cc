// Copyright 2026 The Neural Game Engine Authors.
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

#include "nge/model/model_io.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "nge/common/errors.h"

namespace nge::model {
namespace {

constexpr char kMagic[4] = {'N', 'G', 'E', '1'};
enum DType : uint8_t { kF32 = 0, kF64 = 1, kI64 = 2 };

class Writer {
 public:
  void u8(uint8_t v) { out_.push_back(static_cast<char>(v)); }
  void u16(uint16_t v) { put(v, 2); }
  void u32(uint32_t v) { put(v, 4); }
  void u64(uint64_t v) { put(v, 8); }
  void bytes(const std::string& s) { out_ += s; }
  std::string take() { return std::move(out_); }

 private:
  void put(uint64_t v, int n) {
    for (int i = 0; i < n; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  std::string out_;
};

class Reader {
 public:
  explicit Reader(const std::string& s) : s_(s) {}
  uint8_t u8() { return static_cast<uint8_t>(get(1)); }
  uint16_t u16() { return static_cast<uint16_t>(get(2)); }
  uint32_t u32() { return static_cast<uint32_t>(get(4)); }
  uint64_t u64() { return get(8); }
  std::string bytes(size_t n) {
    need(n);
    std::string out = s_.substr(pos_, n);
    pos_ += n;
    return out;
  }
  bool done() const { return pos_ == s_.size(); }

 private:
  void need(size_t n) const {
    if (s_.size() - pos_ < n) throw ValidationError("model file truncated");
  }
  uint64_t get(int n) {
    need(n);
    uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= static_cast<uint64_t>(static_cast<uint8_t>(s_[pos_ + i])) << (8 * i);
    pos_ += n;
    return v;
  }
  const std::string& s_;
  size_t pos_ = 0;
};

struct Entry {
  std::string name;
  uint8_t dtype = kF32;
  std::vector<uint64_t> extents;
  const Tensor<float>* tensor = nullptr;
  int64_t scalar = 0;
};

std::vector<std::pair<std::string, int64_t>> hyper_entries(const HyperParams& h) {
  return {{"hyper.state_channels", h.state_channels},
          {"hyper.reward_channels", h.reward_channels},
          {"hyper.tile_size", h.tile_size},
          {"hyper.num_actions", h.num_actions},
          {"hyper.iterations", h.iterations},
          {"hyper.gating", static_cast<int64_t>(h.gating)},
          {"hyper.core", static_cast<int64_t>(h.core)},
          {"hyper.condition_every_iteration", h.condition_every_iteration ? 1 : 0}};
}

struct ParsedEntry {
  uint8_t dtype;
  std::vector<uint64_t> extents;
  std::string payload;
};

struct ParsedFile {
  uint16_t version;
  std::vector<std::string> order;
  std::map<std::string, ParsedEntry> entries;
};

size_t extent_product(const std::vector<uint64_t>& extents) {
  size_t n = 1;
  for (uint64_t e : extents) n *= e;
  return n;
}

ParsedFile parse(const std::string& bytes, bool with_payloads) {
  Reader r(bytes);
  if (r.bytes(4) != std::string(kMagic, 4)) throw ValidationError("not a model file (bad magic)");
  ParsedFile file;
  file.version = r.u16();
  if (file.version != kModelFormatVersion) {
    throw ValidationError("unsupported model format version " + std::to_string(file.version));
  }
  const uint32_t count = r.u32();
  for (uint32_t i = 0; i < count; ++i) {
    const uint16_t len = r.u16();
    std::string name = r.bytes(len);
    ParsedEntry e;
    e.dtype = r.u8();
    if (e.dtype > kI64) throw ValidationError("unknown dtype tag in entry '" + name + "'");
    const uint8_t rank = r.u8();
    for (int k = 0; k < rank; ++k) e.extents.push_back(r.u64());
    if (file.entries.count(name)) throw ValidationError("duplicate entry '" + name + "'");
    file.order.push_back(name);
    file.entries.emplace(std::move(name), std::move(e));
  }
  if (!with_payloads) return file;
  for (const auto& name : file.order) {
    ParsedEntry& e = file.entries[name];
    const size_t width = e.dtype == kF32 ? 4 : 8;
    e.payload = r.bytes(extent_product(e.extents) * width);
  }
  if (!r.done()) throw ValidationError("trailing bytes after model payload");
  return file;
}

int64_t read_i64(const ParsedFile& file, const std::string& name) {
  auto it = file.entries.find(name);
  if (it == file.entries.end() || it->second.dtype != kI64 || !it->second.extents.empty()) {
    throw ValidationError("missing scalar entry '" + name + "'");
  }
  Reader r(it->second.payload);
  return static_cast<int64_t>(r.u64());
}

HyperParams read_hyper(const ParsedFile& file) {
  HyperParams h;
  h.state_channels = static_cast<int>(read_i64(file, "hyper.state_channels"));
  h.reward_channels = static_cast<int>(read_i64(file, "hyper.reward_channels"));
  h.tile_size = static_cast<int>(read_i64(file, "hyper.tile_size"));
  h.num_actions = static_cast<int>(read_i64(file, "hyper.num_actions"));
  h.iterations = static_cast<int>(read_i64(file, "hyper.iterations"));
  const int64_t gating = read_i64(file, "hyper.gating");
  const int64_t core = read_i64(file, "hyper.core");
  if (gating < 0 || gating > 2 || core < 0 || core > 1) throw ValidationError("bad gating/core tag");
  h.gating = static_cast<GatingMode>(gating);
  h.core = static_cast<CoreType>(core);
  h.condition_every_iteration = read_i64(file, "hyper.condition_every_iteration") != 0;
  h.validate();
  return h;
}

}  // namespace

std::string serialize_model(const ModelParams<float>& params) {
  std::vector<Entry> entries;
  for (const auto& [name, value] : hyper_entries(params.hyper)) {
    Entry e;
    e.name = name;
    e.dtype = kI64;
    e.scalar = value;
    entries.push_back(e);
  }
  params.for_each([&](std::string_view name, const Parameter<float>& p) {
    Entry e;
    e.name = std::string(name);
    e.dtype = kF32;
    for (int d : p.value.shape) e.extents.push_back(static_cast<uint64_t>(d));
    e.tensor = &p.value;
    entries.push_back(e);
  });

  Writer w;
  w.bytes(std::string(kMagic, 4));
  w.u16(kModelFormatVersion);
  w.u32(static_cast<uint32_t>(entries.size()));
  for (const Entry& e : entries) {
    w.u16(static_cast<uint16_t>(e.name.size()));
    w.bytes(e.name);
    w.u8(e.dtype);
    w.u8(static_cast<uint8_t>(e.extents.size()));
    for (uint64_t x : e.extents) w.u64(x);
  }
  for (const Entry& e : entries) {
    if (e.dtype == kI64) {
      w.u64(static_cast<uint64_t>(e.scalar));
    } else {
      for (float v : e.tensor->data) w.u32(std::bit_cast<uint32_t>(v));
    }
  }
  return w.take();
}

ModelParams<float> deserialize_model(const std::string& bytes) {
  const ParsedFile file = parse(bytes, true);
  ModelParams<float> params = make_params<float>(read_hyper(file));
  params.for_each([&](std::string_view name, Parameter<float>& p) {
    auto it = file.entries.find(std::string(name));
    if (it == file.entries.end()) throw ValidationError("missing entry '" + std::string(name) + "'");
    const ParsedEntry& e = it->second;
    std::vector<uint64_t> expected(p.value.shape.begin(), p.value.shape.end());
    if (e.dtype != kF32 || e.extents != expected) {
      throw ValidationError("entry '" + std::string(name) + "' has the wrong dtype or shape");
    }
    Reader r(e.payload);
    for (float& v : p.value.data) v = std::bit_cast<float>(r.u32());
    if (p.mask) {
      for (size_t i = 0; i < p.size(); ++i) {
        if (p.mask->data[i] == 0.0f && p.value.data[i] != 0.0f) {
          throw ValidationError("entry '" + std::string(name) + "' violates its kernel mask");
        }
      }
    }
  });
  return params;
}

void save_model(const std::string& path, const ModelParams<float>& params) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  const std::string bytes = serialize_model(params);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {
std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open model file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}
}  // namespace

ModelParams<float> load_model(const std::string& path) { return deserialize_model(read_file(path)); }

ModelFileInfo inspect_model(const std::string& path) {
  const std::string bytes = read_file(path);
  const ParsedFile file = parse(bytes, true);
  ModelFileInfo info;
  info.version = file.version;
  info.hyper = read_hyper(file);
  info.entries = file.order.size();
  for (const auto& [name, e] : file.entries) {
    if (e.dtype != kI64) info.parameter_count += extent_product(e.extents);
  }
  return info;
}

}  // namespace nge::model
