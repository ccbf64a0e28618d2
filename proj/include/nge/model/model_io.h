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

#ifndef NGE_MODEL_MODEL_IO_H_
#define NGE_MODEL_MODEL_IO_H_

// Model files: "NGE1", u16 version, u32 entry count, then per entry
// u16 name length, name, u8 dtype (0 f32, 1 f64, 2 i64), u8 rank and u64
// extents; after the header, every payload in entry order, row-major and
// little-endian. Hyperparameters are rank-0 i64 entries named "hyper.*".

#include <string>

#include "nge/model/model.h"

namespace nge::model {

inline constexpr uint16_t kModelFormatVersion = 1;

std::string serialize_model(const ModelParams<float>& params);
ModelParams<float> deserialize_model(const std::string& bytes);

void save_model(const std::string& path, const ModelParams<float>& params);
ModelParams<float> load_model(const std::string& path);

// Reads only the header and returns the format version and hyperparameters.
struct ModelFileInfo {
  uint16_t version = 0;
  HyperParams hyper;
  size_t entries = 0;
  size_t parameter_count = 0;
};
ModelFileInfo inspect_model(const std::string& path);

}  // namespace nge::model

#endif  // NGE_MODEL_MODEL_IO_H_
