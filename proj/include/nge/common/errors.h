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

#ifndef NGE_COMMON_ERRORS_H_
#define NGE_COMMON_ERRORS_H_

#include <stdexcept>
#include <string>

namespace nge {

// Malformed user input: levels, manifests, configs, model files.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Tensor or observation extents that do not fit an operation.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// step() called on a terminal state.
class EpisodeFinishedError : public std::logic_error {
 public:
  EpisodeFinishedError() : std::logic_error("episode-finished") {}
};

// Training produced a non-finite loss.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nge

#endif  // NGE_COMMON_ERRORS_H_
