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

#ifndef NGE_CLI_SESSION_H_
#define NGE_CLI_SESSION_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "nge/evalkit/evalkit.h"
#include "nge/gridworld/gridworld.h"
#include "nge/model/engine.h"

namespace nge::cli {

using gridworld::Action;
using gridworld::Game;
using gridworld::Grid;
using gridworld::Observation;

struct StepOutcome {
  Observation observation;
  int reward = 0;
  bool terminal = false;
};

// reset/step environment over either the game rules or a learned model.
// Learned sessions only use the game's palette, to render the start level
// and to read predictions back as tiles; they never consult its rules.
class Session {
 public:
  static Session oracle(const Game& game, uint64_t seed = 0);
  static Session learned(const model::ModelParams<float>& params, const Game& game, uint64_t seed = 0);

  bool is_learned() const { return packed_ != nullptr; }
  bool started() const { return started_; }
  int tick() const { return tick_; }
  uint64_t seed() const { return seed_; }
  const Observation& observation() const;
  // Oracle sessions: the true grid. Learned sessions: tile_map of the
  // current prediction.
  Grid grid() const;
  bool terminal() const { return terminal_; }

  const Observation& reset(const Grid& level);
  StepOutcome step(Action action);

 private:
  Session(const Game& game, uint64_t seed) : game_(&game), seed_(seed) {}

  const Game* game_;
  std::shared_ptr<const model::PackedParams<float>> packed_;
  uint64_t seed_ = 0;
  bool started_ = false;
  bool terminal_ = false;
  int tick_ = 0;
  gridworld::GameState state_;
  Observation current_;
};

// One character per tile, the palette symbol, optionally in the tile's
// average colour (24-bit ANSI).
std::string glyph_frame(const Grid& grid, const gridworld::TilePalette& palette, bool color);

}  // namespace nge::cli

#endif  // NGE_CLI_SESSION_H_
