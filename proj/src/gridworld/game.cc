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

#include <algorithm>
#include <sstream>

#include "nge/common/errors.h"
#include "nge/gridworld/gridworld.h"

namespace nge::gridworld {

int Grid::count(TileId t) const { return static_cast<int>(std::count(cells.begin(), cells.end(), t)); }

std::pair<int, int> action_delta(Action a) {
  switch (a) {
    case Action::kUp:
      return {0, -1};
    case Action::kDown:
      return {0, 1};
    case Action::kLeft:
      return {-1, 0};
    case Action::kRight:
      return {1, 0};
  }
  return {0, 0};
}

std::string_view action_name(Action a) {
  static constexpr std::string_view kNames[] = {"up", "down", "left", "right"};
  return kNames[static_cast<int>(a)];
}

Action action_from_index(int index) {
  if (index < 0 || index >= kNumActions) throw ValidationError("invalid action id " + std::to_string(index));
  return static_cast<Action>(index);
}

void Game::validate(const Grid& grid) const {
  std::ostringstream problems;
  if (grid.width < 3 || grid.height < 3) {
    problems << " level must be at least 3x3 (got " << grid.width << "x" << grid.height << ");";
  }
  if (grid.cells.size() != static_cast<size_t>(grid.width) * grid.height) {
    throw ValidationError("level: cell count does not match extents");
  }
  std::vector<std::pair<int, int>> avatars;
  for (int h = 0; h < grid.height; ++h) {
    for (int w = 0; w < grid.width; ++w) {
      const TileId t = grid.at(w, h);
      if (t >= palette_.size()) {
        problems << " cell (" << w << "," << h << ") has tile id " << static_cast<int>(t) << " outside palette;";
      } else if (t == avatar()) {
        avatars.emplace_back(w, h);
      }
    }
  }
  if (avatars.size() != 1) {
    problems << " expected exactly one avatar, found " << avatars.size();
    if (!avatars.empty()) {
      problems << " at";
      for (const auto& [w, h] : avatars) problems << " (" << w << "," << h << ")";
    }
    problems << ";";
  }
  const std::string text = problems.str();
  if (!text.empty()) throw ValidationError(std::string(name()) + " level invalid:" + text);
}

StepResult Game::step(const GameState& state, Action action) const {
  if (state.terminal) throw EpisodeFinishedError();
  if (static_cast<int>(action) >= kNumActions) throw ValidationError("invalid action");
  StepResult result{state, 0};
  const TileId av = avatar();
  const auto it = std::find(state.grid.cells.begin(), state.grid.cells.end(), av);
  if (it == state.grid.cells.end()) throw ValidationError("state has no avatar");
  const auto idx = static_cast<int>(it - state.grid.cells.begin());
  result.reward = apply(result.state.grid, idx / state.grid.height, idx % state.grid.height, action);
  result.state.tick = state.tick + 1;
  result.state.terminal = is_terminal(result.state.grid);
  return result;
}

Observation render(const Grid& grid, const TilePalette& palette) {
  const int d = palette.tile_size();
  Observation obs(grid.width * d, grid.height * d, d);
  for (int w = 0; w < grid.width; ++w) {
    for (int h = 0; h < grid.height; ++h) {
      const auto& patch = palette.patch(grid.at(w, h));
      for (int a = 0; a < d; ++a) {
        float* dst = &obs.at(w * d + a, h * d, 0);
        std::copy_n(&patch[static_cast<size_t>(a) * d * 3], d * 3, dst);
      }
    }
  }
  return obs;
}

std::pair<GameState, Observation> reset(const Game& game, const Grid& level) {
  game.validate(level);
  GameState state{level, 0, game.is_terminal(level)};
  Observation obs = render(state, game.palette());
  return {std::move(state), std::move(obs)};
}

}  // namespace nge::gridworld
