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

#ifndef NGE_GRIDWORLD_GRIDWORLD_H_
#define NGE_GRIDWORLD_GRIDWORLD_H_

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nge::gridworld {

using TileId = uint8_t;

// A width x height array of tile indices. Cell (w, h) lives at w * height + h;
// h grows downwards, so "up" is h - 1.
struct Grid {
  int width = 0;
  int height = 0;
  std::vector<TileId> cells;

  Grid() = default;
  Grid(int w, int h, TileId fill = 0) : width(w), height(h), cells(static_cast<size_t>(w) * h, fill) {}

  TileId at(int w, int h) const { return cells[static_cast<size_t>(w) * height + h]; }
  TileId& at(int w, int h) { return cells[static_cast<size_t>(w) * height + h]; }
  bool in_bounds(int w, int h) const { return w >= 0 && h >= 0 && w < width && h < height; }
  int count(TileId t) const;

  bool operator==(const Grid&) const = default;
};

enum class Action : uint8_t { kUp = 0, kDown = 1, kLeft = 2, kRight = 3 };
inline constexpr int kNumActions = 4;
inline constexpr std::array<Action, kNumActions> kAllActions = {Action::kUp, Action::kDown, Action::kLeft,
                                                                Action::kRight};

// Cell offset (dw, dh) for a movement action.
std::pair<int, int> action_delta(Action a);
std::string_view action_name(Action a);
Action action_from_index(int index);

struct GameState {
  Grid grid;
  int tick = 0;
  bool terminal = false;

  bool operator==(const GameState&) const = default;
};

// RGB image with shape (width_px, height_px, 3), values in [0, 1].
// Pixel (x, y, c) lives at (x * height_px + y) * 3 + c.
struct Observation {
  int width_px = 0;
  int height_px = 0;
  int tile_size = 0;
  std::vector<float> pixels;

  Observation() = default;
  Observation(int w_px, int h_px, int tile) : width_px(w_px), height_px(h_px), tile_size(tile),
                                              pixels(static_cast<size_t>(w_px) * h_px * 3, 0.0f) {}

  int grid_width() const { return width_px / tile_size; }
  int grid_height() const { return height_px / tile_size; }
  float at(int x, int y, int c) const { return pixels[(static_cast<size_t>(x) * height_px + y) * 3 + c]; }
  float& at(int x, int y, int c) { return pixels[(static_cast<size_t>(x) * height_px + y) * 3 + c]; }

  bool operator==(const Observation&) const = default;
};

struct TileSpec {
  TileId id = 0;
  char symbol = '.';
  std::string name;
  uint64_t seed = 0;
};

// Per-game mapping TileId -> D x D x 3 patch. Patch pixel (a, b, c) lives at
// (a * D + b) * 3 + c. Patches are generated from per-tile seeds and are
// invariant under the eight square symmetries.
class TilePalette {
 public:
  TilePalette(std::string game, int tile_size, std::vector<TileSpec> tiles);

  static TilePalette from_manifest(std::string_view text);
  std::string to_manifest() const;

  const std::string& game() const { return game_; }
  int tile_size() const { return tile_size_; }
  int size() const { return static_cast<int>(tiles_.size()); }
  const TileSpec& spec(TileId id) const { return tiles_.at(id); }
  const std::vector<float>& patch(TileId id) const { return patches_.at(id); }
  TileId id_for_symbol(char symbol) const;
  TileId id_for_name(std::string_view name) const;

  // Smallest squared L2 distance between two distinct patches.
  double min_pairwise_distance() const;

 private:
  std::string game_;
  int tile_size_;
  std::vector<TileSpec> tiles_;
  std::vector<std::vector<float>> patches_;
};

std::vector<float> generate_patch(uint64_t seed, int tile_size);

struct StepResult {
  GameState state;
  int reward = 0;
};

// Deterministic local rules of one game.
class Game {
 public:
  explicit Game(TilePalette palette) : palette_(std::move(palette)) {}
  virtual ~Game() = default;

  virtual std::string_view name() const = 0;
  const TilePalette& palette() const { return palette_; }

  TileId floor() const { return palette_.id_for_name("floor"); }
  TileId wall() const { return palette_.id_for_name("wall"); }
  TileId avatar() const { return palette_.id_for_name("avatar"); }

  // Throws ValidationError listing every offending cell.
  void validate(const Grid& grid) const;

  // Pure successor function. Throws EpisodeFinishedError on terminal input.
  StepResult step(const GameState& state, Action action) const;

  virtual bool is_terminal(const Grid& grid) const = 0;

  // Hand-built reference levels shipped with the game.
  virtual std::vector<Grid> builtin_levels() const = 0;

 protected:
  // Applies the rule to grid in place; returns the reward.
  virtual int apply(Grid& grid, int avatar_w, int avatar_h, Action action) const = 0;

 private:
  TilePalette palette_;
};

std::vector<std::string> game_names();
std::unique_ptr<Game> make_game(std::string_view name, int tile_size = 8);
std::string builtin_manifest(std::string_view name);

Observation render(const Grid& grid, const TilePalette& palette);
inline Observation render(const GameState& state, const TilePalette& palette) {
  return render(state.grid, palette);
}

std::pair<GameState, Observation> reset(const Game& game, const Grid& level);

// Level text: one row per line, one palette symbol per cell.
Grid parse_level(std::string_view text, const TilePalette& palette);
std::string format_level(const Grid& grid, const TilePalette& palette);
Grid load_level(const std::string& path, const TilePalette& palette);
void save_level(const std::string& path, const Grid& grid, const TilePalette& palette);

}  // namespace nge::gridworld

#endif  // NGE_GRIDWORLD_GRIDWORLD_H_
