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

#include "nge/common/errors.h"
#include "nge/gridworld/gridworld.h"

namespace nge::gridworld {
namespace {

// Sokoban clone: pushing a box onto a hole removes both for reward 1; the
// episode ends when no boxes remain.
constexpr const char* kSokobanManifest = R"(game sokoban
tile 0 . floor 1
tile 1 w wall 2
tile 2 A avatar 4
tile 3 * box 7
tile 4 o hole 10
)";

constexpr const char* kSokobanLevels[] = {
    R"(wwwwwwwww
w.......w
w.*.o...w
w...A.*.w
w.o.....w
w.......w
wwwwwwwww
)",
    R"(wwwwwwwwww
w....w...w
w.*..w.o.w
w..A.....w
w.ww..*..w
w....o...w
w........w
wwwwwwwwww
)",
    R"(wwwwwwww
w..o...w
w.*..*.w
w..ww..w
w.A..o.w
w......w
w..*.o.w
wwwwwwww
)",
    R"(wwwwwwwwwww
w...w.....w
w.*...*.o.w
w.o.A.ww..w
w....*..o.w
w.........w
wwwwwwwwwww
)",
    R"(wwwwwwwwwwww
w..........w
w.*.w..o...w
w...w......w
w.o...A..*.w
w...ww.....w
w.*.....o..w
w..........w
wwwwwwwwwwww
)",
};

// Labyrinth clone: stepping onto the exit yields reward 1 and ends the
// episode.
constexpr const char* kLabyrinthManifest = R"(game labyrinth
tile 0 . floor 1
tile 1 w wall 2
tile 2 A avatar 4
tile 3 x exit 7
)";

constexpr const char* kLabyrinthLevels[] = {
    R"(wwwwwwwww
wA..w...w
w.w.w.w.w
w.w...w.w
w.wwwww.w
w......xw
wwwwwwwww
)",
    R"(wwwwwwwwww
w...w....w
w.w.w.ww.w
w.w...w..w
w.www.w.ww
wAw...w.xw
wwwwwwwwww
)",
    R"(wwwwwwwww
w.......w
w.wwwww.w
w.w..xw.w
w.w.w.w.w
w...wA..w
wwwwwwwww
)",
    R"(wwwwwwwwwww
wA....w...w
wwww.ww.w.w
w....w..w.w
w.wwww.ww.w
w......w.xw
wwwwwwwwwww
)",
    R"(wwwwwwww
wx.w...w
ww.w.w.w
w..w.w.w
w.ww.w.w
w....wAw
wwwwwwww
)",
};

// Painter clone: the avatar paints every cell it leaves; entering an
// unpainted floor cell yields reward 1.
constexpr const char* kPainterManifest = R"(game painter
tile 0 . floor 1
tile 1 w wall 2
tile 2 A avatar 4
tile 3 p painted 7
)";

constexpr const char* kPainterLevels[] = {
    R"(wwwwwwww
w......w
w.ww...w
w...A..w
w....w.w
wwwwwwww
)",
    R"(wwwwwwwww
w.......w
w..w.w..w
w...A...w
w..w.w..w
w.......w
wwwwwwwww
)",
    R"(wwwwwwwwww
wA.......w
w.wwww...w
w........w
w...wwww.w
w........w
wwwwwwwwww
)",
    R"(wwwwwww
w.....w
w.w.w.w
w..A..w
w.w.w.w
w.....w
wwwwwww
)",
    R"(wwwwwwwwwww
w.........w
w.w.....w.w
w....A....w
w.w.....w.w
w.........w
wwwwwwwwwww
)",
};

std::string with_tile_size(const char* manifest, int tile_size) {
  return "tile_size " + std::to_string(tile_size) + "\n" + manifest;
}

template <size_t N>
std::vector<Grid> parse_all(const char* const (&levels)[N], const TilePalette& palette) {
  std::vector<Grid> out;
  for (const char* text : levels) out.push_back(parse_level(text, palette));
  return out;
}

class Sokoban final : public Game {
 public:
  explicit Sokoban(int tile_size) : Game(TilePalette::from_manifest(with_tile_size(kSokobanManifest, tile_size))) {}
  std::string_view name() const override { return "sokoban"; }

  bool is_terminal(const Grid& grid) const override { return grid.count(box()) == 0; }
  std::vector<Grid> builtin_levels() const override { return parse_all(kSokobanLevels, palette()); }

 protected:
  int apply(Grid& grid, int aw, int ah, Action action) const override {
    const auto [dw, dh] = action_delta(action);
    const int tw = aw + dw, th = ah + dh;
    if (!grid.in_bounds(tw, th)) return 0;
    const TileId target = grid.at(tw, th);
    if (target == floor()) {
      grid.at(tw, th) = avatar();
      grid.at(aw, ah) = floor();
      return 0;
    }
    if (target != box()) return 0;
    const int bw = tw + dw, bh = th + dh;
    if (!grid.in_bounds(bw, bh)) return 0;
    const TileId beyond = grid.at(bw, bh);
    int reward = 0;
    if (beyond == floor()) {
      grid.at(bw, bh) = box();
    } else if (beyond == hole()) {
      grid.at(bw, bh) = floor();
      reward = 1;
    } else {
      return 0;
    }
    grid.at(tw, th) = avatar();
    grid.at(aw, ah) = floor();
    return reward;
  }

 private:
  TileId box() const { return palette().id_for_name("box"); }
  TileId hole() const { return palette().id_for_name("hole"); }
};

class Labyrinth final : public Game {
 public:
  explicit Labyrinth(int tile_size)
      : Game(TilePalette::from_manifest(with_tile_size(kLabyrinthManifest, tile_size))) {}
  std::string_view name() const override { return "labyrinth"; }

  // Terminal once the exit has been reached, i.e. no exit tile is visible.
  bool is_terminal(const Grid& grid) const override { return grid.count(exit_tile()) == 0; }
  std::vector<Grid> builtin_levels() const override { return parse_all(kLabyrinthLevels, palette()); }

 protected:
  int apply(Grid& grid, int aw, int ah, Action action) const override {
    const auto [dw, dh] = action_delta(action);
    const int tw = aw + dw, th = ah + dh;
    if (!grid.in_bounds(tw, th)) return 0;
    const TileId target = grid.at(tw, th);
    if (target != floor() && target != exit_tile()) return 0;
    grid.at(tw, th) = avatar();
    grid.at(aw, ah) = floor();
    return target == exit_tile() ? 1 : 0;
  }

 private:
  TileId exit_tile() const { return palette().id_for_name("exit"); }
};

class Painter final : public Game {
 public:
  explicit Painter(int tile_size) : Game(TilePalette::from_manifest(with_tile_size(kPainterManifest, tile_size))) {}
  std::string_view name() const override { return "painter"; }

  bool is_terminal(const Grid&) const override { return false; }
  std::vector<Grid> builtin_levels() const override { return parse_all(kPainterLevels, palette()); }

 protected:
  int apply(Grid& grid, int aw, int ah, Action action) const override {
    const auto [dw, dh] = action_delta(action);
    const int tw = aw + dw, th = ah + dh;
    if (!grid.in_bounds(tw, th)) return 0;
    const TileId target = grid.at(tw, th);
    if (target != floor() && target != painted()) return 0;
    grid.at(tw, th) = avatar();
    grid.at(aw, ah) = painted();
    return target == floor() ? 1 : 0;
  }

 private:
  TileId painted() const { return palette().id_for_name("painted"); }
};

}  // namespace

std::vector<std::string> game_names() { return {"sokoban", "labyrinth", "painter"}; }

std::unique_ptr<Game> make_game(std::string_view name, int tile_size) {
  if (name == "sokoban") return std::make_unique<Sokoban>(tile_size);
  if (name == "labyrinth") return std::make_unique<Labyrinth>(tile_size);
  if (name == "painter") return std::make_unique<Painter>(tile_size);
  throw ValidationError("unknown game '" + std::string(name) + "'");
}

std::string builtin_manifest(std::string_view name) { return make_game(name)->palette().to_manifest(); }

}  // namespace nge::gridworld
