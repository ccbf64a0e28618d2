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
#include <array>
#include <limits>
#include <set>
#include <sstream>

#include "nge/common/errors.h"
#include "nge/common/rng.h"
#include "nge/gridworld/gridworld.h"

namespace nge::gridworld {

std::vector<float> generate_patch(uint64_t seed, int tile_size) {
  Rng rng(Rng::mix(seed, 0x7a11e));
  static constexpr std::array<float, 3> kLevels = {0.05f, 0.5f, 0.95f};
  auto draw_color = [&] {
    std::array<float, 3> c{};
    for (auto& v : c) v = kLevels[rng.uniform_index(kLevels.size())];
    return c;
  };
  const auto base = draw_color();
  auto accent = draw_color();
  while (accent == base) accent = draw_color();

  // Random mask over the fundamental domain {lo <= hi < half} of the square's
  // symmetry group; every pixel folds onto that domain.
  const int half = (tile_size + 1) / 2;
  std::vector<uint8_t> mask(static_cast<size_t>(half) * half, 0);
  for (int lo = 0; lo < half; ++lo) {
    for (int hi = lo; hi < half; ++hi) mask[lo * half + hi] = rng.uniform() < 0.4 ? 1 : 0;
  }

  std::vector<float> patch(static_cast<size_t>(tile_size) * tile_size * 3);
  for (int a = 0; a < tile_size; ++a) {
    for (int b = 0; b < tile_size; ++b) {
      const int fa = std::min(a, tile_size - 1 - a);
      const int fb = std::min(b, tile_size - 1 - b);
      const auto& color = mask[std::min(fa, fb) * half + std::max(fa, fb)] ? accent : base;
      for (int c = 0; c < 3; ++c) patch[(a * tile_size + b) * 3 + c] = color[c];
    }
  }
  return patch;
}

TilePalette::TilePalette(std::string game, int tile_size, std::vector<TileSpec> tiles)
    : game_(std::move(game)), tile_size_(tile_size), tiles_(std::move(tiles)) {
  if (tile_size_ < 1) throw ValidationError("palette: tile_size must be positive");
  if (tiles_.empty() || tiles_.size() > 255) throw ValidationError("palette: need 1..255 tiles");
  std::set<char> symbols;
  std::set<std::string> names;
  for (size_t i = 0; i < tiles_.size(); ++i) {
    if (tiles_[i].id != i) throw ValidationError("palette: tile ids must be 0..n-1 in order");
    if (!symbols.insert(tiles_[i].symbol).second) {
      throw ValidationError(std::string("palette: duplicate symbol '") + tiles_[i].symbol + "'");
    }
    if (!names.insert(tiles_[i].name).second) throw ValidationError("palette: duplicate name " + tiles_[i].name);
    patches_.push_back(generate_patch(tiles_[i].seed, tile_size_));
  }
  const double required = 0.5 * tile_size_ * tile_size_;
  if (tiles_.size() > 1 && min_pairwise_distance() < required) {
    throw ValidationError("palette: patches closer than 0.5*D^2 (squared L2); pick other seeds");
  }
}

TilePalette TilePalette::from_manifest(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::string game;
  int tile_size = 0;
  std::vector<TileSpec> tiles;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    std::string key;
    fields >> key;
    if (key == "game") {
      fields >> game;
    } else if (key == "tile_size") {
      fields >> tile_size;
    } else if (key == "tile") {
      int id = -1;
      std::string symbol;
      TileSpec spec;
      fields >> id >> symbol >> spec.name >> spec.seed;
      if (fields.fail() || symbol.size() != 1 || id < 0) {
        throw ValidationError("palette manifest line " + std::to_string(line_no) +
                              ": expected 'tile ID SYMBOL NAME SEED'");
      }
      spec.id = static_cast<TileId>(id);
      spec.symbol = symbol[0];
      tiles.push_back(spec);
      continue;
    } else {
      throw ValidationError("palette manifest line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    if (fields.fail()) throw ValidationError("palette manifest line " + std::to_string(line_no) + ": bad value");
  }
  if (game.empty()) throw ValidationError("palette manifest: missing 'game'");
  return TilePalette(game, tile_size, std::move(tiles));
}

std::string TilePalette::to_manifest() const {
  std::ostringstream out;
  out << "# palette manifest: tile ID SYMBOL NAME SEED\n";
  out << "game " << game_ << "\n";
  out << "tile_size " << tile_size_ << "\n";
  for (const auto& t : tiles_) {
    out << "tile " << static_cast<int>(t.id) << ' ' << t.symbol << ' ' << t.name << ' ' << t.seed << "\n";
  }
  return out.str();
}

TileId TilePalette::id_for_symbol(char symbol) const {
  for (const auto& t : tiles_) {
    if (t.symbol == symbol) return t.id;
  }
  throw ValidationError(std::string("unknown tile symbol '") + symbol + "' for game " + game_);
}

TileId TilePalette::id_for_name(std::string_view name) const {
  for (const auto& t : tiles_) {
    if (t.name == name) return t.id;
  }
  throw ValidationError("game " + game_ + " has no tile named " + std::string(name));
}

double TilePalette::min_pairwise_distance() const {
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < patches_.size(); ++i) {
    for (size_t j = i + 1; j < patches_.size(); ++j) {
      double d = 0.0;
      for (size_t k = 0; k < patches_[i].size(); ++k) {
        const double diff = patches_[i][k] - patches_[j][k];
        d += diff * diff;
      }
      best = std::min(best, d);
    }
  }
  return best;
}

}  // namespace nge::gridworld
