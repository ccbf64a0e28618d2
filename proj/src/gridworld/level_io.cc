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

#include <fstream>
#include <sstream>

#include "nge/common/errors.h"
#include "nge/gridworld/gridworld.h"

namespace nge::gridworld {

Grid parse_level(std::string_view text, const TilePalette& palette) {
  std::vector<std::string> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    rows.push_back(line);
  }
  while (!rows.empty() && rows.back().empty()) rows.pop_back();
  if (rows.empty()) throw ValidationError("level: empty");
  const size_t width = rows.front().size();
  for (size_t h = 0; h < rows.size(); ++h) {
    if (rows[h].size() != width) {
      throw ValidationError("level: ragged row " + std::to_string(h) + " has " + std::to_string(rows[h].size()) +
                            " cells, expected " + std::to_string(width));
    }
  }
  Grid grid(static_cast<int>(width), static_cast<int>(rows.size()));
  std::ostringstream bad;
  for (int h = 0; h < grid.height; ++h) {
    for (int w = 0; w < grid.width; ++w) {
      try {
        grid.at(w, h) = palette.id_for_symbol(rows[h][w]);
      } catch (const ValidationError&) {
        bad << " (" << w << "," << h << ")='" << rows[h][w] << "'";
      }
    }
  }
  if (!bad.str().empty()) throw ValidationError("level: unknown symbols at" + bad.str());
  return grid;
}

std::string format_level(const Grid& grid, const TilePalette& palette) {
  std::string out;
  out.reserve(static_cast<size_t>(grid.width + 1) * grid.height);
  for (int h = 0; h < grid.height; ++h) {
    for (int w = 0; w < grid.width; ++w) out.push_back(palette.spec(grid.at(w, h)).symbol);
    out.push_back('\n');
  }
  return out;
}

Grid load_level(const std::string& path, const TilePalette& palette) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open level file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_level(buffer.str(), palette);
}

void save_level(const std::string& path, const Grid& grid, const TilePalette& palette) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write level file " + path);
  out << format_level(grid, palette);
}

}  // namespace nge::gridworld
