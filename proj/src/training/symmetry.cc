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

#include <array>

#include "nge/common/errors.h"
#include "nge/training/training.h"

namespace nge::training {
namespace {

using Mat = std::array<int, 4>;  // row-major 2x2

Mat linear_part(const SymmetryElement& g) {
  Mat m = g.transpose ? Mat{0, 1, 1, 0} : Mat{1, 0, 0, 1};
  if (g.flip_x) m[0] = -m[0], m[1] = -m[1];
  if (g.flip_y) m[2] = -m[2], m[3] = -m[3];
  return m;
}

SymmetryElement from_linear(const Mat& m) {
  SymmetryElement g;
  g.transpose = m[0] == 0;
  // Undo the transpose (its own inverse) to read the flips off the diagonal.
  const Mat f = g.transpose ? Mat{m[1], m[0], m[3], m[2]} : m;
  g.flip_x = f[0] < 0;
  g.flip_y = f[3] < 0;
  return g;
}

}  // namespace

SymmetryElement SymmetryElement::compose(const SymmetryElement& other) const {
  const Mat a = linear_part(*this), b = linear_part(other);
  return from_linear(Mat{a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
                         a[2] * b[1] + a[3] * b[3]});
}

SymmetryElement SymmetryElement::inverse() const {
  for (const SymmetryElement& g : all_symmetries()) {
    if (g.compose(*this) == SymmetryElement{}) return g;
  }
  throw std::logic_error("symmetry without inverse");
}

Action SymmetryElement::map_action(Action a) const {
  auto [dw, dh] = gridworld::action_delta(a);
  if (transpose) std::swap(dw, dh);
  if (flip_x) dw = -dw;
  if (flip_y) dh = -dh;
  for (Action b : gridworld::kAllActions) {
    if (gridworld::action_delta(b) == std::make_pair(dw, dh)) return b;
  }
  throw std::logic_error("unmapped action");
}

std::pair<int, int> SymmetryElement::map_cell(int w, int h, int width, int height) const {
  if (transpose) {
    std::swap(w, h);
    std::swap(width, height);
  }
  if (flip_x) w = width - 1 - w;
  if (flip_y) h = height - 1 - h;
  return {w, h};
}

Grid SymmetryElement::apply(const Grid& grid) const {
  Grid out = transpose ? Grid(grid.height, grid.width) : Grid(grid.width, grid.height);
  for (int w = 0; w < grid.width; ++w) {
    for (int h = 0; h < grid.height; ++h) {
      const auto [w2, h2] = map_cell(w, h, grid.width, grid.height);
      out.at(w2, h2) = grid.at(w, h);
    }
  }
  return out;
}

GameState SymmetryElement::apply(const GameState& state) const {
  GameState out = state;
  out.grid = apply(state.grid);
  return out;
}

Observation SymmetryElement::apply(const Observation& obs) const {
  Observation out = transpose ? Observation(obs.height_px, obs.width_px, obs.tile_size)
                              : Observation(obs.width_px, obs.height_px, obs.tile_size);
  for (int x = 0; x < obs.width_px; ++x) {
    for (int y = 0; y < obs.height_px; ++y) {
      const auto [x2, y2] = map_cell(x, y, obs.width_px, obs.height_px);
      for (int c = 0; c < 3; ++c) out.at(x2, y2, c) = obs.at(x, y, c);
    }
  }
  return out;
}

std::string SymmetryElement::name() const {
  std::string s;
  if (transpose) s += "T";
  if (flip_x) s += "X";
  if (flip_y) s += "Y";
  return s.empty() ? "I" : s;
}

std::array<SymmetryElement, 8> all_symmetries() {
  std::array<SymmetryElement, 8> out;
  int k = 0;
  for (bool t : {false, true}) {
    for (bool fx : {false, true}) {
      for (bool fy : {false, true}) out[k++] = SymmetryElement{t, fx, fy};
    }
  }
  return out;
}

std::vector<SymmetryElement> batch_symmetries(int width, int height) {
  const auto all = all_symmetries();
  if (width == height) return {all.begin(), all.end()};
  std::vector<SymmetryElement> out;
  for (int rep = 0; rep < 2; ++rep) {
    for (const auto& g : all) {
      if (g.preserves_axes()) out.push_back(g);
    }
  }
  return out;
}

Transition augment(const Transition& t, const SymmetryElement& g) {
  return Transition{g.apply(t.before), g.map_action(t.action), g.apply(t.after), t.reward};
}

}  // namespace nge::training
