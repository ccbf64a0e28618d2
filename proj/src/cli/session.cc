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

#include "nge/cli/session.h"

#include <cstdio>

#include "nge/common/errors.h"
#include "nge/model/inference.h"

namespace nge::cli {

Session Session::oracle(const Game& game, uint64_t seed) { return Session(game, seed); }

Session Session::learned(const model::ModelParams<float>& params, const Game& game, uint64_t seed) {
  if (params.hyper.tile_size != game.palette().tile_size()) {
    throw ValidationError("model tile size " + std::to_string(params.hyper.tile_size) + " does not match the " +
                          std::string(game.name()) + " palette (" + std::to_string(game.palette().tile_size()) +
                          ")");
  }
  Session s(game, seed);
  s.packed_ = std::make_shared<const model::PackedParams<float>>(model::PackedParams<float>::pack(params));
  return s;
}

const Observation& Session::observation() const {
  if (!started_) throw std::logic_error("session used before reset");
  return current_;
}

Grid Session::grid() const {
  if (!started_) throw std::logic_error("session used before reset");
  return is_learned() ? evalkit::tile_map(current_, game_->palette()) : state_.grid;
}

const Observation& Session::reset(const Grid& level) {
  auto [state, obs] = gridworld::reset(*game_, level);
  state_ = is_learned() ? gridworld::GameState{} : std::move(state);
  current_ = std::move(obs);
  terminal_ = !is_learned() && state_.terminal;
  tick_ = 0;
  started_ = true;
  return current_;
}

StepOutcome Session::step(Action action) {
  if (!started_) throw std::logic_error("session used before reset");
  StepOutcome out;
  if (is_learned()) {
    auto pred = model::predict_batch(*packed_, {&current_}, {action});
    current_ = std::move(pred[0].observation);
    out.reward = pred[0].reward.decoded_value;
  } else {
    const gridworld::StepResult r = game_->step(state_, action);
    state_ = r.state;
    current_ = gridworld::render(state_, game_->palette());
    out.reward = r.reward;
    terminal_ = state_.terminal;
  }
  ++tick_;
  out.observation = current_;
  out.terminal = terminal_;
  return out;
}

std::string glyph_frame(const Grid& grid, const gridworld::TilePalette& palette, bool color) {
  std::string out;
  for (int h = 0; h < grid.height; ++h) {
    for (int w = 0; w < grid.width; ++w) {
      const gridworld::TileId id = grid.at(w, h);
      if (color) {
        const std::vector<float>& p = palette.patch(id);
        double rgb[3] = {0, 0, 0};
        for (size_t i = 0; i < p.size(); ++i) rgb[i % 3] += p[i];
        char buf[32];
        const double n = static_cast<double>(p.size() / 3);
        std::snprintf(buf, sizeof(buf), "\x1b[38;2;%d;%d;%dm", static_cast<int>(255 * rgb[0] / n),
                      static_cast<int>(255 * rgb[1] / n), static_cast<int>(255 * rgb[2] / n));
        out += buf;
      }
      out += palette.spec(id).symbol;
    }
    if (color) out += "\x1b[0m";
    out += '\n';
  }
  return out;
}

}  // namespace nge::cli
