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
#include "nge/training/training.h"

namespace nge::training {

Transition Episode::transition(int k, const gridworld::TilePalette& palette) const {
  return Transition{gridworld::render(states.at(k), palette), actions.at(k),
                    gridworld::render(states.at(k + 1), palette), rewards.at(k)};
}

long EpisodeBuffer::transition_count() const {
  long n = 0;
  for (const auto& e : episodes) n += e.length();
  return n;
}

EpisodeBuffer collect(const Game& game, const levelgen::TileDistribution& dist, const levelgen::SizeRange& range,
                      int episodes, int max_steps, uint64_t seed) {
  if (episodes < 0 || max_steps < 1) throw ValidationError("collect: bad episode count or length");
  EpisodeBuffer buffer;
  buffer.episodes.resize(episodes);
  for (int e = 0; e < episodes; ++e) {
    Episode& ep = buffer.episodes[e];
    ep.level_seed = Rng::mix(seed, 2 * static_cast<uint64_t>(e));
    Rng policy(Rng::mix(seed, 2 * static_cast<uint64_t>(e) + 1));
    GameState state = gridworld::reset(game, levelgen::generate(dist, range, ep.level_seed)).first;
    ep.states.push_back(state);
    for (int t = 0; t < max_steps && !state.terminal; ++t) {
      const Action a = gridworld::action_from_index(static_cast<int>(policy.uniform_index(gridworld::kNumActions)));
      gridworld::StepResult r = game.step(state, a);
      state = std::move(r.state);
      ep.actions.push_back(a);
      ep.rewards.push_back(r.reward);
      ep.states.push_back(state);
    }
  }
  return buffer;
}

Observation add_noise(const Observation& obs, double sigma, Rng& rng) {
  if (sigma < 0) throw ValidationError("noise sigma must be non-negative");
  Observation out = obs;
  if (sigma == 0) return out;
  for (float& v : out.pixels) v = static_cast<float>(std::clamp(v + sigma * rng.normal(), 0.0, 1.0));
  return out;
}

SequenceBatch sample_batch(const EpisodeBuffer& buffer, const gridworld::TilePalette& palette,
                           const TrainConfig& config, Rng& rng) {
  const int len = config.sequence_length;
  std::vector<std::pair<int, int>> windows;
  for (size_t e = 0; e < buffer.episodes.size(); ++e) {
    for (int s = 0; s + len <= buffer.episodes[e].length(); ++s) windows.emplace_back(static_cast<int>(e), s);
  }
  if (windows.empty()) throw ValidationError("experience buffer has no sequence of length " + std::to_string(len));
  SequenceBatch batch;
  for (int w = 0; w < config.windows_per_batch(); ++w) {
    const auto [e, start] = windows[rng.uniform_index(windows.size())];
    const Episode& ep = buffer.episodes[e];
    std::vector<Transition> base;
    for (int t = 0; t < len; ++t) base.push_back(ep.transition(start + t, palette));
    for (const SymmetryElement& g : batch_symmetries(ep.states[0].grid.width, ep.states[0].grid.height)) {
      std::vector<Transition> seq;
      for (const Transition& t : base) seq.push_back(augment(t, g));
      batch.push_back(std::move(seq));
    }
  }
  return batch;
}

}  // namespace nge::training
