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

#ifndef NGE_TRAINING_TRAINING_H_
#define NGE_TRAINING_TRAINING_H_

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nge/common/rng.h"
#include "nge/diffcore/adam.h"
#include "nge/gridworld/gridworld.h"
#include "nge/levelgen/levelgen.h"
#include "nge/model/engine.h"
#include "nge/model/model.h"

namespace nge::training {

using gridworld::Action;
using gridworld::Game;
using gridworld::GameState;
using gridworld::Grid;
using gridworld::Observation;

struct Transition {
  Observation before;
  Action action = Action::kUp;
  Observation after;
  int reward = 0;
};

// One random-agent episode kept symbolically; frames are rendered on demand.
struct Episode {
  uint64_t level_seed = 0;
  std::vector<GameState> states;  // states.size() == actions.size() + 1
  std::vector<Action> actions;
  std::vector<int> rewards;

  int length() const { return static_cast<int>(actions.size()); }
  Transition transition(int k, const gridworld::TilePalette& palette) const;
};

struct EpisodeBuffer {
  std::vector<Episode> episodes;
  long transition_count() const;
};

// Uniformly random actions on levels drawn from dist/range; an episode ends
// at a terminal state or after max_steps.
EpisodeBuffer collect(const Game& game, const levelgen::TileDistribution& dist, const levelgen::SizeRange& range,
                      int episodes, int max_steps, uint64_t seed);

// A square-grid symmetry: optional transpose, then optional mirror of the
// x axis, then optional mirror of the y axis.
struct SymmetryElement {
  bool transpose = false;
  bool flip_x = false;
  bool flip_y = false;

  bool preserves_axes() const { return !transpose; }
  // Applies this after other.
  SymmetryElement compose(const SymmetryElement& other) const;
  SymmetryElement inverse() const;
  Action map_action(Action a) const;
  // Destination of cell (w, h) in a width x height grid.
  std::pair<int, int> map_cell(int w, int h, int width, int height) const;
  Grid apply(const Grid& grid) const;
  GameState apply(const GameState& state) const;
  Observation apply(const Observation& obs) const;
  std::string name() const;

  bool operator==(const SymmetryElement&) const = default;
};

std::array<SymmetryElement, 8> all_symmetries();

// Eight elements for one batch: the whole group for square grids, otherwise
// the four axis-preserving elements twice each.
std::vector<SymmetryElement> batch_symmetries(int width, int height);

Transition augment(const Transition& t, const SymmetryElement& g);

// i.i.d. N(0, sigma^2) per pixel, then clamped to [0, 1].
Observation add_noise(const Observation& obs, double sigma, Rng& rng);

struct TrainConfig {
  std::string game = "sokoban";
  model::HyperParams model;
  int batch_transitions = 32;
  int symmetry_factor = 8;
  int sequence_length = 8;
  bool pdt = true;
  double pdt_ramp = 0.25;
  bool pdt_backprop = true;
  double noise_sigma = 0.02;
  double lr = 1e-3;
  double sat_limit = 0.99;
  double sat_weight = 0.001;
  int total_epochs = 5000;
  int eval_every = 200;
  int eval_repeats = 3;
  int eval_rollout_len = 100;
  uint64_t seed = 1;
  uint64_t eval_seed = 7919;  // action streams of the periodic rollouts
  int refresh_every = 500;
  int episodes_per_refresh = 200;
  int max_episode_steps = 40;
  levelgen::SizeRange size_range;
  int checkpoint_every = 1000;
  // Ends training at the first periodic evaluation whose min F_t and F_r
  // both reach early_stop_threshold.
  bool early_stop = false;
  double early_stop_threshold = 0.99;
  int threads = 0;  // 0: NGE_THREADS or the OpenMP default
  std::string out_dir;

  void validate() const;
  int windows_per_batch() const { return batch_transitions / sequence_length; }
};

TrainConfig load_config(const std::string& path);
TrainConfig parse_config(const std::string& json_text);
std::string config_to_json(const TrainConfig& config);

// Fraction of each sequence fed with the model's own predictions.
double pdt_fraction(const TrainConfig& config, int epoch);
// Number of leading ground-truth inputs per sequence at this epoch.
int ground_truth_inputs(const TrainConfig& config, int epoch);

struct BatchLoss {
  double loss = 0.0;
  double pixel = 0.0;
  double reward = 0.0;
  double saturation = 0.0;  // unweighted
  int frames = 0;
  int transitions = 0;
};

// Training sequences of one batch: sequences[i][t] is step t of sequence i.
using SequenceBatch = std::vector<std::vector<Transition>>;

// Builds one batch: windows of sequence_length consecutive transitions, each
// expanded by batch_symmetries.
SequenceBatch sample_batch(const EpisodeBuffer& buffer, const gridworld::TilePalette& palette,
                           const TrainConfig& config, Rng& rng);

// Per-frame loss pieces, exposed for tests.
double frame_pixel_loss(const Observation& pred, const Observation& target);
double frame_reward_loss(const float* logits, int reward);

// Runs the sequences through the model with prediction-dependent inputs,
// accumulates parameter gradients into params and returns the loss.
BatchLoss pdt_batch_loss(model::ModelParams<float>& params, const SequenceBatch& batch, int epoch,
                         const TrainConfig& config, Rng& noise_rng);

struct LogRow {
  int epoch = 0;
  double loss = 0.0, pixel_loss = 0.0, reward_loss = 0.0, sat_cost = 0.0;
  std::optional<double> f_t, e_mse, f_r, min_f_t;
  double wall_clock = 0.0;
};

std::string log_csv_header();
std::string log_csv_row(const LogRow& row);

struct TrainResult {
  model::ModelParams<float> params;
  std::vector<LogRow> log;
};

// Full training run. Writes train_log.csv, config.json, checkpoints and
// model.nge under config.out_dir when it is non-empty. on_row, when set,
// sees every log row as it is produced.
TrainResult train(const TrainConfig& config, const std::function<void(const LogRow&)>& on_row = {});

}  // namespace nge::training

#endif  // NGE_TRAINING_TRAINING_H_
