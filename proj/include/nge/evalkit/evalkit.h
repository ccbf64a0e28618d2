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

#ifndef NGE_EVALKIT_EVALKIT_H_
#define NGE_EVALKIT_EVALKIT_H_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "nge/gridworld/gridworld.h"
#include "nge/model/engine.h"
#include "nge/model/inference.h"
#include "nge/model/reward_codec.h"

namespace nge::evalkit {

using gridworld::Action;
using gridworld::Game;
using gridworld::Grid;
using gridworld::Observation;
using gridworld::TilePalette;
using TileMap = Grid;

// Nearest palette patch per cell (squared L2); ties go to the lowest id.
TileMap tile_map(const Observation& obs, const TilePalette& palette);

// Unweighted mean of per-class F1 over the classes present in truth, plus
// every class predicted but absent from truth, which scores 0 (precision 0).
// Classes absent from both maps are skipped.
double closest_tile_f1(const TileMap& truth, const TileMap& pred);

// Mean squared pixel error with pred clamped to [0, 1].
double pixel_mse(const Observation& truth, const Observation& pred);

struct RewardScores {
  long true_positives = 0;
  long false_positives = 0;
  long false_negatives = 0;
  double precision = 1.0;
  double recall = 1.0;
  double f1 = 1.0;
};

// Micro-averaged over the 8 reward bits with bit = 1 as the positive class.
// With no positives in truth or prediction every score is 1.
RewardScores reward_f1(const std::vector<int>& truth, const std::vector<int>& predicted);
RewardScores reward_f1(const std::vector<int>& truth, const std::vector<model::RewardPrediction>& predicted);

// Something that maps (observation, action) to a predicted next frame and
// reward, for a batch of independent frames.
class ForwardModel {
 public:
  virtual ~ForwardModel() = default;
  virtual std::vector<model::StepPrediction> step(const std::vector<const Observation*>& obs,
                                                  const std::vector<Action>& actions) = 0;
};

class LearnedModel final : public ForwardModel {
 public:
  explicit LearnedModel(const model::ModelParams<float>& params) : packed_(model::PackedParams<float>::pack(params)) {}
  std::vector<model::StepPrediction> step(const std::vector<const Observation*>& obs,
                                          const std::vector<Action>& actions) override {
    return model::predict_batch(packed_, obs, actions);
  }

 private:
  model::PackedParams<float> packed_;
};

// The game itself behind the model interface: reads the grid back with
// tile_map, steps it and renders the result.
class OracleModel final : public ForwardModel {
 public:
  explicit OracleModel(const Game& game) : game_(game) {}
  std::vector<model::StepPrediction> step(const std::vector<const Observation*>& obs,
                                          const std::vector<Action>& actions) override;

 private:
  const Game& game_;
};

model::RewardPrediction exact_reward_prediction(int reward);

struct RolloutReport {
  int steps = 0;
  int repeats = 0;
  int levels = 0;
  int width = 0;   // 0 when levels differ in size
  int height = 0;
  std::vector<double> e_mse;       // per step, mean over rollouts alive at that step
  std::vector<double> f_t;         // per step, mean over rollouts alive at that step
  double max_e_mse = 0.0;          // over every (rollout, step)
  double min_f_t = 1.0;            // over every (rollout, step)
  double mean_e_mse = 0.0;         // over every (rollout, step)
  double mean_f_t = 1.0;           // over every (rollout, step)
  long frames = 0;
  RewardScores reward;
};

// Steps the model (closed loop) and the oracle from the same start with the
// same uniformly random actions. A rollout ends early if the oracle reaches
// a terminal state. Action streams depend only on action_seed, the level
// index and the repeat index.
RolloutReport evaluate_rollouts(ForwardModel& model, const Game& game, const std::vector<Grid>& levels, int steps,
                                int repeats, uint64_t action_seed);

// Rollouts on `repeats` generated levels per size, one rollout each.
std::vector<RolloutReport> generalization_suite(ForwardModel& model, const Game& game,
                                                const std::vector<std::pair<int, int>>& sizes, int steps,
                                                int repeats, uint64_t seed);

// CSV helpers.
std::string report_csv_header();
std::string report_csv_row(const std::string& label, const RolloutReport& report);
std::string per_step_csv(const RolloutReport& report);
std::string report_summary(const std::string& label, const RolloutReport& report);

}  // namespace nge::evalkit

#endif  // NGE_EVALKIT_EVALKIT_H_
