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

#include "nge/evalkit/evalkit.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>

#include "nge/common/errors.h"
#include "nge/common/rng.h"
#include "nge/levelgen/levelgen.h"

namespace nge::evalkit {

TileMap tile_map(const Observation& obs, const TilePalette& palette) {
  const int d = palette.tile_size();
  if (obs.width_px % d != 0 || obs.height_px % d != 0) {
    throw ShapeError("observation extents are not multiples of the palette tile size");
  }
  TileMap out(obs.width_px / d, obs.height_px / d);
  for (int w = 0; w < out.width; ++w) {
    for (int h = 0; h < out.height; ++h) {
      double best = std::numeric_limits<double>::infinity();
      int best_id = 0;
      for (int id = 0; id < palette.size(); ++id) {
        const std::vector<float>& patch = palette.patch(static_cast<gridworld::TileId>(id));
        double dist = 0.0;
        for (int a = 0; a < d; ++a) {
          for (int b = 0; b < d; ++b) {
            for (int c = 0; c < 3; ++c) {
              const double diff = obs.at(w * d + a, h * d + b, c) - patch[(a * d + b) * 3 + c];
              dist += diff * diff;
            }
          }
        }
        if (dist < best) {
          best = dist;
          best_id = id;
        }
      }
      out.at(w, h) = static_cast<gridworld::TileId>(best_id);
    }
  }
  return out;
}

double closest_tile_f1(const TileMap& truth, const TileMap& pred) {
  if (truth.width != pred.width || truth.height != pred.height) {
    throw ShapeError("tile maps differ in shape");
  }
  std::map<int, long> tp, fp, fn;
  for (size_t i = 0; i < truth.cells.size(); ++i) {
    const int t = truth.cells[i], p = pred.cells[i];
    if (t == p) {
      ++tp[t];
    } else {
      ++fn[t];
      ++fp[p];
    }
  }
  std::map<int, bool> classes;
  for (int t : truth.cells) classes[t] = true;
  for (int p : pred.cells) classes.try_emplace(p, false);
  double total = 0.0;
  for (const auto& [cls, in_truth] : classes) {
    if (!in_truth) continue;  // scores 0
    const double t = static_cast<double>(tp[cls]);
    const double denom = 2.0 * t + static_cast<double>(fp[cls]) + static_cast<double>(fn[cls]);
    total += denom > 0 ? 2.0 * t / denom : 0.0;
  }
  return classes.empty() ? 1.0 : total / static_cast<double>(classes.size());
}

double pixel_mse(const Observation& truth, const Observation& pred) {
  if (truth.width_px != pred.width_px || truth.height_px != pred.height_px) {
    throw ShapeError("observations differ in shape");
  }
  double acc = 0.0;
  for (size_t i = 0; i < truth.pixels.size(); ++i) {
    const double p = std::clamp(static_cast<double>(pred.pixels[i]), 0.0, 1.0);
    const double diff = p - truth.pixels[i];
    acc += diff * diff;
  }
  return truth.pixels.empty() ? 0.0 : acc / static_cast<double>(truth.pixels.size());
}

RewardScores reward_f1(const std::vector<int>& truth, const std::vector<int>& predicted) {
  if (truth.size() != predicted.size()) throw ShapeError("reward lists differ in length");
  RewardScores s;
  for (size_t i = 0; i < truth.size(); ++i) {
    const auto t = model::encode_reward(truth[i]);
    const auto p = model::encode_reward(predicted[i]);
    for (int k = 0; k < model::kRewardBits; ++k) {
      s.true_positives += t[k] && p[k];
      s.false_positives += !t[k] && p[k];
      s.false_negatives += t[k] && !p[k];
    }
  }
  const double tp = static_cast<double>(s.true_positives);
  if (s.true_positives + s.false_positives > 0) s.precision = tp / (tp + s.false_positives);
  if (s.true_positives + s.false_negatives > 0) s.recall = tp / (tp + s.false_negatives);
  if (s.true_positives + s.false_positives + s.false_negatives > 0) {
    s.f1 = 2.0 * tp / (2.0 * tp + s.false_positives + s.false_negatives);
  }
  return s;
}

RewardScores reward_f1(const std::vector<int>& truth, const std::vector<model::RewardPrediction>& predicted) {
  std::vector<int> values;
  values.reserve(predicted.size());
  for (const auto& p : predicted) values.push_back(p.decoded_value);
  return reward_f1(truth, values);
}

model::RewardPrediction exact_reward_prediction(int reward) {
  model::RewardPrediction out;
  const auto bits = model::encode_reward(reward);
  for (int k = 0; k < model::kRewardBits; ++k) {
    out.logits[2 * k] = bits[k] ? -10.0f : 10.0f;
    out.logits[2 * k + 1] = -out.logits[2 * k];
  }
  out.decoded_value = reward;
  return out;
}

std::vector<model::StepPrediction> OracleModel::step(const std::vector<const Observation*>& obs,
                                                     const std::vector<Action>& actions) {
  std::vector<model::StepPrediction> out;
  out.reserve(obs.size());
  for (size_t i = 0; i < obs.size(); ++i) {
    gridworld::GameState state;
    state.grid = tile_map(*obs[i], game_.palette());
    model::StepPrediction p;
    if (game_.is_terminal(state.grid)) {
      p.observation = *obs[i];
      p.reward = exact_reward_prediction(0);
    } else {
      const gridworld::StepResult r = game_.step(state, actions[i]);
      p.observation = gridworld::render(r.state, game_.palette());
      p.reward = exact_reward_prediction(r.reward);
    }
    out.push_back(std::move(p));
  }
  return out;
}

RolloutReport evaluate_rollouts(ForwardModel& model, const Game& game, const std::vector<Grid>& levels, int steps,
                                int repeats, uint64_t action_seed) {
  if (steps < 1 || repeats < 1 || levels.empty()) throw ValidationError("rollouts need steps, repeats and levels");
  struct Run {
    gridworld::GameState state;
    Observation current;
    Rng actions;
    bool alive = true;
  };
  std::vector<Run> runs;
  for (size_t l = 0; l < levels.size(); ++l) {
    for (int r = 0; r < repeats; ++r) {
      auto [state, obs] = gridworld::reset(game, levels[l]);
      runs.push_back(Run{state, obs, Rng(Rng::mix(action_seed, l * 1000003ULL + r)), !state.terminal});
    }
  }

  RolloutReport report;
  report.steps = steps;
  report.repeats = repeats;
  report.levels = static_cast<int>(levels.size());
  report.width = levels[0].width;
  report.height = levels[0].height;
  for (const Grid& g : levels) {
    if (g.width != report.width || g.height != report.height) report.width = report.height = 0;
  }
  report.max_e_mse = 0.0;
  report.min_f_t = 1.0;
  double sum_mse = 0.0, sum_ft = 0.0;
  std::vector<int> truth_rewards;
  std::vector<model::RewardPrediction> predicted_rewards;

  for (int t = 0; t < steps; ++t) {
    std::vector<size_t> active;
    std::vector<const Observation*> inputs;
    std::vector<Action> actions;
    for (size_t i = 0; i < runs.size(); ++i) {
      if (!runs[i].alive) continue;
      active.push_back(i);
      inputs.push_back(&runs[i].current);
      actions.push_back(gridworld::action_from_index(static_cast<int>(runs[i].actions.uniform_index(4))));
    }
    if (active.empty()) break;
    std::vector<model::StepPrediction> preds = model.step(inputs, actions);
    double step_mse = 0.0, step_ft = 0.0;
    for (size_t k = 0; k < active.size(); ++k) {
      Run& run = runs[active[k]];
      const gridworld::StepResult truth = game.step(run.state, actions[k]);
      const Observation truth_obs = gridworld::render(truth.state, game.palette());
      const double e = pixel_mse(truth_obs, preds[k].observation);
      const double f = closest_tile_f1(truth.state.grid, tile_map(preds[k].observation, game.palette()));
      step_mse += e;
      step_ft += f;
      report.max_e_mse = std::max(report.max_e_mse, e);
      report.min_f_t = std::min(report.min_f_t, f);
      truth_rewards.push_back(truth.reward);
      predicted_rewards.push_back(preds[k].reward);
      run.state = truth.state;
      run.current = std::move(preds[k].observation);
      run.alive = !truth.state.terminal;
    }
    report.e_mse.push_back(step_mse / static_cast<double>(active.size()));
    report.f_t.push_back(step_ft / static_cast<double>(active.size()));
    sum_mse += step_mse;
    sum_ft += step_ft;
    report.frames += static_cast<long>(active.size());
  }
  if (report.frames > 0) {
    report.mean_e_mse = sum_mse / static_cast<double>(report.frames);
    report.mean_f_t = sum_ft / static_cast<double>(report.frames);
  }
  report.reward = reward_f1(truth_rewards, predicted_rewards);
  return report;
}

std::vector<RolloutReport> generalization_suite(ForwardModel& model, const Game& game,
                                                const std::vector<std::pair<int, int>>& sizes, int steps,
                                                int repeats, uint64_t seed) {
  const std::vector<Grid> source = game.builtin_levels();
  const levelgen::TileDistribution dist = levelgen::estimate_distribution(source, game.wall(), game.palette().size());
  std::vector<RolloutReport> out;
  for (size_t s = 0; s < sizes.size(); ++s) {
    levelgen::SizeRange range{sizes[s].first, sizes[s].first, sizes[s].second, sizes[s].second};
    std::vector<Grid> levels;
    for (int r = 0; r < repeats; ++r) levels.push_back(levelgen::generate(dist, range, Rng::mix(seed, s * 1000 + r)));
    out.push_back(evaluate_rollouts(model, game, levels, steps, 1, Rng::mix(seed, 500000 + s)));
  }
  return out;
}

std::string report_csv_header() {
  return "label,width,height,levels,repeats,steps,frames,mean_e_mse,max_e_mse,mean_f_t,min_f_t,"
         "reward_precision,reward_recall,f_r\n";
}

std::string report_csv_row(const std::string& label, const RolloutReport& r) {
  std::ostringstream s;
  s << std::setprecision(10) << label << ',' << r.width << ',' << r.height << ',' << r.levels << ',' << r.repeats
    << ',' << r.steps << ',' << r.frames << ',' << r.mean_e_mse << ',' << r.max_e_mse << ',' << r.mean_f_t << ','
    << r.min_f_t << ',' << r.reward.precision << ',' << r.reward.recall << ',' << r.reward.f1 << '\n';
  return s.str();
}

std::string per_step_csv(const RolloutReport& r) {
  std::ostringstream s;
  s << std::setprecision(10) << "step,e_mse,f_t\n";
  for (size_t i = 0; i < r.e_mse.size(); ++i) s << i + 1 << ',' << r.e_mse[i] << ',' << r.f_t[i] << '\n';
  return s.str();
}

std::string report_summary(const std::string& label, const RolloutReport& r) {
  std::ostringstream s;
  s << std::setprecision(6) << "[" << label << "]\n"
    << "size = " << r.width << "x" << r.height << "\n"
    << "levels = " << r.levels << "\nrepeats = " << r.repeats << "\nsteps = " << r.steps << "\n"
    << "frames = " << r.frames << "\n"
    << "mean_e_mse = " << r.mean_e_mse << "\nmax_e_mse = " << r.max_e_mse << "\n"
    << "mean_f_t = " << r.mean_f_t << "\nmin_f_t = " << r.min_f_t << "\n"
    << "reward_precision = " << r.reward.precision << "\nreward_recall = " << r.reward.recall << "\n"
    << "f_r = " << r.reward.f1 << "\n";
  return s.str();
}

}  // namespace nge::evalkit
