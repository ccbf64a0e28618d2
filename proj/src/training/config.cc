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

#include "json.hpp"
#include "nge/common/errors.h"
#include "nge/training/training.h"

namespace nge::training {
namespace {

using nlohmann::json;

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void reject_unknown(const json& j, std::initializer_list<const char*> keys, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : keys) known = known || it.key() == k;
    if (!known) throw ValidationError("unknown config key '" + where + it.key() + "'");
  }
}

}  // namespace

void TrainConfig::validate() const {
  const auto names = gridworld::game_names();
  if (std::find(names.begin(), names.end(), game) == names.end()) throw ValidationError("unknown game '" + game + "'");
  model.validate();
  if (sequence_length < 1 || batch_transitions < 1 || batch_transitions % sequence_length != 0) {
    throw ValidationError("batch_transitions must be a positive multiple of sequence_length");
  }
  if (symmetry_factor != 8) throw ValidationError("symmetry_factor must be 8");
  if (!(pdt_ramp > 0.0 && pdt_ramp <= 1.0)) throw ValidationError("pdt_ramp must lie in (0, 1]");
  if (noise_sigma < 0.0 || !(lr > 0.0)) throw ValidationError("noise_sigma >= 0 and lr > 0 required");
  if (total_epochs < 1 || eval_every < 1 || eval_repeats < 1 || eval_rollout_len < 1) {
    throw ValidationError("epoch and evaluation counts must be positive");
  }
  if (refresh_every < 1 || episodes_per_refresh < 1 || max_episode_steps < sequence_length) {
    throw ValidationError(
        "refresh_every, episodes_per_refresh must be positive and max_episode_steps >= sequence_length");
  }
  if (!(early_stop_threshold >= 0.0 && early_stop_threshold <= 1.0)) {
    throw ValidationError("early_stop_threshold must lie in [0, 1]");
  }
  if (checkpoint_every < 1 || threads < 0) throw ValidationError("checkpoint_every must be positive, threads >= 0");
  size_range.validate();
}

TrainConfig parse_config(const std::string& text) {
  TrainConfig c;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
  try {
    reject_unknown(j,
                   {"game", "model", "batch_transitions", "symmetry_factor", "sequence_length", "pdt", "pdt_ramp",
                    "pdt_backprop", "noise_sigma", "lr", "sat_limit", "sat_weight", "total_epochs", "eval_every",
                    "eval_repeats", "eval_rollout_len", "seed", "eval_seed", "refresh_every",
                    "episodes_per_refresh", "max_episode_steps", "size_range", "checkpoint_every", "threads",
                    "early_stop", "early_stop_threshold", "out_dir"},
                   "");
    read(j, "game", c.game);
    read(j, "batch_transitions", c.batch_transitions);
    read(j, "symmetry_factor", c.symmetry_factor);
    read(j, "sequence_length", c.sequence_length);
    read(j, "pdt", c.pdt);
    read(j, "pdt_ramp", c.pdt_ramp);
    read(j, "pdt_backprop", c.pdt_backprop);
    read(j, "noise_sigma", c.noise_sigma);
    read(j, "lr", c.lr);
    read(j, "sat_limit", c.sat_limit);
    read(j, "sat_weight", c.sat_weight);
    read(j, "total_epochs", c.total_epochs);
    read(j, "eval_every", c.eval_every);
    read(j, "eval_repeats", c.eval_repeats);
    read(j, "eval_rollout_len", c.eval_rollout_len);
    read(j, "seed", c.seed);
    read(j, "eval_seed", c.eval_seed);
    read(j, "refresh_every", c.refresh_every);
    read(j, "episodes_per_refresh", c.episodes_per_refresh);
    read(j, "max_episode_steps", c.max_episode_steps);
    read(j, "checkpoint_every", c.checkpoint_every);
    read(j, "early_stop", c.early_stop);
    read(j, "early_stop_threshold", c.early_stop_threshold);
    read(j, "threads", c.threads);
    read(j, "out_dir", c.out_dir);
    if (j.contains("model")) {
      const json& m = j.at("model");
      reject_unknown(m,
                     {"state_channels", "reward_channels", "tile_size", "iterations", "gating", "core",
                      "condition_every_iteration"},
                     "model.");
      read(m, "state_channels", c.model.state_channels);
      read(m, "reward_channels", c.model.reward_channels);
      read(m, "tile_size", c.model.tile_size);
      read(m, "iterations", c.model.iterations);
      read(m, "condition_every_iteration", c.model.condition_every_iteration);
      if (m.contains("gating")) c.model.gating = model::parse_gating(m.at("gating").get<std::string>());
      if (m.contains("core")) c.model.core = model::parse_core(m.at("core").get<std::string>());
    }
    if (j.contains("size_range")) {
      const json& r = j.at("size_range");
      reject_unknown(r, {"w_min", "w_max", "h_min", "h_max"}, "size_range.");
      read(r, "w_min", c.size_range.w_min);
      read(r, "w_max", c.size_range.w_max);
      read(r, "h_min", c.size_range.h_min);
      read(r, "h_max", c.size_range.h_max);
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("bad config value: ") + e.what());
  }
  c.model.num_actions = gridworld::kNumActions;
  c.validate();
  return c;
}

TrainConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_json(const TrainConfig& c) {
  json j;
  j["game"] = c.game;
  j["model"] = {{"state_channels", c.model.state_channels},
                {"reward_channels", c.model.reward_channels},
                {"tile_size", c.model.tile_size},
                {"iterations", c.model.iterations},
                {"gating", std::string(model::gating_name(c.model.gating))},
                {"core", std::string(model::core_name(c.model.core))},
                {"condition_every_iteration", c.model.condition_every_iteration}};
  j["batch_transitions"] = c.batch_transitions;
  j["symmetry_factor"] = c.symmetry_factor;
  j["sequence_length"] = c.sequence_length;
  j["pdt"] = c.pdt;
  j["pdt_ramp"] = c.pdt_ramp;
  j["pdt_backprop"] = c.pdt_backprop;
  j["noise_sigma"] = c.noise_sigma;
  j["lr"] = c.lr;
  j["sat_limit"] = c.sat_limit;
  j["sat_weight"] = c.sat_weight;
  j["total_epochs"] = c.total_epochs;
  j["eval_every"] = c.eval_every;
  j["eval_repeats"] = c.eval_repeats;
  j["eval_rollout_len"] = c.eval_rollout_len;
  j["seed"] = c.seed;
  j["eval_seed"] = c.eval_seed;
  j["refresh_every"] = c.refresh_every;
  j["episodes_per_refresh"] = c.episodes_per_refresh;
  j["max_episode_steps"] = c.max_episode_steps;
  j["size_range"] = {{"w_min", c.size_range.w_min},
                     {"w_max", c.size_range.w_max},
                     {"h_min", c.size_range.h_min},
                     {"h_max", c.size_range.h_max}};
  j["checkpoint_every"] = c.checkpoint_every;
  j["early_stop"] = c.early_stop;
  j["early_stop_threshold"] = c.early_stop_threshold;
  j["threads"] = c.threads;
  j["out_dir"] = c.out_dir;
  return j.dump(2) + "\n";
}

}  // namespace nge::training
