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
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "acceptance.h"
#include "nge/evalkit/evalkit.h"
#include "nge/experiments/experiments.h"
#include "nge/model/model_io.h"
#include "test_util.h"

namespace nge::acceptance {
namespace {

namespace fs = std::filesystem;
using training::TrainConfig;

// Action streams for the acceptance rollouts; differs from the stream the
// periodic training evaluations use.
constexpr uint64_t kRolloutSeed = 104729;

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

evalkit::RolloutReport builtin_rollouts(const model::ModelParams<float>& params, int steps) {
  const auto game = gridworld::make_game("sokoban", params.hyper.tile_size);
  evalkit::LearnedModel learned(params);
  return evalkit::evaluate_rollouts(learned, *game, game->builtin_levels(), steps, 3, kRolloutSeed);
}

// Drops the trailing wall_clock column.
std::string strip_wall_clock(const std::string& log) {
  std::istringstream in(log);
  std::string line, out;
  while (std::getline(in, line)) out += line.substr(0, line.rfind(',')) + "\n";
  return out;
}

}  // namespace

TrainedModel cached_train(const TrainConfig& config, const std::string& label, const std::string& cache_dir) {
  TrainConfig keyed = config;
  keyed.out_dir.clear();
  char key[17];
  std::snprintf(key, sizeof key, "%016llx", static_cast<unsigned long long>(fnv1a(training::config_to_json(keyed))));
  TrainedModel out;
  out.dir = (fs::path(cache_dir) / (label + "_" + key)).string();
  const fs::path model_path = fs::path(out.dir) / "model.nge";
  if (!fs::exists(model_path)) {
    std::fprintf(stderr, "training %s into %s\n", label.c_str(), out.dir.c_str());
    TrainConfig run = config;
    run.out_dir = out.dir;
    training::train(run, [&](const training::LogRow& row) {
      if (row.f_t) {
        std::fprintf(stderr, "  %s epoch %d F_t %.4f min F_t %.4f F_r %.4f\n", label.c_str(), row.epoch, *row.f_t,
                     *row.min_f_t, *row.f_r);
      }
    });
  }
  out.params = model::load_model(model_path.string());
  std::istringstream log(read_file(fs::path(out.dir) / "train_log.csv"));
  std::string line;
  std::getline(log, line);
  while (std::getline(log, line)) {
    if (!line.empty()) out.epochs = std::stoi(line.substr(0, line.find(',')));
  }
  return out;
}

TrainConfig sokoban_config() {
  TrainConfig c;
  c.total_epochs = 20000;
  c.eval_every = 250;
  c.eval_rollout_len = 20;
  c.early_stop = true;
  c.early_stop_threshold = 0.99;
  c.checkpoint_every = 2000;
  return c;
}

std::vector<std::string> ordering_variants() { return {"selective", "diagonal", "n1_pdt", "n1_nopdt"}; }

TrainConfig ordering_config(const std::string& variant) {
  TrainConfig base;
  base.total_epochs = 5000;
  base.eval_every = 1000;
  if (variant == "selective" || variant == "diagonal") return experiments::gating_variant(base, variant);
  return experiments::ablation_variant(base, variant);
}

Outcome sokoban_training(const std::string& cache_dir) {
  const TrainedModel m = cached_train(sokoban_config(), "sokoban", cache_dir);
  const evalkit::RolloutReport r = builtin_rollouts(m.params, 20);
  Outcome o;
  o.pass = m.epochs <= 20000 && r.min_f_t >= 0.99 && r.reward.f1 >= 0.99;
  o.detail = "steps " + std::to_string(m.epochs) + ", 20-step rollouts x3 on 5 held-out levels: min F_t " +
             fmt("%.4f", r.min_f_t) + ", mean F_t " + fmt("%.4f", r.mean_f_t) + ", F_r " + fmt("%.4f", r.reward.f1) +
             " (need steps <= 20000, min F_t >= 0.99, F_r >= 0.99)";
  const evalkit::RolloutReport long_run = builtin_rollouts(m.params, 100);
  o.notes.push_back("100-step rollouts: mean F_t " + fmt("%.4f", long_run.mean_f_t) + ", min F_t " +
                    fmt("%.4f", long_run.min_f_t) + ", F_r " + fmt("%.4f", long_run.reward.f1));
  return o;
}

Outcome size_generalization(const std::string& cache_dir) {
  const TrainedModel m = cached_train(sokoban_config(), "sokoban", cache_dir);
  const std::string before = model::serialize_model(m.params);
  const double base = builtin_rollouts(m.params, 100).mean_f_t;
  const auto game = gridworld::make_game("sokoban", m.params.hyper.tile_size);
  evalkit::LearnedModel learned(m.params);
  const std::vector<std::pair<int, int>> sizes = {{20, 20}, {30, 30}};
  const auto reports = evalkit::generalization_suite(learned, *game, sizes, 100, 3, kRolloutSeed);
  Outcome o;
  o.pass = model::serialize_model(m.params) == before;
  o.detail = "training-size F_t " + fmt("%.4f", base);
  for (size_t i = 0; i < sizes.size(); ++i) {
    const double gap = std::abs(reports[i].mean_f_t - base);
    o.pass = o.pass && gap <= 0.01;
    o.detail += ", " + std::to_string(sizes[i].first) + "x" + std::to_string(sizes[i].second) + " F_t " +
                fmt("%.4f", reports[i].mean_f_t) + " (gap " + fmt("%.4f", gap) + ")";
  }
  o.detail += std::string(", parameters ") +
              (model::serialize_model(m.params) == before ? "byte-identical" : "CHANGED") + " (need gap <= 0.01)";
  return o;
}

Outcome gating_ordering(const std::string& cache_dir) {
  std::map<std::string, double> ft;
  for (const std::string& v : ordering_variants()) {
    const TrainedModel m = cached_train(ordering_config(v), v, cache_dir);
    ft[v] = builtin_rollouts(m.params, 100).mean_f_t;
  }
  Outcome o;
  const bool gating = ft["selective"] >= ft["diagonal"];
  const bool iterations = ft["selective"] > std::max(ft["n1_pdt"], ft["n1_nopdt"]);
  o.pass = gating && iterations;
  o.detail = "final 100-step F_t after 5000 steps: selective (n=2, PDT) " + fmt("%.4f", ft["selective"]) +
             ", diagonal " + fmt("%.4f", ft["diagonal"]) + ", n=1 PDT " + fmt("%.4f", ft["n1_pdt"]) +
             ", n=1 no PDT " + fmt("%.4f", ft["n1_nopdt"]) + " (need selective >= diagonal and n=2 PDT > n=1)";
  return o;
}

Outcome reproducibility() {
  TrainConfig c;
  c.model = testing::small_hyper(model::GatingMode::kSelective);
  c.model.tile_size = 4;
  c.batch_transitions = 16;
  c.size_range = {5, 7, 5, 7};
  c.episodes_per_refresh = 20;
  c.max_episode_steps = 15;
  c.total_epochs = 30;
  c.eval_every = 10;
  c.eval_repeats = 1;
  c.eval_rollout_len = 5;
  c.refresh_every = 20;
  c.checkpoint_every = 15;
  c.threads = 1;
  const fs::path root = fs::temp_directory_path() / "nge_acceptance_repro";
  fs::remove_all(root);
  std::vector<std::string> models, logs;
  for (const char* run : {"a", "b"}) {
    c.out_dir = (root / run).string();
    training::train(c);
    models.push_back(read_file(root / run / "model.nge") + read_file(root / run / "checkpoint_15.nge"));
    logs.push_back(strip_wall_clock(read_file(root / run / "train_log.csv")));
  }
  fs::remove_all(root);
  Outcome o;
  o.pass = !models[0].empty() && models[0] == models[1] && logs[0] == logs[1];
  o.detail = std::string("model files ") + (models[0] == models[1] ? "identical" : "DIFFER") + ", logs " +
             (logs[0] == logs[1] ? "identical" : "DIFFER") + " apart from wall_clock (" +
             std::to_string(models[0].size()) + " model bytes, 30 steps, 1 thread)";
  return o;
}

}  // namespace nge::acceptance
