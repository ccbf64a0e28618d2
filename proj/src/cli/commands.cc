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

#include "nge/cli/commands.h"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>

#include "nge/cli/session.h"
#include "nge/common/errors.h"
#include "nge/common/parallel.h"
#include "nge/common/rng.h"
#include "nge/evalkit/evalkit.h"
#include "nge/experiments/experiments.h"
#include "nge/levelgen/levelgen.h"
#include "nge/model/model_io.h"
#include "nge/training/training.h"

namespace nge::cli {
namespace {

namespace fs = std::filesystem;

constexpr uint64_t kDefaultEvalSeed = 7919;

void write_file(const std::string& dir, const std::string& name, const std::string& content) {
  fs::create_directories(dir);
  const fs::path path = fs::path(dir) / name;
  std::ofstream f(path, std::ios::binary);
  f << content;
  if (!f) throw std::runtime_error("cannot write " + path.string());
}

training::TrainConfig load_train_config(const CommandOptions& o) {
  training::TrainConfig c = o.config.empty() ? training::TrainConfig{} : training::load_config(o.config);
  if (o.game_given) c.game = o.game;
  if (o.seed) c.seed = *o.seed;
  if (!o.out.empty()) c.out_dir = o.out;
  c.validate();
  return c;
}

std::vector<Grid> load_levels(const CommandOptions& o, const Game& game) {
  if (o.levels.empty()) return game.builtin_levels();
  std::vector<Grid> levels;
  for (const auto& path : o.levels) {
    levels.push_back(gridworld::load_level(path, game.palette()));
    game.validate(levels.back());
  }
  return levels;
}

model::ModelParams<float> load_checked_model(const std::string& path, const Game& game) {
  if (path.empty()) throw ValidationError("--model is required for the learned engine");
  model::ModelParams<float> params = model::load_model(path);
  if (params.hyper.tile_size != game.palette().tile_size()) {
    throw ValidationError("model tile size " + std::to_string(params.hyper.tile_size) + " does not match the " +
                          std::string(game.name()) + " palette");
  }
  return params;
}

std::unique_ptr<evalkit::ForwardModel> make_forward_model(const CommandOptions& o, const Game& game) {
  if (o.engine == "oracle") return std::make_unique<evalkit::OracleModel>(game);
  if (o.engine != "learned") throw ValidationError("--engine must be oracle or learned");
  return std::make_unique<evalkit::LearnedModel>(load_checked_model(o.model, game));
}

void check_counts(const CommandOptions& o) {
  if (o.steps < 1 || o.repeats < 1) throw ValidationError("--steps and --repeats must be positive");
}

std::pair<int, int> parse_size(const std::string& s) {
  int w = 0, h = 0;
  char x = 0, extra = 0;
  if (std::sscanf(s.c_str(), "%d%c%d%c", &w, &x, &h, &extra) != 3 || x != 'x' || w < 3 || h < 3) {
    throw ValidationError("bad size '" + s + "', expected WxH with sides >= 3");
  }
  return {w, h};
}

void print_curves(const std::vector<experiments::Curve>& curves, std::ostream& out) {
  for (const auto& c : curves) {
    char line[160];
    std::snprintf(line, sizeof(line), "%-10s final F_t %.4f  min F_t %.4f\n", c.label.c_str(), c.final_f_t(),
                  c.final_min_f_t());
    out << line;
  }
}

}  // namespace

int cmd_train(const CommandOptions& o, std::ostream& out) {
  const training::TrainConfig c = load_train_config(o);
  if (c.out_dir.empty()) throw ValidationError("train needs --out or out_dir in the config");
  training::train(c, [&](const training::LogRow& row) {
    if (!row.f_t && row.epoch % 50 != 0) return;
    char line[200];
    std::snprintf(line, sizeof(line), "epoch %6d  loss %.6f  pixel %.6f  reward %.6f", row.epoch, row.loss,
                  row.pixel_loss, row.reward_loss);
    out << line;
    if (row.f_t) {
      std::snprintf(line, sizeof(line), "  F_t %.4f  min F_t %.4f  F_r %.4f", *row.f_t, row.min_f_t.value_or(0.0),
                    row.f_r.value_or(0.0));
      out << line;
    }
    out << '\n' << std::flush;
  });
  out << "model written to " << (fs::path(c.out_dir) / "model.nge").string() << '\n';
  return kOk;
}

int cmd_eval(const CommandOptions& o, std::ostream& out) {
  check_counts(o);
  const auto game = gridworld::make_game(o.game);
  const std::vector<Grid> levels = load_levels(o, *game);
  auto fm = make_forward_model(o, *game);
  const evalkit::RolloutReport r =
      evalkit::evaluate_rollouts(*fm, *game, levels, o.steps, o.repeats, o.seed.value_or(kDefaultEvalSeed));
  const std::string label = o.engine == "oracle" ? "oracle" : fs::path(o.model).stem().string();
  out << evalkit::report_summary(label, r);
  if (!o.out.empty()) {
    write_file(o.out, "eval_report.csv", evalkit::report_csv_header() + evalkit::report_csv_row(label, r));
    write_file(o.out, "eval_per_step.csv", evalkit::per_step_csv(r));
    write_file(o.out, "eval_summary.txt", evalkit::report_summary(label, r));
  }
  return kOk;
}

int cmd_generate(const CommandOptions& o, std::ostream& out) {
  if (o.out.empty()) throw ValidationError("generate needs --out");
  if (o.count < 1) throw ValidationError("--count must be positive");
  const auto game = gridworld::make_game(o.game);
  const std::vector<Grid> source = game->builtin_levels();
  const auto dist = levelgen::estimate_distribution(source, game->wall(), game->palette().size());
  const levelgen::SizeRange range{o.min_size, o.max_size, o.min_size, o.max_size};
  range.validate();
  const uint64_t seed = o.seed.value_or(1);
  fs::create_directories(o.out);
  for (int i = 0; i < o.count; ++i) {
    const Grid level = levelgen::generate(dist, range, Rng::mix(seed, static_cast<uint64_t>(i)));
    char name[32];
    std::snprintf(name, sizeof(name), "level_%03d.txt", i);
    gridworld::save_level((fs::path(o.out) / name).string(), level, game->palette());
    out << (fs::path(o.out) / name).string() << ' ' << level.width << 'x' << level.height << '\n';
  }
  return kOk;
}

int cmd_compare(const CommandOptions& o, std::ostream& out) {
  const training::TrainConfig base = load_train_config(o);
  const auto curves = experiments::gating_comparison(base, o.variants, o.out);
  print_curves(curves, out);
  if (o.out.empty()) out << experiments::curves_csv(curves);
  return kOk;
}

int cmd_ablate(const CommandOptions& o, std::ostream& out) {
  const training::TrainConfig base = load_train_config(o);
  const auto curves = experiments::ablation_suite(base, o.out);
  print_curves(curves, out);
  if (o.out.empty()) out << experiments::curves_csv(curves);
  return kOk;
}

int cmd_generalize(const CommandOptions& o, std::ostream& out) {
  check_counts(o);
  const auto game = gridworld::make_game(o.game);
  std::vector<std::pair<int, int>> sizes;
  for (const auto& s : o.sizes) sizes.push_back(parse_size(s));
  auto fm = make_forward_model(o, *game);
  const auto reports =
      evalkit::generalization_suite(*fm, *game, sizes, o.steps, o.repeats, o.seed.value_or(kDefaultEvalSeed));
  std::string csv = evalkit::report_csv_header();
  for (size_t i = 0; i < reports.size(); ++i) {
    const std::string label = o.sizes[i];
    out << evalkit::report_summary(label, reports[i]);
    csv += evalkit::report_csv_row(label, reports[i]);
    if (!o.out.empty()) write_file(o.out, "generalize_" + label + "_per_step.csv", evalkit::per_step_csv(reports[i]));
  }
  if (!o.out.empty()) write_file(o.out, "generalize_report.csv", csv);
  return kOk;
}

int cmd_inspect(const CommandOptions& o, std::ostream& out) {
  model::ModelParams<float> params;
  uint16_t version = model::kModelFormatVersion;
  if (!o.model.empty()) {
    version = model::inspect_model(o.model).version;
    params = model::load_model(o.model);
    out << "model: " << o.model << '\n';
  } else {
    const training::TrainConfig c = o.config.empty() ? training::TrainConfig{} : training::load_config(o.config);
    params = model::init_params<float>(c.model, c.seed);
    out << "model: fresh (" << (o.config.empty() ? "defaults" : o.config) << ")\n";
  }
  const model::HyperParams& h = params.hyper;
  out << "format_version: " << version << '\n'
      << "state_channels: " << h.state_channels << '\n'
      << "reward_channels: " << h.reward_channels << '\n'
      << "tile_size: " << h.tile_size << '\n'
      << "num_actions: " << h.num_actions << '\n'
      << "iterations: " << h.iterations << '\n'
      << "gating: " << model::gating_name(h.gating) << '\n'
      << "core: " << model::core_name(h.core) << '\n'
      << "condition_every_iteration: " << (h.condition_every_iteration ? "true" : "false") << '\n';
  params.for_each([&](std::string_view name, const Parameter<float>& p) {
    out << "  " << name << ' ' << shape_string(p.value) << ' ' << p.size() << '\n';
  });
  out << "parameter_count: " << params.parameter_count() << '\n';
  return kOk;
}

int cmd_play(const CommandOptions& o, std::istream& in, std::ostream& out) {
  const auto game = gridworld::make_game(o.game);
  const Grid level = o.levels.empty() ? game->builtin_levels().front() : load_levels(o, *game).front();
  const uint64_t seed = o.seed.value_or(0);
  if (o.engine != "oracle" && o.engine != "learned") throw ValidationError("--engine must be oracle or learned");

  std::optional<Session> oracle, learned;
  oracle.emplace(Session::oracle(*game, seed));
  if (!o.model.empty() || o.engine == "learned") {
    learned.emplace(Session::learned(load_checked_model(o.model, *game), *game, seed));
  }
  Session& primary = o.engine == "oracle" ? *oracle : *learned;
  oracle->reset(level);
  if (learned) learned->reset(level);

  auto show = [&](const std::string& status) {
    if (o.color) out << "\x1b[H\x1b[2J";
    out << "tick " << primary.tick() << " [" << o.engine << "]\n"
        << glyph_frame(primary.grid(), game->palette(), o.color) << status << '\n'
        << std::flush;
  };
  show("arrows move, q quits");
  while (!primary.terminal()) {
    const int ch = in.get();
    if (ch == EOF || ch == 'q') break;
    if (ch != 0x1b || in.get() != '[') continue;
    Action action;
    switch (in.get()) {
      case 'A': action = Action::kUp; break;
      case 'B': action = Action::kDown; break;
      case 'C': action = Action::kRight; break;
      case 'D': action = Action::kLeft; break;
      default: continue;
    }
    std::string status;
    std::optional<int> oracle_reward, learned_reward;
    if (!oracle->terminal()) oracle_reward = oracle->step(action).reward;
    if (learned) learned_reward = learned->step(action).reward;
    if (learned && oracle_reward) {
      status = "reward: predicted " + std::to_string(*learned_reward) + " | oracle " + std::to_string(*oracle_reward);
    } else if (learned) {
      status = "reward: predicted " + std::to_string(*learned_reward) + " | oracle (episode over)";
    } else {
      status = "reward: " + std::to_string(*oracle_reward);
    }
    show(status);
  }
  if (primary.terminal()) out << "episode finished\n";
  return kOk;
}

int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  worker_threads();  // applies NGE_THREADS
  CLI::App app{"Learned grid-game engines: train, evaluate and play.", "nge"};
  app.require_subcommand(1);
  CommandOptions o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", o.out, "Output directory; every file is written under it");
    sub->add_option("--seed", o.seed, "Seed for the command's randomness");
  };
  auto add_game = [&](CLI::App* sub) {
    sub->add_option_function<std::string>(
        "--game", [&](const std::string& g) { o.game = g; o.game_given = true; }, "sokoban, labyrinth or painter");
  };
  auto add_rollout = [&](CLI::App* sub) {
    sub->add_option("--model", o.model, "Model file (.nge)");
    sub->add_option("--engine", o.engine, "oracle or learned")->check(CLI::IsMember({"oracle", "learned"}));
    sub->add_option("--steps", o.steps, "Rollout length");
    sub->add_option("--repeats", o.repeats, "Rollouts per level");
  };

  CLI::App* train = app.add_subcommand("train", "Train a model from a JSON config");
  train->add_option("--config", o.config, "Training config (JSON)");
  add_game(train);
  add_common(train);

  CLI::App* eval = app.add_subcommand("eval", "Closed-loop rollouts against the game");
  add_game(eval);
  add_rollout(eval);
  eval->add_option("--level", o.levels, "Level files (default: built-in levels)");
  add_common(eval);

  CLI::App* generate = app.add_subcommand("generate", "Generate random levels");
  add_game(generate);
  generate->add_option("--count", o.count, "Number of levels");
  generate->add_option("--min-size", o.min_size, "Smallest side");
  generate->add_option("--max-size", o.max_size, "Largest side");
  add_common(generate);

  CLI::App* compare = app.add_subcommand("compare-gating", "Train gating variants and write F_t curves");
  compare->add_option("--config", o.config, "Base training config (JSON)");
  compare->add_option("--variants", o.variants, "Subset of none, diagonal, selective, ff");
  add_game(compare);
  add_common(compare);

  CLI::App* ablate = app.add_subcommand("ablate", "Train {1,2} iterations x {PDT, no PDT}");
  ablate->add_option("--config", o.config, "Base training config (JSON)");
  add_game(ablate);
  add_common(ablate);

  CLI::App* generalize = app.add_subcommand("generalize", "Rollouts on generated levels of other sizes");
  add_game(generalize);
  add_rollout(generalize);
  generalize->add_option("--sizes", o.sizes, "Level sizes as WxH");
  add_common(generalize);

  CLI::App* play = app.add_subcommand("play", "Play a level in the terminal");
  add_game(play);
  play->add_option("--engine", o.engine, "oracle or learned")->check(CLI::IsMember({"oracle", "learned"}));
  play->add_option("--model", o.model, "Model file; with --engine oracle its reward is shown alongside");
  play->add_option("--level", o.levels, "Level file (default: first built-in level)")->expected(0, 1);
  play->add_option("--seed", o.seed, "Session seed");
  play->add_flag("!--no-color", o.color, "Plain glyphs without ANSI colour");

  CLI::App* inspect = app.add_subcommand("inspect", "Print a model's hyperparameters and sizes");
  inspect->add_option("--model", o.model, "Model file; without it a fresh model is described");
  inspect->add_option("--config", o.config, "Config whose model section describes the fresh model");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "nge: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (train->parsed()) return cmd_train(o, out);
    if (eval->parsed()) return cmd_eval(o, out);
    if (generate->parsed()) return cmd_generate(o, out);
    if (compare->parsed()) return cmd_compare(o, out);
    if (ablate->parsed()) return cmd_ablate(o, out);
    if (generalize->parsed()) return cmd_generalize(o, out);
    if (play->parsed()) return cmd_play(o, in, out);
    if (inspect->parsed()) return cmd_inspect(o, out);
  } catch (const ValidationError& e) {
    err << "nge: invalid input: " << e.what() << '\n';
    return kValidation;
  } catch (const ShapeError& e) {
    err << "nge: invalid input: " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    err << "nge: error: " << e.what() << '\n';
    return kRuntime;
  }
  return kUsage;
}

}  // namespace nge::cli
