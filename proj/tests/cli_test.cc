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
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "nge/cli/commands.h"
#include "nge/cli/session.h"
#include "nge/evalkit/evalkit.h"
#include "nge/model/model_io.h"

namespace nge::cli {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code;
  std::string out, err;
};

CliRun run(std::vector<std::string> args, const std::string& input = "") {
  args.insert(args.begin(), "nge");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::istringstream in(input);
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), in, out, err);
  return {code, out.str(), err.str()};
}

std::string read_file(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::path(::testing::TempDir()) / name;
  fs::remove_all(p);
  return p;
}

TEST(CliTest, ExitCodes) {
  EXPECT_EQ(run({}).code, kUsage);
  EXPECT_EQ(run({"eval", "--bogus"}).code, kUsage);
  EXPECT_EQ(run({"play", "--engine", "neither"}).code, kUsage);
  const CliRun missing = run({"inspect", "--model", "/nonexistent/m.nge"});
  EXPECT_EQ(missing.code, kValidation);
  EXPECT_EQ(std::count(missing.err.begin(), missing.err.end(), '\n'), 1);
  EXPECT_EQ(run({"generalize", "--engine", "oracle", "--sizes", "7by7"}).code, kValidation);
  EXPECT_EQ(run({"eval", "--engine", "learned"}).code, kValidation);
  EXPECT_EQ(run({"generate", "--count", "2"}).code, kValidation);  // no --out
  EXPECT_EQ(run({"--help"}).code, kOk);
}

TEST(CliTest, GenerateIsDeterministic) {
  const fs::path a = fresh_dir("gen_a"), b = fresh_dir("gen_b");
  ASSERT_EQ(run({"generate", "--game", "sokoban", "--count", "3", "--seed", "9", "--out", a.string()}).code, kOk);
  ASSERT_EQ(run({"generate", "--game", "sokoban", "--count", "3", "--seed", "9", "--out", b.string()}).code, kOk);
  for (const char* f : {"level_000.txt", "level_001.txt", "level_002.txt"}) {
    EXPECT_EQ(read_file(a / f), read_file(b / f));
    EXPECT_FALSE(read_file(a / f).empty());
  }
  EXPECT_EQ(std::distance(fs::directory_iterator(a), fs::directory_iterator{}), 3);
}

TEST(CliTest, OracleEvalIsPerfect) {
  const fs::path out = fresh_dir("eval_oracle");
  const CliRun r = run({"eval", "--engine", "oracle", "--game", "labyrinth", "--steps", "15", "--repeats", "2", "--out",
                     out.string()});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_NE(r.out.find("min_f_t = 1\n"), std::string::npos);
  EXPECT_NE(r.out.find("max_e_mse = 0\n"), std::string::npos);
  for (const char* f : {"eval_report.csv", "eval_per_step.csv", "eval_summary.txt"}) EXPECT_TRUE(fs::exists(out / f));
}

TEST(CliTest, InspectCountIsSizeIndependent) {
  const fs::path dir = fresh_dir("inspect");
  fs::create_directories(dir);
  const model::ModelParams<float> p = model::init_params<float>(model::HyperParams{}, 1);
  model::save_model((dir / "m.nge").string(), p);
  const CliRun fresh = run({"inspect"});
  const CliRun file = run({"inspect", "--model", (dir / "m.nge").string()});
  ASSERT_EQ(fresh.code, kOk);
  ASSERT_EQ(file.code, kOk);
  const std::string count = "parameter_count: " + std::to_string(p.parameter_count()) + "\n";
  EXPECT_NE(fresh.out.find(count), std::string::npos);
  EXPECT_NE(file.out.find(count), std::string::npos);
  EXPECT_NE(file.out.find("format_version: 1\n"), std::string::npos);
  // Generalization to other sizes runs the very same file.
  const CliRun gen = run({"generalize", "--model", (dir / "m.nge").string(), "--sizes", "5x5", "--sizes", "9x7",
                       "--steps", "2", "--repeats", "1"});
  ASSERT_EQ(gen.code, kOk) << gen.err;
  EXPECT_NE(gen.out.find("size = 9x7"), std::string::npos);
}

// Splits play output into the glyph grids shown at each tick.
std::vector<std::string> frames(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line, cur;
  bool inside = false;
  while (std::getline(in, line)) {
    if (line.rfind("tick ", 0) == 0) {
      inside = true;
      cur.clear();
    } else if (inside && (line.rfind("reward", 0) == 0 || line.rfind("arrows", 0) == 0)) {
      out.push_back(cur);
      inside = false;
    } else if (inside) {
      cur += line + "\n";
    }
  }
  return out;
}

TEST(CliTest, OraclePlayShowsTheTrueGrid) {
  auto game = gridworld::make_game("sokoban");
  const std::string keys = "\x1b[C\x1b[C\x1b[A\x1bx\x1b[D\x1b[B\nq\x1b[A";
  const CliRun r = run({"play", "--engine", "oracle", "--game", "sokoban", "--no-color"}, keys);
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto shown = frames(r.out);
  const Action actions[] = {Action::kRight, Action::kRight, Action::kUp, Action::kLeft, Action::kDown};
  ASSERT_EQ(shown.size(), 6u);  // start + five moves; input after q is ignored
  gridworld::GameState s = gridworld::reset(*game, game->builtin_levels().front()).first;
  for (size_t t = 0; t < shown.size(); ++t) {
    if (t > 0) s = game->step(s, actions[t - 1]).state;
    const Grid seen = evalkit::tile_map(gridworld::render(s, game->palette()), game->palette());
    EXPECT_EQ(shown[t], glyph_frame(seen, game->palette(), false)) << "tick " << t;
  }
  EXPECT_EQ(r.out.find("\x1b[38"), std::string::npos);
}

TEST(CliTest, LearnedPlayShowsBothRewards) {
  const fs::path dir = fresh_dir("play_learned");
  fs::create_directories(dir);
  model::save_model((dir / "m.nge").string(), model::init_params<float>(model::HyperParams{}, 2));
  const CliRun r = run({"play", "--engine", "learned", "--model", (dir / "m.nge").string(), "--no-color"},
                    "\x1b[A\x1b[Bq");
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_NE(r.out.find("reward: predicted "), std::string::npos);
  EXPECT_NE(r.out.find(" | oracle 0"), std::string::npos);
  EXPECT_EQ(frames(r.out).size(), 3u);
}

TEST(SessionTest, ResetStepContract) {
  auto game = gridworld::make_game("painter");
  Session s = Session::oracle(*game, 3);
  EXPECT_THROW(s.step(Action::kUp), std::logic_error);
  const Grid level = game->builtin_levels()[1];
  s.reset(level);
  EXPECT_EQ(s.grid(), level);
  const StepOutcome o = s.step(Action::kUp);
  EXPECT_EQ(o.reward, 1);
  EXPECT_EQ(s.tick(), 1);
  EXPECT_EQ(o.observation, gridworld::render(s.grid(), game->palette()));

  model::HyperParams small;
  small.tile_size = 4;
  EXPECT_THROW(Session::learned(model::init_params<float>(small, 1), *game), ValidationError);
  Session l = Session::learned(model::init_params<float>(model::HyperParams{}, 1), *game, 5);
  EXPECT_TRUE(l.is_learned());
  l.reset(level);
  EXPECT_EQ(l.grid(), level);
  for (int t = 0; t < 3; ++t) EXPECT_FALSE(l.step(Action::kLeft).terminal);
  EXPECT_EQ(l.seed(), 5u);
}

TEST(CliTest, TrainWritesOnlyUnderOut) {
  const fs::path dir = fresh_dir("cli_train");
  fs::create_directories(dir);
  const fs::path cfg = dir / "cfg.json";
  std::ofstream(cfg) << R"({"model": {"state_channels": 10, "reward_channels": 8, "tile_size": 4},
    "batch_transitions": 8, "sequence_length": 4, "total_epochs": 3, "eval_every": 3, "eval_repeats": 1,
    "eval_rollout_len": 2, "episodes_per_refresh": 6, "max_episode_steps": 8,
    "size_range": {"w_min": 4, "w_max": 5, "h_min": 4, "h_max": 5}})";
  const fs::path out = dir / "run";
  const CliRun r = run({"train", "--config", cfg.string(), "--game", "painter", "--out", out.string()});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_TRUE(fs::exists(out / "model.nge"));
  EXPECT_TRUE(fs::exists(out / "train_log.csv"));
  EXPECT_NE(read_file(out / "config.json").find("painter"), std::string::npos);
  std::vector<std::string> top;
  for (const auto& e : fs::directory_iterator(dir)) top.push_back(e.path().filename().string());
  std::sort(top.begin(), top.end());
  EXPECT_EQ(top, (std::vector<std::string>{"cfg.json", "run"}));
}

}  // namespace
}  // namespace nge::cli
