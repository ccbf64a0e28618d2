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

#ifndef NGE_CLI_COMMANDS_H_
#define NGE_CLI_COMMANDS_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace nge::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kValidation = 2, kRuntime = 3 };

struct CommandOptions {
  std::string config;
  std::string model;
  std::string game = "sokoban";
  std::vector<std::string> levels;
  int steps = 100;
  int repeats = 3;
  std::optional<uint64_t> seed;
  std::string out;
  std::string engine = "learned";
  int count = 10;
  int min_size = 6;
  int max_size = 12;
  std::vector<std::string> sizes = {"20x20", "30x30"};
  std::vector<std::string> variants = {"none", "diagonal", "selective", "ff"};
  bool color = true;
  bool game_given = false;  // --game overrides the config file
};

// Each command writes files only under options.out and prints progress and
// summaries to out. Errors propagate as exceptions; run_cli maps them to
// exit codes.
int cmd_train(const CommandOptions& options, std::ostream& out);
int cmd_eval(const CommandOptions& options, std::ostream& out);
int cmd_generate(const CommandOptions& options, std::ostream& out);
int cmd_compare(const CommandOptions& options, std::ostream& out);
int cmd_ablate(const CommandOptions& options, std::ostream& out);
int cmd_generalize(const CommandOptions& options, std::ostream& out);
int cmd_inspect(const CommandOptions& options, std::ostream& out);
// Reads keys from in: arrow-key escape sequences move, q or end of input
// quits.
int cmd_play(const CommandOptions& options, std::istream& in, std::ostream& out);

// Parses argv (argv[0] is the program name) and runs one subcommand.
int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace nge::cli

#endif  // NGE_CLI_COMMANDS_H_
