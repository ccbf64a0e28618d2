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

#include <chrono>
#include <cstdio>
#include <exception>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "acceptance.h"
#include "nge/common/parallel.h"

namespace {

using nge::acceptance::Outcome;

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance suite"};
  std::string cache_dir = "acceptance_cache";
  std::vector<int> only;
  bool train_only = false;
  app.add_option("--cache-dir", cache_dir, "Directory of cached training runs");
  app.add_option("--only", only, "Run only these criteria")->delimiter(',');
  app.add_flag("--train-only", train_only, "Run the cached trainings and exit");
  CLI11_PARSE(app, argc, argv);
  nge::worker_threads();

  namespace acc = nge::acceptance;
  if (train_only) {
    acc::cached_train(acc::sokoban_config(), "sokoban", cache_dir);
    for (const std::string& v : acc::ordering_variants()) acc::cached_train(acc::ordering_config(v), v, cache_dir);
    return 0;
  }

  const std::vector<Criterion> criteria = {
      {1, "gradient conformance", acc::gradient_conformance},
      {2, "receptive field", acc::receptive_field},
      {3, "symmetry-oracle commutation", acc::symmetry_commutation},
      {4, "desk-scale sokoban training", [&] { return acc::sokoban_training(cache_dir); }},
      {5, "size generalization", [&] { return acc::size_generalization(cache_dir); }},
      {6, "gating ordering", [&] { return acc::gating_ordering(cache_dir); }},
      {7, "metric oracle equivalence", acc::metric_oracles},
      {8, "reward codec", acc::reward_codec},
      {9, "reproducibility", acc::reproducibility},
      {10, "level generator statistics", acc::level_statistics},
  };
  const std::set<int> selected(only.begin(), only.end());
  int failed = 0;
  for (const Criterion& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("error: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %2d %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    for (const std::string& n : o.notes) std::printf("       %s\n", n.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d of %zu criteria failed\n", failed, selected.empty() ? criteria.size() : selected.size());
  return failed == 0 ? 0 : 1;
}
