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

#ifndef NGE_TESTS_ACCEPTANCE_ACCEPTANCE_H_
#define NGE_TESTS_ACCEPTANCE_ACCEPTANCE_H_

#include <string>
#include <vector>

#include "nge/model/model.h"
#include "nge/training/training.h"

namespace nge::acceptance {

struct Outcome {
  bool pass = false;
  std::string detail;  // one line
  std::vector<std::string> notes;  // extra lines printed under the verdict
};

Outcome gradient_conformance();
Outcome receptive_field();
Outcome symmetry_commutation();
Outcome metric_oracles();
Outcome reward_codec();
Outcome level_statistics();
Outcome reproducibility();

// Trainings behind the long criteria are cached under cache_dir, keyed by a
// hash of the configuration.
struct TrainedModel {
  model::ModelParams<float> params;
  int epochs = 0;
  std::string dir;
};

TrainedModel cached_train(const training::TrainConfig& config, const std::string& label, const std::string& cache_dir);

training::TrainConfig sokoban_config();
training::TrainConfig ordering_config(const std::string& variant);
std::vector<std::string> ordering_variants();

Outcome sokoban_training(const std::string& cache_dir);
Outcome size_generalization(const std::string& cache_dir);
Outcome gating_ordering(const std::string& cache_dir);

}  // namespace nge::acceptance

#endif  // NGE_TESTS_ACCEPTANCE_ACCEPTANCE_H_
