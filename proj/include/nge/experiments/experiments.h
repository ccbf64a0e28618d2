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

#ifndef NGE_EXPERIMENTS_EXPERIMENTS_H_
#define NGE_EXPERIMENTS_EXPERIMENTS_H_

#include <functional>
#include <string>
#include <vector>

#include "nge/training/training.h"

namespace nge::experiments {

// One trained variant and the evaluation rows of its training log.
struct Curve {
  std::string label;
  training::TrainConfig config;
  std::vector<training::LogRow> evals;

  // Mean closest-tile F1 at the last evaluation.
  double final_f_t() const;
  double final_min_f_t() const;
};

using Trainer = std::function<training::TrainResult(const training::TrainConfig&)>;

// Variant labels: "none", "diagonal", "selective" (CGRU gating modes) and
// "ff" (feed-forward core).
training::TrainConfig gating_variant(const training::TrainConfig& base, const std::string& label);

// Labels "n1_pdt", "n1_nopdt", "n2_pdt", "n2_nopdt".
training::TrainConfig ablation_variant(const training::TrainConfig& base, const std::string& label);
std::vector<std::string> ablation_labels();

// Trains each variant from base with the same seeds and data. When out_dir
// is non-empty each run writes into out_dir/<label> and the curves go to
// out_dir/<csv_name>.
std::vector<Curve> gating_comparison(const training::TrainConfig& base, const std::vector<std::string>& labels,
                                     const std::string& out_dir, const Trainer& trainer = {});
std::vector<Curve> ablation_suite(const training::TrainConfig& base, const std::string& out_dir,
                                  const Trainer& trainer = {});

std::string curves_csv(const std::vector<Curve>& curves);

}  // namespace nge::experiments

#endif  // NGE_EXPERIMENTS_EXPERIMENTS_H_
