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

#include "nge/experiments/experiments.h"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "nge/common/errors.h"

namespace nge::experiments {
namespace {

std::vector<Curve> run_variants(const std::vector<training::TrainConfig>& configs,
                                const std::vector<std::string>& labels, const std::string& out_dir,
                                const std::string& csv_name, const Trainer& trainer) {
  std::vector<Curve> curves;
  for (size_t i = 0; i < configs.size(); ++i) {
    training::TrainConfig c = configs[i];
    c.out_dir = out_dir.empty() ? "" : (std::filesystem::path(out_dir) / labels[i]).string();
    const training::TrainResult result = trainer ? trainer(c) : training::train(c);
    Curve curve{labels[i], c, {}};
    for (const auto& row : result.log) {
      if (row.f_t) curve.evals.push_back(row);
    }
    curves.push_back(std::move(curve));
  }
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    std::ofstream(std::filesystem::path(out_dir) / csv_name) << curves_csv(curves);
  }
  return curves;
}

}  // namespace

double Curve::final_f_t() const { return evals.empty() ? 0.0 : *evals.back().f_t; }
double Curve::final_min_f_t() const { return evals.empty() ? 0.0 : evals.back().min_f_t.value_or(0.0); }

training::TrainConfig gating_variant(const training::TrainConfig& base, const std::string& label) {
  training::TrainConfig c = base;
  if (label == "ff") {
    c.model.core = model::CoreType::kFeedForward;
    c.model.gating = model::GatingMode::kNone;
  } else {
    c.model.core = model::CoreType::kCgru;
    c.model.gating = model::parse_gating(label);
  }
  c.validate();
  return c;
}

std::vector<std::string> ablation_labels() { return {"n1_pdt", "n1_nopdt", "n2_pdt", "n2_nopdt"}; }

training::TrainConfig ablation_variant(const training::TrainConfig& base, const std::string& label) {
  training::TrainConfig c = base;
  if (label.size() < 4 || label[0] != 'n' || label[2] != '_') throw ValidationError("unknown ablation '" + label + "'");
  c.model.iterations = label[1] - '0';
  const std::string mode = label.substr(3);
  if (c.model.iterations < 1 || c.model.iterations > 2 || (mode != "pdt" && mode != "nopdt")) {
    throw ValidationError("unknown ablation '" + label + "'");
  }
  c.pdt = mode == "pdt";
  c.validate();
  return c;
}

std::vector<Curve> gating_comparison(const training::TrainConfig& base, const std::vector<std::string>& labels,
                                     const std::string& out_dir, const Trainer& trainer) {
  std::vector<training::TrainConfig> configs;
  for (const auto& l : labels) configs.push_back(gating_variant(base, l));
  return run_variants(configs, labels, out_dir, "gating_curves.csv", trainer);
}

std::vector<Curve> ablation_suite(const training::TrainConfig& base, const std::string& out_dir,
                                  const Trainer& trainer) {
  const std::vector<std::string> labels = ablation_labels();
  std::vector<training::TrainConfig> configs;
  for (const auto& l : labels) configs.push_back(ablation_variant(base, l));
  return run_variants(configs, labels, out_dir, "ablation_curves.csv", trainer);
}

std::string curves_csv(const std::vector<Curve>& curves) {
  std::ostringstream s;
  s << std::setprecision(9) << "variant,epoch,F_t,min_F_t,E_mse,F_r\n";
  for (const auto& c : curves) {
    for (const auto& r : c.evals) {
      s << c.label << ',' << r.epoch << ',' << r.f_t.value_or(0.0) << ',' << r.min_f_t.value_or(0.0) << ','
        << r.e_mse.value_or(0.0) << ',' << r.f_r.value_or(0.0) << '\n';
    }
  }
  return s.str();
}

}  // namespace nge::experiments
