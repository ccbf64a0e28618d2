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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "nge/model/engine.h"
#include "nge/model/inference.h"
#include "nge/model/model.h"
#include "nge/model/model_io.h"
#include "nge/model/reward_codec.h"
#include "gradient_check.h"
#include "test_util.h"

namespace nge::model {
namespace {

using kernels::GridLayout;
using testing::random_observation;
using testing::randomize;
using testing::relative_error;
using testing::small_hyper;

constexpr GatingMode kModes[] = {GatingMode::kNone, GatingMode::kDiagonal, GatingMode::kSelective};

Matrix<double> patches_of(const GridLayout& layout, const std::vector<Observation>& obs, int tile) {
  std::vector<const float*> images;
  for (const auto& o : obs) images.push_back(o.pixels.data());
  Matrix<double> x;
  kernels::images_to_patches(layout, images, tile, x);
  return x;
}

TEST(EngineTest, MatchesReferenceOps) {
  for (GatingMode mode : kModes) {
    for (CoreType core : {CoreType::kCgru, CoreType::kFeedForward}) {
      for (bool every : {false, true}) {
        if (core == CoreType::kFeedForward && (mode != GatingMode::kNone || every)) continue;
        HyperParams h = small_hyper(mode, core);
        h.condition_every_iteration = every;
        Rng rng(11);
        ModelParams<double> params = init_params<double>(h, 3);
        randomize(params, rng, 0.6);
        std::vector<Observation> obs = {random_observation(5, 4, 2, rng), random_observation(3, 6, 2, rng)};
        const std::vector<Action> actions = {Action::kLeft, Action::kDown};
        GridLayout layout({{5, 4}, {3, 6}});
        StepCache<double> cache;
        forward_step(PackedParams<double>::pack(params), layout, patches_of(layout, obs, 2), {2, 1}, cache);
        for (int f = 0; f < 2; ++f) {
          const Tensor<double> ref = reference_next_frame(obs[f], actions[f], params);
          std::vector<float> img(ref.size());
          std::vector<double> got(ref.size());
          Matrix<double> y = cache.y;
          const int h_px = layout.height(f) * 2;
          for (int local = 0; local < layout.cells(f); ++local) {
            const int w = local / layout.height(f), hh = local % layout.height(f);
            for (int a = 0; a < 2; ++a) {
              for (int k = 0; k < 6; ++k) {
                got[(static_cast<size_t>(w * 2 + a) * h_px + hh * 2) * 3 + k] = y(layout.begin(f) + local, a * 6 + k);
              }
            }
          }
          for (size_t i = 0; i < ref.size(); ++i) ASSERT_NEAR(got[i], ref[i], 1e-12) << gating_name(mode);
          const Tensor<double> logits = reward_logits(obs[f], actions[f], params);
          for (int k = 0; k < kRewardLogits; ++k) ASSERT_NEAR(cache.logits(f, k), logits[k], 1e-12);
        }
      }
    }
  }
}

void check_gradients(const HyperParams& h, uint64_t seed) {
  const testing::GradientCheck r = testing::engine_gradient_check(h, seed);
  EXPECT_TRUE(r.saturation_exercised || h.core != CoreType::kCgru) << "saturation branch not exercised";
  EXPECT_FALSE(r.masked_gradient_nonzero);
  EXPECT_LT(r.worst, 1e-5) << "worst at " << r.where;
  EXPECT_LT(r.on_kink * 100, r.checked) << "too many entries sit on a kink";
}

TEST(EngineTest, GradientsMatchFiniteDifferences) {
  for (GatingMode mode : kModes) {
    SCOPED_TRACE(std::string(gating_name(mode)));
    check_gradients(small_hyper(mode), 21);
  }
}

TEST(EngineTest, FeedForwardAndConditionEveryIterationGradients) {
  check_gradients(small_hyper(GatingMode::kNone, CoreType::kFeedForward), 5);
  HyperParams h = small_hyper(GatingMode::kSelective);
  h.condition_every_iteration = true;
  h.iterations = 3;
  check_gradients(h, 8);
}

}  // namespace
}  // namespace nge::model
