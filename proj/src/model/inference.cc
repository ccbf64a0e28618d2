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

#include "nge/model/inference.h"

namespace nge::model {

std::vector<StepPrediction> predict_batch(const PackedParams<float>& packed, const std::vector<const Observation*>& obs,
                                          const std::vector<Action>& actions, bool with_reward) {
  if (obs.size() != actions.size()) throw ShapeError("predict_batch: one action per observation required");
  if (obs.empty()) return {};
  const int d = packed.hyper.tile_size;
  std::vector<std::pair<int, int>> extents;
  std::vector<const float*> images;
  std::vector<int> action_ids;
  for (size_t i = 0; i < obs.size(); ++i) {
    const Observation& o = *obs[i];
    if (o.width_px % d != 0 || o.height_px % d != 0 || o.tile_size != d) {
      throw ShapeError("observation is not a grid of " + std::to_string(d) + "-pixel tiles");
    }
    extents.emplace_back(o.width_px / d, o.height_px / d);
    images.push_back(o.pixels.data());
    action_ids.push_back(static_cast<int>(actions[i]));
  }
  kernels::GridLayout layout(extents);
  Matrix<float> x;
  kernels::images_to_patches(layout, images, d, x);
  StepCache<float> cache;
  StepOptions options;
  options.reward = with_reward;
  forward_step(packed, layout, std::move(x), action_ids, cache, options);

  std::vector<StepPrediction> out(obs.size());
  for (size_t i = 0; i < obs.size(); ++i) {
    const int f = static_cast<int>(i);
    Observation& o = out[i].observation;
    o = Observation(obs[i]->width_px, obs[i]->height_px, d);
    kernels::patches_to_image(layout, cache.y, f, d, o.pixels.data());
    for (float& v : o.pixels) v = std::clamp(v, 0.0f, 1.0f);
    if (with_reward) {
      for (int k = 0; k < kRewardLogits; ++k) out[i].reward.logits[k] = cache.logits(f, k);
      out[i].reward.decoded_value = decode_logits(out[i].reward.logits.data());
    }
  }
  return out;
}

StepPrediction predict_step(const Observation& obs, Action action, const ModelParams<float>& params) {
  return predict_batch(PackedParams<float>::pack(params), {&obs}, {action}).front();
}

RewardPrediction predict_reward(const Observation& obs, Action action, const ModelParams<float>& params) {
  const Tensor<float> logits = reward_logits(obs, action, params);
  RewardPrediction out;
  std::copy(logits.data.begin(), logits.data.end(), out.logits.begin());
  out.decoded_value = decode_logits(out.logits.data());
  return out;
}

std::vector<StepPrediction> rollout(const Observation& obs0, const std::vector<Action>& actions,
                                    const ModelParams<float>& params) {
  if (actions.empty()) throw ValidationError("rollout needs at least one action");
  const PackedParams<float> packed = PackedParams<float>::pack(params);
  std::vector<StepPrediction> out;
  out.reserve(actions.size());
  const Observation* current = &obs0;
  for (Action a : actions) {
    out.push_back(predict_batch(packed, {current}, {a}).front());
    current = &out.back().observation;
  }
  return out;
}

}  // namespace nge::model
