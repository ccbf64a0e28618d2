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

#include "nge/model/model.h"

#include <cmath>

#include "nge/common/errors.h"
#include "nge/common/rng.h"

namespace nge::model {

std::string_view gating_name(GatingMode mode) {
  switch (mode) {
    case GatingMode::kNone:
      return "none";
    case GatingMode::kDiagonal:
      return "diagonal";
    case GatingMode::kSelective:
      return "selective";
  }
  return "?";
}

GatingMode parse_gating(std::string_view name) {
  if (name == "none") return GatingMode::kNone;
  if (name == "diagonal") return GatingMode::kDiagonal;
  if (name == "selective") return GatingMode::kSelective;
  throw ValidationError("unknown gating mode '" + std::string(name) + "'");
}

std::string_view core_name(CoreType core) { return core == CoreType::kCgru ? "cgru" : "ff"; }

CoreType parse_core(std::string_view name) {
  if (name == "cgru") return CoreType::kCgru;
  if (name == "ff") return CoreType::kFeedForward;
  throw ValidationError("unknown core '" + std::string(name) + "'");
}

void HyperParams::validate() const {
  if (state_channels < 1 || reward_channels < 4 || tile_size < 1 || num_actions < 1 || iterations < 1) {
    throw ValidationError("hyperparameters must be positive (reward_channels >= 4, iterations >= 1)");
  }
  if (core == CoreType::kCgru && gating == GatingMode::kDiagonal && state_channels % 5 != 0) {
    throw ValidationError("diagonal gating needs state_channels divisible by 5");
  }
  if (reward_channels % 4 != 0) throw ValidationError("reward_channels must be divisible by 4");
}

template <typename T>
ModelParams<T> make_params(const HyperParams& hyper) {
  hyper.validate();
  const int c = hyper.state_channels, cr = hyper.reward_channels, d = hyper.tile_size, a = hyper.num_actions;
  ModelParams<T> p;
  p.hyper = hyper;
  p.encoder_w = Parameter<T>({d, d, 3, c});
  p.encoder_b = Parameter<T>({c});
  p.action_w = Parameter<T>({a, c});
  if (hyper.core == CoreType::kCgru) {
    for (auto* w : {&p.update_w, &p.reset_w, &p.candidate_w}) {
      *w = Parameter<T>({3, 3, c, c});
      w->set_mask(adjacency_mask<T>(c, c));
    }
    for (auto* b : {&p.update_b, &p.reset_b, &p.candidate_b}) *b = Parameter<T>({c});
    if (hyper.gating == GatingMode::kSelective) {
      p.select_w = Parameter<T>({3, 3, c, 5 * c});
      p.select_b = Parameter<T>({5 * c});
    }
  } else {
    p.ff1_w = Parameter<T>({3, 3, c, c});
    p.ff1_b = Parameter<T>({c});
    p.ff2_w = Parameter<T>({3, 3, c, c});
    p.ff2_b = Parameter<T>({c});
  }
  p.decoder_w = Parameter<T>({d, d, c, 3});
  p.decoder_b = Parameter<T>({3});
  p.reward_encoder_w = Parameter<T>({d, d, 3, cr});
  p.reward_encoder_b = Parameter<T>({cr});
  p.reward_action_w = Parameter<T>({a, cr});
  p.reward_conv1_w = Parameter<T>({3, 3, cr, cr});
  p.reward_conv1_b = Parameter<T>({cr});
  p.reward_conv2_w = Parameter<T>({1, 1, cr, cr / 2});
  p.reward_conv2_b = Parameter<T>({cr / 2});
  p.reward_conv3_w = Parameter<T>({1, 1, cr / 2, cr / 4});
  p.reward_conv3_b = Parameter<T>({cr / 4});
  p.reward_conv4_w = Parameter<T>({3, 3, cr / 4, kRewardLogits});
  p.reward_conv4_b = Parameter<T>({kRewardLogits});
  return p;
}

template <typename T>
ModelParams<T> init_params(const HyperParams& hyper, uint64_t seed) {
  ModelParams<T> p = make_params<T>(hyper);
  Rng rng(seed);
  p.for_each([&](std::string_view name, Parameter<T>& param) {
    const auto& s = param.value.shape;
    if (s.size() == 1) return;  // biases start at zero
    double fan_in, fan_out;
    if (s.size() == 2) {
      fan_in = s[0];
      fan_out = s[1];
    } else {
      // Masked banks only see the five edge-adjacent taps.
      const double taps = param.mask ? 5.0 : static_cast<double>(s[0]) * s[1];
      fan_in = taps * s[2];
      fan_out = taps * s[3];
    }
    const double bound = std::sqrt(6.0 / (fan_in + fan_out));
    for (auto& v : param.value.data) v = static_cast<T>(rng.uniform(-bound, bound));
    param.apply_mask();
    (void)name;
  });
  if (hyper.core == CoreType::kCgru) p.update_b.value.fill(T(1));
  return p;
}

template ModelParams<float> make_params<float>(const HyperParams&);
template ModelParams<double> make_params<double>(const HyperParams&);
template ModelParams<float> init_params<float>(const HyperParams&, uint64_t);
template ModelParams<double> init_params<double>(const HyperParams&, uint64_t);

}  // namespace nge::model
