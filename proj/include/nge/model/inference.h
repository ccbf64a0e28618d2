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

#ifndef NGE_MODEL_INFERENCE_H_
#define NGE_MODEL_INFERENCE_H_

// Single-frame model API. The tensor-level functions are direct
// compositions of the serial reference ops and serve as the readable
// definition of the model; predict_step, predict_batch and rollout run the
// batched engine.

#include <vector>

#include "nge/diffcore/reference_ops.h"
#include "nge/gridworld/gridworld.h"
#include "nge/model/engine.h"
#include "nge/model/model.h"
#include "nge/model/reward_codec.h"

namespace nge::model {

using gridworld::Action;
using gridworld::Observation;

template <typename T>
Tensor<T> observation_tensor(const Observation& obs) {
  Tensor<T> t({obs.width_px, obs.height_px, 3});
  t.data.assign(obs.pixels.begin(), obs.pixels.end());
  return t;
}

// Clamps to [0, 1].
template <typename T>
Observation tensor_observation(const Tensor<T>& t, int tile_size) {
  Observation obs(t.dim(0), t.dim(1), tile_size);
  for (size_t i = 0; i < t.size(); ++i) {
    obs.pixels[i] = static_cast<float>(std::clamp(t[i], T(0), T(1)));
  }
  return obs;
}

template <typename T>
void check_extents(const Observation& obs, const ModelParams<T>& params) {
  const int d = params.hyper.tile_size;
  if (obs.width_px % d != 0 || obs.height_px % d != 0 || obs.width_px == 0 || obs.height_px == 0) {
    throw ShapeError("observation extents " + std::to_string(obs.width_px) + "x" + std::to_string(obs.height_px) +
                     " are not positive multiples of the tile size " + std::to_string(d));
  }
}

template <typename T>
Tensor<T> encode_observation(const Observation& obs, const ModelParams<T>& params) {
  check_extents(obs, params);
  return reference::conv2d(observation_tensor<T>(obs), params.encoder_w.value, params.encoder_b.value,
                           params.hyper.tile_size, 0);
}

template <typename T>
Tensor<T> add_action_embedding(const Tensor<T>& latent, const Tensor<T>& embed, Action action) {
  const int a = static_cast<int>(action);
  const int c = latent.dim(2);
  if (a < 0 || a >= embed.dim(0)) throw ValidationError("invalid action id " + std::to_string(a));
  Tensor<T> out = latent;
  for (size_t i = 0; i < out.size(); ++i) out[i] += embed.data[static_cast<size_t>(a) * c + i % c];
  return out;
}

template <typename T>
Tensor<T> condition_action(const Tensor<T>& latent, Action action, const ModelParams<T>& params) {
  return add_action_embedding(latent, params.action_w.value, action);
}

// out(w, h, c) = s(w + dw, h + dh, c) for c in [c0, c1), zero outside.
template <typename T>
void shift_channels(const Tensor<T>& s, int dw, int dh, int c0, int c1, Tensor<T>& out) {
  const int w_n = s.dim(0), h_n = s.dim(1);
  for (int w = 0; w < w_n; ++w) {
    for (int h = 0; h < h_n; ++h) {
      const bool inside = w + dw >= 0 && w + dw < w_n && h + dh >= 0 && h + dh < h_n;
      for (int c = c0; c < c1; ++c) out.at(w, h, c) = inside ? s.at(w + dw, h + dh, c) : T(0);
    }
  }
}

// Shift operators M_u, M_d, M_l, M_r: M_u moves content one cell up.
template <typename T>
Tensor<T> shift_up(const Tensor<T>& s) {
  Tensor<T> out(s.shape);
  shift_channels(s, 0, 1, 0, s.dim(2), out);
  return out;
}
template <typename T>
Tensor<T> shift_down(const Tensor<T>& s) {
  Tensor<T> out(s.shape);
  shift_channels(s, 0, -1, 0, s.dim(2), out);
  return out;
}
template <typename T>
Tensor<T> shift_left(const Tensor<T>& s) {
  Tensor<T> out(s.shape);
  shift_channels(s, 1, 0, 0, s.dim(2), out);
  return out;
}
template <typename T>
Tensor<T> shift_right(const Tensor<T>& s) {
  Tensor<T> out(s.shape);
  shift_channels(s, -1, 0, 0, s.dim(2), out);
  return out;
}

// Five contiguous channel groups moved up, right, down, left and kept.
template <typename T>
Tensor<T> diag_gate_2d(const Tensor<T>& s) {
  const int c = s.dim(2);
  if (c % 5 != 0)
    throw ValidationError("diagonal gating needs a channel count divisible by 5, got " + std::to_string(c));
  const int g = c / 5;
  Tensor<T> out(s.shape);
  shift_channels(s, 0, 1, 0, g, out);
  shift_channels(s, -1, 0, g, 2 * g, out);
  shift_channels(s, 0, -1, 2 * g, 3 * g, out);
  shift_channels(s, 1, 0, 3 * g, 4 * g, out);
  shift_channels(s, 0, 0, 4 * g, 5 * g, out);
  return out;
}

// Selection tensor (W, H, C, 5) over directions [up, down, left, right,
// centre], softmax-normalized over the last axis.
template <typename T>
Tensor<T> selection_tensor(const Tensor<T>& s, const ModelParams<T>& params) {
  const Tensor<T> z = reference::conv2d(s, params.select_w.value, params.select_b.value, 1, 1);
  const int w_n = s.dim(0), h_n = s.dim(1), c = s.dim(2);
  Tensor<T> logits({w_n, h_n, c, 5});
  for (int w = 0; w < w_n; ++w) {
    for (int h = 0; h < h_n; ++h) {
      for (int d = 0; d < 5; ++d) {
        for (int ch = 0; ch < c; ++ch) logits.at(w, h, ch, d) = z.at(w, h, d * c + ch);
      }
    }
  }
  return reference::softmax(logits, 3);
}

template <typename T>
Tensor<T> selective_gate(const Tensor<T>& s, const Tensor<T>& selection) {
  if (selection.rank() != 4 || selection.dim(3) != 5 || selection.dim(0) != s.dim(0) ||
      selection.dim(1) != s.dim(1) || selection.dim(2) != s.dim(2)) {
    throw ShapeError("selection tensor shape " + shape_string(selection) + " does not match state " +
                     shape_string(s));
  }
  const Tensor<T> candidates[5] = {shift_up(s), shift_down(s), shift_left(s), shift_right(s), s};
  Tensor<T> out(s.shape);
  for (size_t i = 0; i < s.size(); ++i) {
    T acc = 0;
    for (int d = 0; d < 5; ++d) acc += selection.data[i * 5 + d] * candidates[d][i];
    out[i] = acc;
  }
  return out;
}

template <typename T>
struct CgruStepOptions {
  bool force_update_one = false;            // u := 1 everywhere
  const Tensor<T>* selection = nullptr;     // overrides the learned selection
  SaturationAccumulator* saturation = nullptr;
};

template <typename T>
Tensor<T> cgru_step(const Tensor<T>& s, const ModelParams<T>& params, const CgruStepOptions<T>& options = {}) {
  if (params.hyper.core != CoreType::kCgru) throw ValidationError("cgru_step on a feed-forward model");
  if (s.rank() != 3 || s.dim(2) != params.hyper.state_channels) throw ShapeError("cgru_step: state shape mismatch");
  Tensor<T> u = reference::hard_sigmoid(reference::conv2d(s, params.update_w.value, params.update_b.value, 1, 1),
                                        options.saturation);
  const Tensor<T> r = reference::hard_sigmoid(
      reference::conv2d(s, params.reset_w.value, params.reset_b.value, 1, 1), options.saturation);
  Tensor<T> rs(s.shape);
  for (size_t i = 0; i < s.size(); ++i) rs[i] = r[i] * s[i];
  const Tensor<T> c = reference::hard_tanh(
      reference::conv2d(rs, params.candidate_w.value, params.candidate_b.value, 1, 1), options.saturation);
  if (options.force_update_one) u.fill(T(1));
  Tensor<T> gated;
  switch (params.hyper.gating) {
    case GatingMode::kNone:
      gated = s;
      break;
    case GatingMode::kDiagonal:
      gated = diag_gate_2d(s);
      break;
    case GatingMode::kSelective:
      gated = options.selection ? selective_gate(s, *options.selection)
                                : selective_gate(s, selection_tensor(s, params));
      break;
  }
  Tensor<T> out(s.shape);
  for (size_t i = 0; i < s.size(); ++i) out[i] = u[i] * gated[i] + (T(1) - u[i]) * c[i];
  return out;
}

// Baseline core: two 3x3 convolutions with a rectifier in between.
template <typename T>
Tensor<T> ff_core_step(const Tensor<T>& s, const ModelParams<T>& params) {
  if (params.hyper.core != CoreType::kFeedForward) throw ValidationError("ff_core_step on a CGRU model");
  const Tensor<T> h = reference::relu(reference::conv2d(s, params.ff1_w.value, params.ff1_b.value, 1, 1));
  return reference::conv2d(h, params.ff2_w.value, params.ff2_b.value, 1, 1);
}

// Raw decoder output (W*D, H*D, 3), not clamped.
template <typename T>
Tensor<T> decode_observation(const Tensor<T>& s, const ModelParams<T>& params) {
  return reference::conv2d_transpose(s, params.decoder_w.value, params.decoder_b.value, params.hyper.tile_size);
}

template <typename T>
Tensor<T> reward_logits(const Observation& obs, Action action, const ModelParams<T>& params) {
  check_extents(obs, params);
  using reference::conv2d;
  using reference::relu;
  Tensor<T> x = conv2d(observation_tensor<T>(obs), params.reward_encoder_w.value, params.reward_encoder_b.value,
                       params.hyper.tile_size, 0);
  x = add_action_embedding(x, params.reward_action_w.value, action);
  x = relu(conv2d(x, params.reward_conv1_w.value, params.reward_conv1_b.value, 1, 1));
  x = relu(conv2d(x, params.reward_conv2_w.value, params.reward_conv2_b.value, 1, 0));
  x = relu(conv2d(x, params.reward_conv3_w.value, params.reward_conv3_b.value, 1, 0));
  x = conv2d(x, params.reward_conv4_w.value, params.reward_conv4_b.value, 1, 0);
  Tensor<T> logits({kRewardLogits});
  for (int k = 0; k < kRewardLogits; ++k) {
    T best = x.at(0, 0, k);
    for (int w = 0; w < x.dim(0); ++w) {
      for (int h = 0; h < x.dim(1); ++h) best = std::max(best, x.at(w, h, k));
    }
    logits[k] = best;
  }
  return logits;
}

// Full tick through the reference ops: returns the raw decoded frame.
template <typename T>
Tensor<T> reference_next_frame(const Observation& obs, Action action, const ModelParams<T>& params,
                               SaturationAccumulator* saturation = nullptr) {
  Tensor<T> s = condition_action(encode_observation(obs, params), action, params);
  if (params.hyper.core == CoreType::kFeedForward) {
    s = ff_core_step(s, params);
  } else {
    CgruStepOptions<T> options;
    options.saturation = saturation;
    for (int i = 0; i < params.hyper.iterations; ++i) {
      if (i > 0 && params.hyper.condition_every_iteration) s = condition_action(s, action, params);
      s = cgru_step(s, params, options);
    }
  }
  return decode_observation(s, params);
}

struct StepPrediction {
  Observation observation;  // clamped to [0, 1]
  RewardPrediction reward;
};

RewardPrediction predict_reward(const Observation& obs, Action action, const ModelParams<float>& params);
StepPrediction predict_step(const Observation& obs, Action action, const ModelParams<float>& params);

// One engine tick for several independent frames at once.
std::vector<StepPrediction> predict_batch(const PackedParams<float>& packed, const std::vector<const Observation*>& obs,
                                          const std::vector<Action>& actions, bool with_reward = true);

// Closed loop: every clamped prediction is the next input.
std::vector<StepPrediction> rollout(const Observation& obs0, const std::vector<Action>& actions,
                                    const ModelParams<float>& params);

}  // namespace nge::model

#endif  // NGE_MODEL_INFERENCE_H_
