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

#ifndef NGE_MODEL_MODEL_H_
#define NGE_MODEL_MODEL_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "nge/diffcore/tensor.h"

namespace nge::model {

enum class GatingMode : int { kNone = 0, kDiagonal = 1, kSelective = 2 };
enum class CoreType : int { kCgru = 0, kFeedForward = 1 };

std::string_view gating_name(GatingMode mode);
GatingMode parse_gating(std::string_view name);
std::string_view core_name(CoreType core);
CoreType parse_core(std::string_view name);

inline constexpr int kRewardBits = 8;
inline constexpr int kRewardLogits = 2 * kRewardBits;

struct HyperParams {
  int state_channels = 40;
  int reward_channels = 32;
  int tile_size = 8;
  int num_actions = 4;
  int iterations = 2;
  GatingMode gating = GatingMode::kSelective;
  CoreType core = CoreType::kCgru;
  // Add the action embedding before every CGRU iteration instead of only
  // into s_0.
  bool condition_every_iteration = false;

  void validate() const;
  int patch_size() const { return tile_size * tile_size * 3; }
  bool operator==(const HyperParams&) const = default;
};

template <typename T>
struct ModelParams {
  HyperParams hyper;

  // Observation encoder: (D, D, 3, C_s) stride-D conv; action embedding
  // (A_s, C_s) without bias.
  Parameter<T> encoder_w, encoder_b, action_w;

  // CGRU: masked (3, 3, C_s, C_s) banks for update, reset and candidate.
  Parameter<T> update_w, update_b, reset_w, reset_b, candidate_w, candidate_b;

  // Selective gating only: (3, 3, C_s, 5 C_s), direction-major outputs.
  Parameter<T> select_w, select_b;

  // Feed-forward baseline core only: two (3, 3, C_s, C_s) convs.
  Parameter<T> ff1_w, ff1_b, ff2_w, ff2_b;

  // Observation decoder: (D, D, C_s, 3) transposed conv, stride D.
  Parameter<T> decoder_w, decoder_b;

  // Reward pathway.
  Parameter<T> reward_encoder_w, reward_encoder_b, reward_action_w;
  Parameter<T> reward_conv1_w, reward_conv1_b;  // 3x3 pad 1, C_r -> C_r
  Parameter<T> reward_conv2_w, reward_conv2_b;  // 1x1, C_r -> C_r/2
  Parameter<T> reward_conv3_w, reward_conv3_b;  // 1x1, C_r/2 -> C_r/4
  Parameter<T> reward_conv4_w, reward_conv4_b;  // 3x3 valid, C_r/4 -> 16

  // Visits the parameters present for this configuration in a fixed order.
  template <typename Fn>
  void for_each(Fn&& fn) {
    for_each_impl(*this, fn);
  }
  template <typename Fn>
  void for_each(Fn&& fn) const {
    for_each_impl(*this, fn);
  }

  std::vector<Parameter<T>*> parameters() {
    std::vector<Parameter<T>*> out;
    for_each([&](std::string_view, Parameter<T>& p) { out.push_back(&p); });
    return out;
  }

  size_t parameter_count() const {
    size_t n = 0;
    for_each([&](std::string_view, const Parameter<T>& p) { n += p.size(); });
    return n;
  }

  void zero_grad() {
    for_each([](std::string_view, Parameter<T>& p) { p.zero_grad(); });
  }

  template <typename U>
  ModelParams<U> cast() const;

 private:
  template <typename Self, typename Fn>
  static void for_each_impl(Self& self, Fn& fn) {
    fn("encoder.w", self.encoder_w);
    fn("encoder.b", self.encoder_b);
    fn("action.w", self.action_w);
    if (self.hyper.core == CoreType::kCgru) {
      fn("cgru.update.w", self.update_w);
      fn("cgru.update.b", self.update_b);
      fn("cgru.reset.w", self.reset_w);
      fn("cgru.reset.b", self.reset_b);
      fn("cgru.candidate.w", self.candidate_w);
      fn("cgru.candidate.b", self.candidate_b);
      if (self.hyper.gating == GatingMode::kSelective) {
        fn("cgru.select.w", self.select_w);
        fn("cgru.select.b", self.select_b);
      }
    } else {
      fn("ff.conv1.w", self.ff1_w);
      fn("ff.conv1.b", self.ff1_b);
      fn("ff.conv2.w", self.ff2_w);
      fn("ff.conv2.b", self.ff2_b);
    }
    fn("decoder.w", self.decoder_w);
    fn("decoder.b", self.decoder_b);
    fn("reward.encoder.w", self.reward_encoder_w);
    fn("reward.encoder.b", self.reward_encoder_b);
    fn("reward.action.w", self.reward_action_w);
    fn("reward.conv1.w", self.reward_conv1_w);
    fn("reward.conv1.b", self.reward_conv1_b);
    fn("reward.conv2.w", self.reward_conv2_w);
    fn("reward.conv2.b", self.reward_conv2_b);
    fn("reward.conv3.w", self.reward_conv3_w);
    fn("reward.conv3.b", self.reward_conv3_b);
    fn("reward.conv4.w", self.reward_conv4_w);
    fn("reward.conv4.b", self.reward_conv4_b);
  }
};

// Allocates every parameter for hyper with the right shapes and masks, all
// zero.
template <typename T>
ModelParams<T> make_params(const HyperParams& hyper);

// Glorot-uniform kernels, zero biases, update-gate bias +1.
template <typename T>
ModelParams<T> init_params(const HyperParams& hyper, uint64_t seed);

template <typename T>
template <typename U>
ModelParams<U> ModelParams<T>::cast() const {
  ModelParams<U> out = make_params<U>(hyper);
  std::vector<const Parameter<T>*> src;
  for_each([&](std::string_view, const Parameter<T>& p) { src.push_back(&p); });
  size_t k = 0;
  out.for_each([&](std::string_view, Parameter<U>& p) {
    p.value = src[k++]->value.template cast<U>();
    p.apply_mask();
  });
  return out;
}

}  // namespace nge::model

#endif  // NGE_MODEL_MODEL_H_
