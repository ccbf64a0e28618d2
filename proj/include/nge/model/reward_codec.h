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

#ifndef NGE_MODEL_REWARD_CODEC_H_
#define NGE_MODEL_REWARD_CODEC_H_

#include <array>
#include <string>

#include "nge/common/errors.h"
#include "nge/model/model.h"

namespace nge::model {

// Bit k of an 8-bit reward; bit k is carried by logit pair (2k, 2k+1) with
// class 1 meaning "set".
inline std::array<int, kRewardBits> encode_reward(int reward) {
  if (reward < 0 || reward > 255) throw ValidationError("reward " + std::to_string(reward) + " outside [0, 255]");
  std::array<int, kRewardBits> bits{};
  for (int k = 0; k < kRewardBits; ++k) bits[k] = (reward >> k) & 1;
  return bits;
}

inline int decode_bits(const std::array<int, kRewardBits>& bits) {
  int value = 0;
  for (int k = 0; k < kRewardBits; ++k) value |= (bits[k] ? 1 : 0) << k;
  return value;
}

// Per-pair argmax; ties resolve to class 0.
template <typename T>
std::array<int, kRewardBits> logits_to_bits(const T* logits) {
  std::array<int, kRewardBits> bits{};
  for (int k = 0; k < kRewardBits; ++k) bits[k] = logits[2 * k + 1] > logits[2 * k] ? 1 : 0;
  return bits;
}

template <typename T>
int decode_logits(const T* logits) {
  return decode_bits(logits_to_bits(logits));
}

struct RewardPrediction {
  std::array<float, kRewardLogits> logits{};
  int decoded_value = 0;
};

}  // namespace nge::model

#endif  // NGE_MODEL_REWARD_CODEC_H_
