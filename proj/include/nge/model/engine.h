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

#ifndef NGE_MODEL_ENGINE_H_
#define NGE_MODEL_ENGINE_H_

// Batched forward and backward pass of one engine tick over many frames at
// once. Frames may have different grid sizes; see kernels::GridLayout. All
// per-cell tensors are (cells x channels) row-major matrices.

#include <vector>

#include "nge/diffcore/kernels.h"
#include "nge/model/model.h"

namespace nge::model {

template <typename T>
using Matrix = kernels::Matrix<T>;
template <typename T>
using RowVector = kernels::RowVector<T>;

// Weights repacked into GEMM-ready matrices. The same struct holds
// gradients during backward.
template <typename T>
struct PackedParams {
  HyperParams hyper;
  Matrix<T> enc_w, act_w;  // (P, C), (A, C)
  RowVector<T> enc_b;
  Matrix<T> ur_w;          // (5C, 2C): update | reset
  RowVector<T> ur_b;
  Matrix<T> cand_w;        // (5C, C)
  RowVector<T> cand_b;
  Matrix<T> sel_w;         // (9C, 5C)
  RowVector<T> sel_b;
  Matrix<T> ff1_w, ff2_w;  // (9C, C)
  RowVector<T> ff1_b, ff2_b;
  Matrix<T> dec_w;         // (C, P)
  RowVector<T> dec_b;      // (P): per-channel bias repeated per patch pixel
  Matrix<T> renc_w, ract_w;
  RowVector<T> renc_b;
  Matrix<T> rc1_w, rc2_w, rc3_w, rc4_w;
  RowVector<T> rc1_b, rc2_b, rc3_b, rc4_b;

  static PackedParams pack(const ModelParams<T>& params);
  PackedParams zeros_like() const;
  // Adds these (gradient) matrices into params' grad tensors.
  void unpack_grad_add(ModelParams<T>& params) const;
};

struct StepOptions {
  bool reward = true;
  double sat_limit = 0.99;
};

template <typename T>
struct IterationCache {
  Matrix<T> s_in;   // state entering the iteration
  Matrix<T> col;    // 5- or 9-tap im2col of s_in
  Matrix<T> z_ur;   // update/reset pre-activations
  Matrix<T> ur;     // u | r
  Matrix<T> rs_col; // 5-tap im2col of r * s
  Matrix<T> z_c;
  Matrix<T> c;
  Matrix<T> sel;    // softmax selection, direction-major (selective only)
  Matrix<T> gated;  // s~
};

template <typename T>
struct StepCache {
  kernels::GridLayout layout;
  std::vector<int> actions;
  Matrix<T> x;                       // input patches (N, P)
  std::vector<IterationCache<T>> iters;
  Matrix<T> ff_col1, ff_h1, ff_col2; // feed-forward core
  Matrix<T> s_n;
  Matrix<T> y;                       // decoded patches (N, P), unclamped
  std::vector<double> sat_sum;       // per frame: summed saturation terms
  std::vector<double> sat_count;     // per frame: number of activations

  bool has_reward = false;
  Matrix<T> r_col0, r1, r2, r3, r_int;
  Matrix<T> logits;                  // (F, 16)
  std::vector<int> argmax;           // (F * 16) rows of r_int

  // Per-frame mean saturation term (0 when the core has no hard units).
  double frame_saturation(int f) const {
    return sat_count[f] > 0 ? sat_sum[f] / sat_count[f] : 0.0;
  }
};

// Runs one tick for every frame of layout. x holds input patches, one row
// per cell; actions holds one action index per frame.
template <typename T>
void forward_step(const PackedParams<T>& p, const kernels::GridLayout& layout, Matrix<T> x,
                  const std::vector<int>& actions, StepCache<T>& cache, const StepOptions& options = {});

// Accumulates parameter gradients into grads. d_y is dLoss/dy; d_logits is
// dLoss/dlogits (ignored when the cache has no reward); sat_scale[f] is
// dLoss/d(sat_sum[f]). When d_x is non-null it receives dLoss/dx through the
// pixel path only.
template <typename T>
void backward_step(const PackedParams<T>& p, const StepCache<T>& cache, const Matrix<T>& d_y,
                   const Matrix<T>* d_logits, const std::vector<double>& sat_scale, double sat_limit,
                   PackedParams<T>& grads, Matrix<T>* d_x);

// Tap read by each selective-gate direction [up, down, left, right, centre]
// and by each diagonal-gate channel group [up, right, down, left, identity].
inline constexpr int kSelectTap[5] = {kernels::kDown, kernels::kUp, kernels::kRight, kernels::kLeft,
                                      kernels::kCenter};
inline constexpr int kDiagonalTap[5] = {kernels::kDown, kernels::kLeft, kernels::kUp, kernels::kRight,
                                        kernels::kCenter};

}  // namespace nge::model

#endif  // NGE_MODEL_ENGINE_H_
