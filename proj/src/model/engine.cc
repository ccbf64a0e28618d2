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

#include "nge/model/engine.h"

#include <cmath>

#include "nge/common/errors.h"
#include "nge/diffcore/saturation.h"

namespace nge::model {
namespace {

using kernels::GridLayout;

template <typename T>
void add_action_rows(const GridLayout& layout, const Matrix<T>& act_w, const std::vector<int>& actions,
                     Matrix<T>& s) {
  for (int f = 0; f < layout.num_frames(); ++f) {
    s.middleRows(layout.begin(f), layout.cells(f)).rowwise() += act_w.row(actions[f]);
  }
}

template <typename T>
void action_rows_backward(const GridLayout& layout, const Matrix<T>& ds, const std::vector<int>& actions,
                          Matrix<T>& act_grad) {
  for (int f = 0; f < layout.num_frames(); ++f) {
    act_grad.row(actions[f]) += ds.middleRows(layout.begin(f), layout.cells(f)).colwise().sum();
  }
}

template <typename T, typename In>
void affine(const In& in, const Matrix<T>& w, const RowVector<T>& b, Matrix<T>& out) {
  out.noalias() = in * w;
  out.rowwise() += b;
}

template <typename T>
void relu_inplace(Matrix<T>& m) {
  m = m.cwiseMax(T(0));
}

template <typename T>
Matrix<T> relu_mask(const Matrix<T>& d, const Matrix<T>& post) {
  return (post.array() > T(0)).select(d, T(0));
}

// out = act(z); saturation terms are summed per frame.
template <typename T>
void hard_activate(const GridLayout& layout, const Matrix<T>& z, bool is_tanh, double limit, Matrix<T>& out,
                   std::vector<double>& sat_sum, std::vector<double>& sat_count) {
  out.resize(z.rows(), z.cols());
  const Eigen::Index cols = z.cols();
  const T* zp = z.data();
  T* op = out.data();
  for (int f = 0; f < layout.num_frames(); ++f) {
    const Eigen::Index lo = layout.begin(f) * cols, hi = (layout.begin(f) + layout.cells(f)) * cols;
    double acc = 0.0;
#pragma omp parallel for reduction(+ : acc) schedule(static)
    for (Eigen::Index i = lo; i < hi; ++i) {
      if (is_tanh) {
        op[i] = hard_tanh_value(zp[i]);
        acc += static_cast<double>(tanh_saturation(zp[i], limit));
      } else {
        op[i] = hard_sigmoid_value(zp[i]);
        acc += static_cast<double>(sigmoid_saturation(zp[i], limit));
      }
    }
    sat_sum[f] += acc;
    sat_count[f] += static_cast<double>(hi - lo);
  }
}

// dz = d_out * act'(z) + sat_scale[f] * saturation'(z).
template <typename T>
void hard_activate_backward(const GridLayout& layout, const Matrix<T>& z, const Matrix<T>& d_out, bool is_tanh,
                            double limit, const std::vector<double>& sat_scale, Matrix<T>& dz) {
  dz.resize(z.rows(), z.cols());
  const Eigen::Index cols = z.cols();
  const T* zp = z.data();
  const T* gp = d_out.data();
  T* dp = dz.data();
  for (int f = 0; f < layout.num_frames(); ++f) {
    const Eigen::Index lo = layout.begin(f) * cols, hi = (layout.begin(f) + layout.cells(f)) * cols;
    const T scale = static_cast<T>(sat_scale[f]);
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = lo; i < hi; ++i) {
      if (is_tanh) {
        dp[i] = gp[i] * hard_tanh_derivative(zp[i]);
        if (scale != T(0)) dp[i] += scale * tanh_saturation_derivative(zp[i], limit);
      } else {
        dp[i] = gp[i] * hard_sigmoid_derivative(zp[i]);
        if (scale != T(0)) dp[i] += scale * sigmoid_saturation_derivative(zp[i], limit);
      }
    }
  }
}

template <typename T>
void cgru_forward(const PackedParams<T>& p, const GridLayout& layout, double limit, Matrix<T>& s,
                  IterationCache<T>& it, std::vector<double>& sat_sum, std::vector<double>& sat_count) {
  const int c = p.hyper.state_channels;
  const GatingMode gating = p.hyper.gating;
  const int taps = gating == GatingMode::kSelective ? kernels::kAllTaps : kernels::kMaskedTaps;
  const int n = layout.num_cells();

  it.s_in = s;
  kernels::gather_taps(layout, it.s_in, taps, it.col);
  affine(it.col.leftCols(kernels::kMaskedTaps * c), p.ur_w, p.ur_b, it.z_ur);
  hard_activate(layout, it.z_ur, false, limit, it.ur, sat_sum, sat_count);

  Matrix<T> rs = it.ur.rightCols(c).cwiseProduct(it.s_in);
  kernels::gather_taps(layout, rs, kernels::kMaskedTaps, it.rs_col);
  affine(it.rs_col, p.cand_w, p.cand_b, it.z_c);
  hard_activate(layout, it.z_c, true, limit, it.c, sat_sum, sat_count);

  if (gating == GatingMode::kDiagonal) {
    const int group = c / 5;
    it.gated.resize(n, c);
    for (int k = 0; k < 5; ++k)
      kernels::shift_from(layout, it.s_in, kDiagonalTap[k], k * group, (k + 1) * group, it.gated);
  } else if (gating == GatingMode::kSelective) {
    affine(it.col, p.sel_w, p.sel_b, it.sel);
    it.gated.resize(n, c);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
      T* sel = it.sel.row(i).data();
      const T* col = it.col.row(i).data();
      T* out = it.gated.row(i).data();
      for (int ch = 0; ch < c; ++ch) {
        T mx = sel[ch];
        for (int d = 1; d < 5; ++d) mx = std::max(mx, sel[d * c + ch]);
        T total = 0;
        for (int d = 0; d < 5; ++d) {
          sel[d * c + ch] = std::exp(sel[d * c + ch] - mx);
          total += sel[d * c + ch];
        }
        T acc = 0;
        for (int d = 0; d < 5; ++d) {
          sel[d * c + ch] /= total;
          acc += sel[d * c + ch] * col[kSelectTap[d] * c + ch];
        }
        out[ch] = acc;
      }
    }
  }
  const Matrix<T>& g = gating == GatingMode::kNone ? it.s_in : it.gated;
  s = it.ur.leftCols(c).cwiseProduct(g - it.c) + it.c;
}

// Returns dLoss/ds_in given dLoss/ds_out.
template <typename T>
Matrix<T> cgru_backward(const PackedParams<T>& p, const GridLayout& layout, double limit,
                        const std::vector<double>& sat_scale, const IterationCache<T>& it, const Matrix<T>& ds,
                        PackedParams<T>& grads) {
  const int c = p.hyper.state_channels;
  const GatingMode gating = p.hyper.gating;
  const int taps = gating == GatingMode::kSelective ? kernels::kAllTaps : kernels::kMaskedTaps;
  const int n = layout.num_cells();
  const Matrix<T>& g = gating == GatingMode::kNone ? it.s_in : it.gated;
  const auto u = it.ur.leftCols(c);
  const auto r = it.ur.rightCols(c);

  Matrix<T> dg = ds.cwiseProduct(u);
  Matrix<T> dc = ds - dg;
  Matrix<T> d_ur(n, 2 * c);
  d_ur.leftCols(c) = ds.cwiseProduct(g - it.c);

  Matrix<T> dz_c;
  hard_activate_backward(layout, it.z_c, dc, true, limit, sat_scale, dz_c);
  grads.cand_w.noalias() += it.rs_col.transpose() * dz_c;
  grads.cand_b += dz_c.colwise().sum();
  Matrix<T> d_rs_col = dz_c * p.cand_w.transpose();
  Matrix<T> d_rs = Matrix<T>::Zero(n, c);
  kernels::scatter_taps_add(layout, d_rs_col, kernels::kMaskedTaps, d_rs);

  Matrix<T> d_in = d_rs.cwiseProduct(r);
  d_ur.rightCols(c) = d_rs.cwiseProduct(it.s_in);
  Matrix<T> dz_ur;
  hard_activate_backward(layout, it.z_ur, d_ur, false, limit, sat_scale, dz_ur);
  grads.ur_w.noalias() += it.col.leftCols(kernels::kMaskedTaps * c).transpose() * dz_ur;
  grads.ur_b += dz_ur.colwise().sum();

  Matrix<T> d_col = Matrix<T>::Zero(n, static_cast<Eigen::Index>(taps) * c);
  d_col.leftCols(kernels::kMaskedTaps * c).noalias() = dz_ur * p.ur_w.transpose();

  if (gating == GatingMode::kNone) {
    d_in += dg;
  } else if (gating == GatingMode::kDiagonal) {
    const int group = c / 5;
    for (int k = 0; k < 5; ++k) {
      kernels::shift_from_backward_add(layout, dg, kDiagonalTap[k], k * group, (k + 1) * group, d_in);
    }
  } else {
    Matrix<T> dz_sel(n, 5 * c);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
      const T* sel = it.sel.row(i).data();
      const T* col = it.col.row(i).data();
      const T* dgi = dg.row(i).data();
      T* dcol = d_col.row(i).data();
      T* dz = dz_sel.row(i).data();
      for (int ch = 0; ch < c; ++ch) {
        T dot = 0;
        for (int d = 0; d < 5; ++d) {
          const int k = kSelectTap[d] * c + ch;
          dz[d * c + ch] = dgi[ch] * col[k];
          dot += sel[d * c + ch] * dz[d * c + ch];
          dcol[k] += sel[d * c + ch] * dgi[ch];
        }
        for (int d = 0; d < 5; ++d) dz[d * c + ch] = sel[d * c + ch] * (dz[d * c + ch] - dot);
      }
    }
    grads.sel_w.noalias() += it.col.transpose() * dz_sel;
    grads.sel_b += dz_sel.colwise().sum();
    d_col.noalias() += dz_sel * p.sel_w.transpose();
  }
  kernels::scatter_taps_add(layout, d_col, taps, d_in);
  return d_in;
}

}  // namespace

template <typename T>
PackedParams<T> PackedParams<T>::pack(const ModelParams<T>& m) {
  using kernels::as_matrix;
  using kernels::as_row;
  using kernels::pack_taps;
  const HyperParams& h = m.hyper;
  const int c = h.state_channels;
  PackedParams p;
  p.hyper = h;
  p.enc_w = as_matrix(m.encoder_w.value);
  p.enc_b = as_row(m.encoder_b.value);
  p.act_w = as_matrix(m.action_w.value);
  if (h.core == CoreType::kCgru) {
    p.ur_w.resize(kernels::kMaskedTaps * c, 2 * c);
    p.ur_w.leftCols(c) = pack_taps(m.update_w.value, kernels::kMaskedTaps);
    p.ur_w.rightCols(c) = pack_taps(m.reset_w.value, kernels::kMaskedTaps);
    p.ur_b.resize(2 * c);
    p.ur_b << as_row(m.update_b.value), as_row(m.reset_b.value);
    p.cand_w = pack_taps(m.candidate_w.value, kernels::kMaskedTaps);
    p.cand_b = as_row(m.candidate_b.value);
    if (h.gating == GatingMode::kSelective) {
      p.sel_w = pack_taps(m.select_w.value, kernels::kAllTaps);
      p.sel_b = as_row(m.select_b.value);
    }
  } else {
    p.ff1_w = pack_taps(m.ff1_w.value, kernels::kAllTaps);
    p.ff1_b = as_row(m.ff1_b.value);
    p.ff2_w = pack_taps(m.ff2_w.value, kernels::kAllTaps);
    p.ff2_b = as_row(m.ff2_b.value);
  }
  p.dec_w = kernels::pack_transpose_kernel(m.decoder_w.value);
  const int pixels = h.tile_size * h.tile_size;
  p.dec_b.resize(pixels * 3);
  for (int i = 0; i < pixels; ++i) {
    for (int k = 0; k < 3; ++k) p.dec_b[i * 3 + k] = m.decoder_b.value[k];
  }
  p.renc_w = as_matrix(m.reward_encoder_w.value);
  p.renc_b = as_row(m.reward_encoder_b.value);
  p.ract_w = as_matrix(m.reward_action_w.value);
  p.rc1_w = pack_taps(m.reward_conv1_w.value, kernels::kAllTaps);
  p.rc1_b = as_row(m.reward_conv1_b.value);
  p.rc2_w = as_matrix(m.reward_conv2_w.value);
  p.rc2_b = as_row(m.reward_conv2_b.value);
  p.rc3_w = as_matrix(m.reward_conv3_w.value);
  p.rc3_b = as_row(m.reward_conv3_b.value);
  p.rc4_w = pack_taps(m.reward_conv4_w.value, kernels::kAllTaps);
  p.rc4_b = as_row(m.reward_conv4_b.value);
  return p;
}

template <typename T>
PackedParams<T> PackedParams<T>::zeros_like() const {
  PackedParams z;
  z.hyper = hyper;
  auto zero = [](auto& dst, const auto& src) { dst.setZero(src.rows(), src.cols()); };
  zero(z.enc_w, enc_w);
  zero(z.act_w, act_w);
  zero(z.enc_b, enc_b);
  zero(z.ur_w, ur_w);
  zero(z.ur_b, ur_b);
  zero(z.cand_w, cand_w);
  zero(z.cand_b, cand_b);
  zero(z.sel_w, sel_w);
  zero(z.sel_b, sel_b);
  zero(z.ff1_w, ff1_w);
  zero(z.ff2_w, ff2_w);
  zero(z.ff1_b, ff1_b);
  zero(z.ff2_b, ff2_b);
  zero(z.dec_w, dec_w);
  zero(z.dec_b, dec_b);
  zero(z.renc_w, renc_w);
  zero(z.ract_w, ract_w);
  zero(z.renc_b, renc_b);
  zero(z.rc1_w, rc1_w);
  zero(z.rc2_w, rc2_w);
  zero(z.rc3_w, rc3_w);
  zero(z.rc4_w, rc4_w);
  zero(z.rc1_b, rc1_b);
  zero(z.rc2_b, rc2_b);
  zero(z.rc3_b, rc3_b);
  zero(z.rc4_b, rc4_b);
  return z;
}

template <typename T>
void PackedParams<T>::unpack_grad_add(ModelParams<T>& m) const {
  using kernels::as_matrix;
  using kernels::as_row;
  using kernels::unpack_taps_add;
  const int c = hyper.state_channels;
  as_matrix(m.encoder_w.grad) += enc_w;
  as_row(m.encoder_b.grad) += enc_b;
  as_matrix(m.action_w.grad) += act_w;
  if (hyper.core == CoreType::kCgru) {
    unpack_taps_add(Matrix<T>(ur_w.leftCols(c)), kernels::kMaskedTaps, m.update_w.grad);
    unpack_taps_add(Matrix<T>(ur_w.rightCols(c)), kernels::kMaskedTaps, m.reset_w.grad);
    as_row(m.update_b.grad) += ur_b.leftCols(c);
    as_row(m.reset_b.grad) += ur_b.rightCols(c);
    unpack_taps_add(cand_w, kernels::kMaskedTaps, m.candidate_w.grad);
    as_row(m.candidate_b.grad) += cand_b;
    if (hyper.gating == GatingMode::kSelective) {
      unpack_taps_add(sel_w, kernels::kAllTaps, m.select_w.grad);
      as_row(m.select_b.grad) += sel_b;
    }
  } else {
    unpack_taps_add(ff1_w, kernels::kAllTaps, m.ff1_w.grad);
    as_row(m.ff1_b.grad) += ff1_b;
    unpack_taps_add(ff2_w, kernels::kAllTaps, m.ff2_w.grad);
    as_row(m.ff2_b.grad) += ff2_b;
  }
  kernels::unpack_transpose_kernel_add(dec_w, m.decoder_w.grad);
  for (Eigen::Index i = 0; i < dec_b.size(); ++i) m.decoder_b.grad[i % 3] += dec_b[i];
  as_matrix(m.reward_encoder_w.grad) += renc_w;
  as_row(m.reward_encoder_b.grad) += renc_b;
  as_matrix(m.reward_action_w.grad) += ract_w;
  unpack_taps_add(rc1_w, kernels::kAllTaps, m.reward_conv1_w.grad);
  as_row(m.reward_conv1_b.grad) += rc1_b;
  as_matrix(m.reward_conv2_w.grad) += rc2_w;
  as_row(m.reward_conv2_b.grad) += rc2_b;
  as_matrix(m.reward_conv3_w.grad) += rc3_w;
  as_row(m.reward_conv3_b.grad) += rc3_b;
  unpack_taps_add(rc4_w, kernels::kAllTaps, m.reward_conv4_w.grad);
  as_row(m.reward_conv4_b.grad) += rc4_b;
}

template <typename T>
void forward_step(const PackedParams<T>& p, const GridLayout& layout, Matrix<T> x, const std::vector<int>& actions,
                  StepCache<T>& cache, const StepOptions& options) {
  const HyperParams& h = p.hyper;
  const int frames = layout.num_frames();
  if (static_cast<int>(actions.size()) != frames) throw ShapeError("one action per frame required");
  if (x.rows() != layout.num_cells() || x.cols() != h.patch_size()) throw ShapeError("patch matrix shape mismatch");
  for (int a : actions) {
    if (a < 0 || a >= h.num_actions) throw ValidationError("action index out of range");
  }
  cache.layout = layout;
  cache.actions = actions;
  cache.x = std::move(x);
  cache.sat_sum.assign(frames, 0.0);
  cache.sat_count.assign(frames, 0.0);

  Matrix<T> s;
  affine(cache.x, p.enc_w, p.enc_b, s);
  add_action_rows(layout, p.act_w, actions, s);

  if (h.core == CoreType::kCgru) {
    cache.iters.resize(h.iterations);
    for (int i = 0; i < h.iterations; ++i) {
      if (i > 0 && h.condition_every_iteration) add_action_rows(layout, p.act_w, actions, s);
      cgru_forward(p, layout, options.sat_limit, s, cache.iters[i], cache.sat_sum, cache.sat_count);
    }
  } else {
    cache.iters.clear();
    kernels::gather_taps(layout, s, kernels::kAllTaps, cache.ff_col1);
    affine(cache.ff_col1, p.ff1_w, p.ff1_b, cache.ff_h1);
    relu_inplace(cache.ff_h1);
    kernels::gather_taps(layout, cache.ff_h1, kernels::kAllTaps, cache.ff_col2);
    affine(cache.ff_col2, p.ff2_w, p.ff2_b, s);
  }
  cache.s_n = std::move(s);
  affine(cache.s_n, p.dec_w, p.dec_b, cache.y);

  cache.has_reward = options.reward;
  if (!options.reward) return;
  Matrix<T> r0;
  affine(cache.x, p.renc_w, p.renc_b, r0);
  add_action_rows(layout, p.ract_w, actions, r0);
  kernels::gather_taps(layout, r0, kernels::kAllTaps, cache.r_col0);
  affine(cache.r_col0, p.rc1_w, p.rc1_b, cache.r1);
  relu_inplace(cache.r1);
  affine(cache.r1, p.rc2_w, p.rc2_b, cache.r2);
  relu_inplace(cache.r2);
  affine(cache.r2, p.rc3_w, p.rc3_b, cache.r3);
  relu_inplace(cache.r3);
  kernels::gather_interior_taps(layout, cache.r3, cache.r_int);
  Matrix<T> r4;
  affine(cache.r_int, p.rc4_w, p.rc4_b, r4);
  cache.logits.resize(frames, kRewardLogits);
  cache.argmax.assign(static_cast<size_t>(frames) * kRewardLogits, -1);
  for (int f = 0; f < frames; ++f) {
    const int lo = layout.interior_begin(f), hi = layout.interior_begin(f + 1);
    if (lo == hi) throw ShapeError("reward head needs a grid of at least 3x3");
    for (int k = 0; k < kRewardLogits; ++k) {
      int best = lo;
      for (int i = lo + 1; i < hi; ++i) {
        if (r4(i, k) > r4(best, k)) best = i;
      }
      cache.logits(f, k) = r4(best, k);
      cache.argmax[static_cast<size_t>(f) * kRewardLogits + k] = best;
    }
  }
}

template <typename T>
void backward_step(const PackedParams<T>& p, const StepCache<T>& cache, const Matrix<T>& d_y,
                   const Matrix<T>* d_logits, const std::vector<double>& sat_scale, double sat_limit,
                   PackedParams<T>& grads, Matrix<T>* d_x) {
  const HyperParams& h = p.hyper;
  const GridLayout& layout = cache.layout;
  const int n = layout.num_cells();

  grads.dec_w.noalias() += cache.s_n.transpose() * d_y;
  grads.dec_b += d_y.colwise().sum();
  Matrix<T> ds = d_y * p.dec_w.transpose();

  if (h.core == CoreType::kCgru) {
    for (int i = h.iterations - 1; i >= 0; --i) {
      ds = cgru_backward(p, layout, sat_limit, sat_scale, cache.iters[i], ds, grads);
      if (i > 0 && h.condition_every_iteration) action_rows_backward(layout, ds, cache.actions, grads.act_w);
    }
  } else {
    grads.ff2_w.noalias() += cache.ff_col2.transpose() * ds;
    grads.ff2_b += ds.colwise().sum();
    Matrix<T> d_col = ds * p.ff2_w.transpose();
    Matrix<T> dh = Matrix<T>::Zero(n, h.state_channels);
    kernels::scatter_taps_add(layout, d_col, kernels::kAllTaps, dh);
    dh = relu_mask(dh, cache.ff_h1);
    grads.ff1_w.noalias() += cache.ff_col1.transpose() * dh;
    grads.ff1_b += dh.colwise().sum();
    d_col = dh * p.ff1_w.transpose();
    ds.setZero(n, h.state_channels);
    kernels::scatter_taps_add(layout, d_col, kernels::kAllTaps, ds);
  }

  action_rows_backward(layout, ds, cache.actions, grads.act_w);
  grads.enc_w.noalias() += cache.x.transpose() * ds;
  grads.enc_b += ds.colwise().sum();
  if (d_x) d_x->noalias() = ds * p.enc_w.transpose();

  if (!cache.has_reward || !d_logits) return;
  Matrix<T> d4 = Matrix<T>::Zero(cache.r_int.rows(), kRewardLogits);
  for (int f = 0; f < layout.num_frames(); ++f) {
    for (int k = 0; k < kRewardLogits; ++k) {
      d4(cache.argmax[static_cast<size_t>(f) * kRewardLogits + k], k) += (*d_logits)(f, k);
    }
  }
  grads.rc4_w.noalias() += cache.r_int.transpose() * d4;
  grads.rc4_b += d4.colwise().sum();
  Matrix<T> d_int = d4 * p.rc4_w.transpose();
  Matrix<T> d3 = Matrix<T>::Zero(n, cache.r3.cols());
  kernels::scatter_interior_taps_add(layout, d_int, d3);
  d3 = relu_mask(d3, cache.r3);
  grads.rc3_w.noalias() += cache.r2.transpose() * d3;
  grads.rc3_b += d3.colwise().sum();
  Matrix<T> d2 = relu_mask(Matrix<T>(d3 * p.rc3_w.transpose()), cache.r2);
  grads.rc2_w.noalias() += cache.r1.transpose() * d2;
  grads.rc2_b += d2.colwise().sum();
  Matrix<T> d1 = relu_mask(Matrix<T>(d2 * p.rc2_w.transpose()), cache.r1);
  grads.rc1_w.noalias() += cache.r_col0.transpose() * d1;
  grads.rc1_b += d1.colwise().sum();
  Matrix<T> d_col0 = d1 * p.rc1_w.transpose();
  Matrix<T> d0 = Matrix<T>::Zero(n, p.renc_w.cols());
  kernels::scatter_taps_add(layout, d_col0, kernels::kAllTaps, d0);
  action_rows_backward(layout, d0, cache.actions, grads.ract_w);
  grads.renc_w.noalias() += cache.x.transpose() * d0;
  grads.renc_b += d0.colwise().sum();
}

template struct PackedParams<float>;
template struct PackedParams<double>;
template void forward_step<float>(const PackedParams<float>&, const GridLayout&, Matrix<float>,
                                  const std::vector<int>&, StepCache<float>&, const StepOptions&);
template void forward_step<double>(const PackedParams<double>&, const GridLayout&, Matrix<double>,
                                   const std::vector<int>&, StepCache<double>&, const StepOptions&);
template void backward_step<float>(const PackedParams<float>&, const StepCache<float>&, const Matrix<float>&,
                                   const Matrix<float>*, const std::vector<double>&, double, PackedParams<float>&,
                                   Matrix<float>*);
template void backward_step<double>(const PackedParams<double>&, const StepCache<double>&, const Matrix<double>&,
                                    const Matrix<double>*, const std::vector<double>&, double,
                                    PackedParams<double>&, Matrix<double>*);

}  // namespace nge::model
