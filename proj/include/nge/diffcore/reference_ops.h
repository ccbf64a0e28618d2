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

#ifndef NGE_DIFFCORE_REFERENCE_OPS_H_
#define NGE_DIFFCORE_REFERENCE_OPS_H_

// Serial reference implementations of every differentiable op, written as
// direct loops. They define the semantics the fast kernels must reproduce
// and are exercised by the finite-difference suite.

#include <cmath>
#include <string>

#include "nge/diffcore/saturation.h"
#include "nge/diffcore/tensor.h"

namespace nge::reference {

template <typename T>
struct ConvGrads {
  Tensor<T> input;
  Tensor<T> kernels;
  Tensor<T> bias;
};

inline int conv_out_extent(int in, int k, int stride, int pad) { return (in + 2 * pad - k) / stride + 1; }

template <typename T>
void check_conv_shapes(const Tensor<T>& input, const Tensor<T>& kernels, const Tensor<T>& bias, int stride) {
  if (input.rank() != 3 || kernels.rank() != 4)
    throw ShapeError("conv: expected (W,H,C) input and (k,k,Cin,Cout) kernels");
  if (stride < 1) throw ShapeError("conv: stride must be >= 1");
  if (bias.rank() != 1 || bias.dim(0) != kernels.dim(3)) throw ShapeError("conv: bias must have C_out entries");
}

// Cross-correlation with zero padding:
// out[x][y][o] = b[o] + sum_{a,b,i} K[a][b][i][o] * in[x*s + a - p][y*s + b - p][i].
template <typename T>
Tensor<T> conv2d(const Tensor<T>& input, const Tensor<T>& kernels, const Tensor<T>& bias, int stride, int pad) {
  check_conv_shapes(input, kernels, bias, stride);
  const int w_in = input.dim(0), h_in = input.dim(1), c_in = input.dim(2);
  const int kw = kernels.dim(0), kh = kernels.dim(1), c_out = kernels.dim(3);
  if (kernels.dim(2) != c_in)
    throw ShapeError("conv2d: channel mismatch " + shape_string(input) + " vs " + shape_string(kernels));
  const int w_out = conv_out_extent(w_in, kw, stride, pad);
  const int h_out = conv_out_extent(h_in, kh, stride, pad);
  if (w_out < 1 || h_out < 1) throw ShapeError("conv2d: kernel larger than padded input");
  Tensor<T> out({w_out, h_out, c_out});
  for (int x = 0; x < w_out; ++x) {
    for (int y = 0; y < h_out; ++y) {
      for (int o = 0; o < c_out; ++o) {
        T acc = bias[o];
        for (int a = 0; a < kw; ++a) {
          const int ix = x * stride + a - pad;
          if (ix < 0 || ix >= w_in) continue;
          for (int b = 0; b < kh; ++b) {
            const int iy = y * stride + b - pad;
            if (iy < 0 || iy >= h_in) continue;
            for (int i = 0; i < c_in; ++i) acc += kernels.at(a, b, i, o) * input.at(ix, iy, i);
          }
        }
        out.at(x, y, o) = acc;
      }
    }
  }
  return out;
}

template <typename T>
ConvGrads<T> conv2d_backward(const Tensor<T>& input, const Tensor<T>& kernels, const Tensor<T>& d_out, int stride,
                             int pad) {
  const int w_in = input.dim(0), h_in = input.dim(1), c_in = input.dim(2);
  const int kw = kernels.dim(0), kh = kernels.dim(1), c_out = kernels.dim(3);
  ConvGrads<T> g{Tensor<T>(input.shape), Tensor<T>(kernels.shape), Tensor<T>({c_out})};
  for (int x = 0; x < d_out.dim(0); ++x) {
    for (int y = 0; y < d_out.dim(1); ++y) {
      for (int o = 0; o < c_out; ++o) {
        const T go = d_out.at(x, y, o);
        g.bias[o] += go;
        for (int a = 0; a < kw; ++a) {
          const int ix = x * stride + a - pad;
          if (ix < 0 || ix >= w_in) continue;
          for (int b = 0; b < kh; ++b) {
            const int iy = y * stride + b - pad;
            if (iy < 0 || iy >= h_in) continue;
            for (int i = 0; i < c_in; ++i) {
              g.kernels.at(a, b, i, o) += go * input.at(ix, iy, i);
              g.input.at(ix, iy, i) += go * kernels.at(a, b, i, o);
            }
          }
        }
      }
    }
  }
  return g;
}

// Transposed convolution, no padding:
// out[x*s + a][y*s + b][o] += in[x][y][i] * K[a][b][i][o], plus b[o].
// Output extents are (W - 1) * s + k; with k == s that is W * s.
template <typename T>
Tensor<T> conv2d_transpose(const Tensor<T>& input, const Tensor<T>& kernels, const Tensor<T>& bias, int stride) {
  check_conv_shapes(input, kernels, bias, stride);
  const int w_in = input.dim(0), h_in = input.dim(1), c_in = input.dim(2);
  const int kw = kernels.dim(0), kh = kernels.dim(1), c_out = kernels.dim(3);
  if (kernels.dim(2) != c_in) throw ShapeError("conv2d_transpose: channel mismatch");
  const int w_out = (w_in - 1) * stride + kw;
  const int h_out = (h_in - 1) * stride + kh;
  Tensor<T> out({w_out, h_out, c_out});
  for (int x = 0; x < w_out; ++x) {
    for (int y = 0; y < h_out; ++y) {
      for (int o = 0; o < c_out; ++o) out.at(x, y, o) = bias[o];
    }
  }
  for (int x = 0; x < w_in; ++x) {
    for (int y = 0; y < h_in; ++y) {
      for (int a = 0; a < kw; ++a) {
        for (int b = 0; b < kh; ++b) {
          for (int i = 0; i < c_in; ++i) {
            const T v = input.at(x, y, i);
            for (int o = 0; o < c_out; ++o) out.at(x * stride + a, y * stride + b, o) += v * kernels.at(a, b, i, o);
          }
        }
      }
    }
  }
  return out;
}

template <typename T>
ConvGrads<T> conv2d_transpose_backward(const Tensor<T>& input, const Tensor<T>& kernels, const Tensor<T>& d_out,
                                       int stride) {
  const int w_in = input.dim(0), h_in = input.dim(1), c_in = input.dim(2);
  const int kw = kernels.dim(0), kh = kernels.dim(1), c_out = kernels.dim(3);
  ConvGrads<T> g{Tensor<T>(input.shape), Tensor<T>(kernels.shape), Tensor<T>({c_out})};
  for (int x = 0; x < d_out.dim(0); ++x) {
    for (int y = 0; y < d_out.dim(1); ++y) {
      for (int o = 0; o < c_out; ++o) g.bias[o] += d_out.at(x, y, o);
    }
  }
  for (int x = 0; x < w_in; ++x) {
    for (int y = 0; y < h_in; ++y) {
      for (int a = 0; a < kw; ++a) {
        for (int b = 0; b < kh; ++b) {
          for (int i = 0; i < c_in; ++i) {
            for (int o = 0; o < c_out; ++o) {
              const T go = d_out.at(x * stride + a, y * stride + b, o);
              g.kernels.at(a, b, i, o) += go * input.at(x, y, i);
              g.input.at(x, y, i) += go * kernels.at(a, b, i, o);
            }
          }
        }
      }
    }
  }
  return g;
}

// Hard sigmoid clamp(1.2 * sigmoid(x) - 0.1, 0, 1). Saturation terms go to
// acc when given.
template <typename T>
Tensor<T> hard_sigmoid(const Tensor<T>& x, SaturationAccumulator* acc = nullptr) {
  Tensor<T> out(x.shape);
  double terms = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    out[i] = hard_sigmoid_value(x[i]);
    terms += sigmoid_saturation(x[i], acc ? acc->limit : 1.0);
  }
  if (acc) acc->add(terms, x.size());
  return out;
}

template <typename T>
Tensor<T> hard_tanh(const Tensor<T>& x, SaturationAccumulator* acc = nullptr) {
  Tensor<T> out(x.shape);
  double terms = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    out[i] = hard_tanh_value(x[i]);
    terms += tanh_saturation(x[i], acc ? acc->limit : 1.0);
  }
  if (acc) acc->add(terms, x.size());
  return out;
}

// Gradient w.r.t. x of sum(d_out * f(x)) + sat_scale * sum(saturation terms).
template <typename T>
Tensor<T> hard_sigmoid_backward(const Tensor<T>& x, const Tensor<T>& d_out, double limit = 1.0,
                                double sat_scale = 0.0) {
  Tensor<T> g(x.shape);
  for (size_t i = 0; i < x.size(); ++i) {
    g[i] = d_out[i] * hard_sigmoid_derivative(x[i]) + T(sat_scale) * sigmoid_saturation_derivative(x[i], limit);
  }
  return g;
}

template <typename T>
Tensor<T> hard_tanh_backward(const Tensor<T>& x, const Tensor<T>& d_out, double limit = 1.0, double sat_scale = 0.0) {
  Tensor<T> g(x.shape);
  for (size_t i = 0; i < x.size(); ++i) {
    g[i] = d_out[i] * hard_tanh_derivative(x[i]) + T(sat_scale) * tanh_saturation_derivative(x[i], limit);
  }
  return g;
}

template <typename T>
Tensor<T> relu(const Tensor<T>& x) {
  Tensor<T> out(x.shape);
  for (size_t i = 0; i < x.size(); ++i) out[i] = x[i] > T(0) ? x[i] : T(0);
  return out;
}

// Softmax along one axis.
template <typename T>
Tensor<T> softmax(const Tensor<T>& x, int axis) {
  if (axis < 0) axis += x.rank();
  if (axis < 0 || axis >= x.rank()) throw ShapeError("softmax: bad axis");
  size_t outer = 1, inner = 1;
  for (int i = 0; i < axis; ++i) outer *= x.dim(i);
  for (int i = axis + 1; i < x.rank(); ++i) inner *= x.dim(i);
  const int n = x.dim(axis);
  Tensor<T> out(x.shape);
  for (size_t o = 0; o < outer; ++o) {
    for (size_t in = 0; in < inner; ++in) {
      auto idx = [&](int k) { return (o * n + k) * inner + in; };
      T mx = x[idx(0)];
      for (int k = 1; k < n; ++k) mx = std::max(mx, x[idx(k)]);
      T sum = 0;
      for (int k = 0; k < n; ++k) sum += (out[idx(k)] = std::exp(x[idx(k)] - mx));
      for (int k = 0; k < n; ++k) out[idx(k)] /= sum;
    }
  }
  return out;
}

template <typename T>
Tensor<T> softmax_backward(const Tensor<T>& y, const Tensor<T>& d_out, int axis) {
  if (axis < 0) axis += y.rank();
  size_t outer = 1, inner = 1;
  for (int i = 0; i < axis; ++i) outer *= y.dim(i);
  for (int i = axis + 1; i < y.rank(); ++i) inner *= y.dim(i);
  const int n = y.dim(axis);
  Tensor<T> g(y.shape);
  for (size_t o = 0; o < outer; ++o) {
    for (size_t in = 0; in < inner; ++in) {
      auto idx = [&](int k) { return (o * n + k) * inner + in; };
      T dot = 0;
      for (int k = 0; k < n; ++k) dot += y[idx(k)] * d_out[idx(k)];
      for (int k = 0; k < n; ++k) g[idx(k)] = y[idx(k)] * (d_out[idx(k)] - dot);
    }
  }
  return g;
}

// -log softmax(logits)[target] for a rank-1 logit vector.
template <typename T>
T cross_entropy(const Tensor<T>& logits, int target) {
  if (logits.rank() != 1 || target < 0 || target >= logits.dim(0)) throw ShapeError("cross_entropy: bad target");
  T mx = logits[0];
  for (size_t k = 1; k < logits.size(); ++k) mx = std::max(mx, logits[k]);
  T sum = 0;
  for (size_t k = 0; k < logits.size(); ++k) sum += std::exp(logits[k] - mx);
  return std::log(sum) + mx - logits[target];
}

template <typename T>
Tensor<T> cross_entropy_backward(const Tensor<T>& logits, int target) {
  Tensor<T> g = softmax(logits, 0);
  g[target] -= T(1);
  return g;
}

template <typename T>
T mse(const Tensor<T>& a, const Tensor<T>& b) {
  if (a.shape != b.shape) throw ShapeError("mse: shape mismatch");
  T acc = 0;
  for (size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
  return acc / static_cast<T>(a.size());
}

// Gradient of mse(a, b) w.r.t. a.
template <typename T>
Tensor<T> mse_backward(const Tensor<T>& a, const Tensor<T>& b) {
  Tensor<T> g(a.shape);
  for (size_t i = 0; i < a.size(); ++i) g[i] = T(2) * (a[i] - b[i]) / static_cast<T>(a.size());
  return g;
}

}  // namespace nge::reference

#endif  // NGE_DIFFCORE_REFERENCE_OPS_H_
