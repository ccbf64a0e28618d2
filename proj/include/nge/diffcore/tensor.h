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

#ifndef NGE_DIFFCORE_TENSOR_H_
#define NGE_DIFFCORE_TENSOR_H_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "nge/common/errors.h"

namespace nge {

// Dense row-major tensor. A latent grid has shape (W, H, C); a conv kernel
// bank has shape (k, k, C_in, C_out).
template <typename T>
struct Tensor {
  std::vector<int> shape;
  std::vector<T> data;

  Tensor() = default;
  explicit Tensor(std::vector<int> s, T fill = T(0)) : shape(std::move(s)), data(element_count(shape), fill) {}

  static size_t element_count(const std::vector<int>& s) {
    size_t n = 1;
    for (int e : s) {
      if (e < 0) throw ShapeError("negative extent");
      n *= static_cast<size_t>(e);
    }
    return n;
  }

  int rank() const { return static_cast<int>(shape.size()); }
  int dim(int i) const { return shape.at(i); }
  size_t size() const { return data.size(); }

  T& operator[](size_t i) { return data[i]; }
  const T& operator[](size_t i) const { return data[i]; }

  T& at(int i, int j, int k) { return data[(static_cast<size_t>(i) * shape[1] + j) * shape[2] + k]; }
  const T& at(int i, int j, int k) const { return data[(static_cast<size_t>(i) * shape[1] + j) * shape[2] + k]; }
  T& at(int i, int j, int k, int l) {
    return data[((static_cast<size_t>(i) * shape[1] + j) * shape[2] + k) * shape[3] + l];
  }
  const T& at(int i, int j, int k, int l) const {
    return data[((static_cast<size_t>(i) * shape[1] + j) * shape[2] + k) * shape[3] + l];
  }

  void fill(T v) { std::fill(data.begin(), data.end(), v); }
  bool all_finite() const {
    return std::all_of(data.begin(), data.end(), [](T v) { return std::isfinite(static_cast<double>(v)); });
  }

  template <typename U>
  Tensor<U> cast() const {
    Tensor<U> out;
    out.shape = shape;
    out.data.assign(data.begin(), data.end());
    return out;
  }

  bool operator==(const Tensor&) const = default;
};

template <typename T>
std::string shape_string(const Tensor<T>& t) {
  std::string s = "(";
  for (size_t i = 0; i < t.shape.size(); ++i) s += (i ? "," : "") + std::to_string(t.shape[i]);
  return s + ")";
}

// Learnable tensor with gradient and an optional binary mask. Masked entries
// of value and gradient are kept at exactly zero.
template <typename T>
struct Parameter {
  Tensor<T> value;
  Tensor<T> grad;
  std::optional<Tensor<T>> mask;

  Parameter() = default;
  explicit Parameter(std::vector<int> shape) : value(shape), grad(shape) {}

  size_t size() const { return value.size(); }
  void zero_grad() { grad.fill(T(0)); }

  void set_mask(Tensor<T> m) {
    if (m.shape != value.shape) throw ShapeError("mask shape mismatch");
    mask = std::move(m);
    apply_mask();
  }

  void apply_mask() {
    if (!mask) return;
    for (size_t i = 0; i < value.size(); ++i) {
      if (mask->data[i] == T(0)) {
        value.data[i] = T(0);
        grad.data[i] = T(0);
      }
    }
  }
};

// 3x3 mask that zeroes the four corner taps of a (3, 3, C_in, C_out) bank.
template <typename T>
Tensor<T> adjacency_mask(int c_in, int c_out) {
  Tensor<T> m({3, 3, c_in, c_out}, T(1));
  for (int a : {0, 2}) {
    for (int b : {0, 2}) {
      for (int i = 0; i < c_in; ++i) {
        for (int o = 0; o < c_out; ++o) m.at(a, b, i, o) = T(0);
      }
    }
  }
  return m;
}

}  // namespace nge

#endif  // NGE_DIFFCORE_TENSOR_H_
