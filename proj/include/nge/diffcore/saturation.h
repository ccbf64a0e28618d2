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

#ifndef NGE_DIFFCORE_SATURATION_H_
#define NGE_DIFFCORE_SATURATION_H_

#include <cmath>
#include <cstddef>
#include <vector>

namespace nge {

// Hard nonlinearities and their saturation penalties. The saturation measure
// m is the pre-clamp activation rescaled to [-1, 1] at the clip points:
//   hard sigmoid: m = |2 * (1.2 * sigmoid(x) - 0.1) - 1|
//   hard tanh:    m = |1.2 * tanh(x)|
// and each activation contributes max(0, m - limit).

template <typename T>
inline T logistic(T x) {
  return T(1) / (T(1) + std::exp(-x));
}

template <typename T>
inline T hard_sigmoid_value(T x) {
  const T v = T(1.2) * logistic(x) - T(0.1);
  return v < T(0) ? T(0) : (v > T(1) ? T(1) : v);
}

template <typename T>
inline T hard_sigmoid_derivative(T x) {
  const T s = logistic(x);
  const T v = T(1.2) * s - T(0.1);
  return (v > T(0) && v < T(1)) ? T(1.2) * s * (T(1) - s) : T(0);
}

template <typename T>
inline T hard_tanh_value(T x) {
  const T v = T(1.2) * std::tanh(x);
  return v < T(-1) ? T(-1) : (v > T(1) ? T(1) : v);
}

template <typename T>
inline T hard_tanh_derivative(T x) {
  const T t = std::tanh(x);
  const T v = T(1.2) * t;
  return (v > T(-1) && v < T(1)) ? T(1.2) * (T(1) - t * t) : T(0);
}

template <typename T>
inline T sigmoid_saturation(T x, double limit) {
  const T m = std::abs(T(2.4) * logistic(x) - T(1.2));
  return m > T(limit) ? m - T(limit) : T(0);
}

template <typename T>
inline T sigmoid_saturation_derivative(T x, double limit) {
  const T s = logistic(x);
  const T centred = T(2.4) * s - T(1.2);
  if (std::abs(centred) <= T(limit)) return T(0);
  return (centred > T(0) ? T(1) : T(-1)) * T(2.4) * s * (T(1) - s);
}

template <typename T>
inline T tanh_saturation(T x, double limit) {
  const T m = std::abs(T(1.2) * std::tanh(x));
  return m > T(limit) ? m - T(limit) : T(0);
}

template <typename T>
inline T tanh_saturation_derivative(T x, double limit) {
  const T t = std::tanh(x);
  if (std::abs(T(1.2) * t) <= T(limit)) return T(0);
  return (t > T(0) ? T(1) : T(-1)) * T(1.2) * (T(1) - t * t);
}

// Collects saturation terms. Terms are averaged over the activations of
// each sample, then over the samples of a batch.
struct SaturationAccumulator {
  double limit = 0.99;
  double weight = 0.001;

  void add(double term_sum, size_t activations) {
    sample_sum_ += term_sum;
    sample_count_ += activations;
  }

  void end_sample() {
    sample_means_.push_back(sample_count_ ? sample_sum_ / static_cast<double>(sample_count_) : 0.0);
    sample_sum_ = 0.0;
    sample_count_ = 0;
  }

  // Batch mean of per-sample means; an open sample counts as one sample.
  double cost() const {
    double total = 0.0;
    size_t n = sample_means_.size();
    for (double m : sample_means_) total += m;
    if (sample_count_) {
      total += sample_sum_ / static_cast<double>(sample_count_);
      ++n;
    }
    return n ? total / static_cast<double>(n) : 0.0;
  }

  double weighted_cost() const { return weight * cost(); }

  void reset() {
    sample_means_.clear();
    sample_sum_ = 0.0;
    sample_count_ = 0;
  }

 private:
  std::vector<double> sample_means_;
  double sample_sum_ = 0.0;
  size_t sample_count_ = 0;
};

}  // namespace nge

#endif  // NGE_DIFFCORE_SATURATION_H_
