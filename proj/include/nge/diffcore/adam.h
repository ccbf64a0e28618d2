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

#ifndef NGE_DIFFCORE_ADAM_H_
#define NGE_DIFFCORE_ADAM_H_

#include <cmath>
#include <vector>

#include "nge/diffcore/tensor.h"

namespace nge {

struct AdamOptions {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Adam over a fixed list of parameters. Moment buffers live here, one pair
// per registered parameter.
template <typename T>
class Adam {
 public:
  Adam(std::vector<Parameter<T>*> params, AdamOptions options) : params_(std::move(params)), options_(options) {
    for (const auto* p : params_) {
      m_.emplace_back(p->size(), 0.0);
      v_.emplace_back(p->size(), 0.0);
    }
  }

  void step() {
    ++t_;
    const double b1 = options_.beta1, b2 = options_.beta2;
    const double corr1 = 1.0 - std::pow(b1, static_cast<double>(t_));
    const double corr2 = 1.0 - std::pow(b2, static_cast<double>(t_));
    const double step_size = options_.lr / corr1;
    for (size_t k = 0; k < params_.size(); ++k) {
      Parameter<T>& p = *params_[k];
      std::vector<double>& m = m_[k];
      std::vector<double>& v = v_[k];
      for (size_t i = 0; i < p.size(); ++i) {
        const double g = static_cast<double>(p.grad.data[i]);
        m[i] = b1 * m[i] + (1.0 - b1) * g;
        v[i] = b2 * v[i] + (1.0 - b2) * g * g;
        p.value.data[i] -= static_cast<T>(step_size * m[i] / (std::sqrt(v[i] / corr2) + options_.epsilon));
      }
      p.apply_mask();
    }
  }

  long steps() const { return t_; }
  const AdamOptions& options() const { return options_; }
  void set_lr(double lr) { options_.lr = lr; }

 private:
  std::vector<Parameter<T>*> params_;
  AdamOptions options_;
  std::vector<std::vector<double>> m_;
  std::vector<std::vector<double>> v_;
  long t_ = 0;
};

}  // namespace nge

#endif  // NGE_DIFFCORE_ADAM_H_
