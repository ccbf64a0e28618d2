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

#ifndef NGE_TESTS_GRADIENT_CHECK_H_
#define NGE_TESTS_GRADIENT_CHECK_H_

#include <cstdint>
#include <string>
#include <vector>

#include "nge/diffcore/saturation.h"
#include "nge/model/engine.h"
#include "nge/model/model.h"
#include "test_util.h"

namespace nge::testing {

// Central finite differences of one engine tick on a 4x4 grid. The loss is
// a random linear functional of the decoded frame and the reward logits plus
// a weighted saturation term with a low limit, so every branch carries
// gradient. Addends are differenced one by one before summing.
struct GradientCheck {
  double worst = 0.0;
  std::string where;
  double analytic = 0.0, numeric = 0.0;
  bool saturation_exercised = false;
  bool masked_gradient_nonzero = false;
  long checked = 0;
  long on_kink = 0;  // entries with no kink-free step; not compared
};

struct FdProblem {
  kernels::GridLayout layout;
  kernels::Matrix<double> x;
  std::vector<int> actions;
  kernels::Matrix<double> wy, wl;
  double sat_weight = 0.5;
  double limit = 0.3;

  struct Eval {
    std::vector<double> terms;  // addends of the loss
    std::vector<uint8_t> regime;  // piece of every piecewise unit
  };

  Eval eval(const model::ModelParams<double>& params, const kernels::Matrix<double>& input,
            model::StepCache<double>* keep = nullptr) const {
    model::StepCache<double> cache;
    model::StepOptions opt;
    opt.sat_limit = limit;
    model::forward_step(model::PackedParams<double>::pack(params), layout, input, actions, cache, opt);
    Eval out;
    for (Eigen::Index i = 0; i < cache.y.size(); ++i) out.terms.push_back(cache.y.data()[i] * wy.data()[i]);
    for (Eigen::Index i = 0; i < cache.logits.size(); ++i) out.terms.push_back(cache.logits.data()[i] * wl.data()[i]);
    for (int f = 0; f < layout.num_frames(); ++f) out.terms.push_back(sat_weight * cache.frame_saturation(f));
    for (const auto& it : cache.iters) {
      for (Eigen::Index i = 0; i < it.z_ur.size(); ++i) {
        const double z = it.z_ur.data()[i];
        out.regime.push_back((hard_sigmoid_derivative(z) == 0.0) | (sigmoid_saturation(z, limit) > 0.0) << 1);
      }
      for (Eigen::Index i = 0; i < it.z_c.size(); ++i) {
        const double z = it.z_c.data()[i];
        out.regime.push_back((hard_tanh_derivative(z) == 0.0) | (tanh_saturation(z, limit) > 0.0) << 1);
      }
    }
    for (const kernels::Matrix<double>* m : {&cache.ff_h1, &cache.r1, &cache.r2, &cache.r3}) {
      for (Eigen::Index i = 0; i < m->size(); ++i) out.regime.push_back(m->data()[i] > 0.0);
    }
    for (int a : cache.argmax) out.regime.push_back(static_cast<uint8_t>(a));
    if (keep) *keep = std::move(cache);
    return out;
  }
};

inline GradientCheck engine_gradient_check(const model::HyperParams& h, uint64_t seed) {
  using kernels::Matrix;
  Rng rng(seed);
  model::ModelParams<double> params = model::init_params<double>(h, seed);
  randomize(params, rng, 0.8);
  FdProblem prob;
  prob.layout = kernels::GridLayout({{4, 4}});
  const gridworld::Observation obs = random_observation(4, 4, h.tile_size, rng);
  kernels::images_to_patches(prob.layout, {obs.pixels.data()}, h.tile_size, prob.x);
  prob.actions = {3};
  prob.wy = Matrix<double>::NullaryExpr(prob.x.rows(), prob.x.cols(), [&] { return rng.uniform(-1, 1); });
  prob.wl = Matrix<double>::NullaryExpr(1, model::kRewardLogits, [&] { return rng.uniform(-1, 1); });

  model::StepCache<double> cache;
  prob.eval(params, prob.x, &cache);
  model::PackedParams<double> packed = model::PackedParams<double>::pack(params);
  model::PackedParams<double> grads = packed.zeros_like();
  std::vector<double> scale = {cache.sat_count[0] > 0 ? prob.sat_weight / cache.sat_count[0] : 0.0};
  Matrix<double> dx;
  model::backward_step(packed, cache, prob.wy, &prob.wl, scale, prob.limit, grads, &dx);
  params.zero_grad();
  grads.unpack_grad_add(params);

  GradientCheck out;
  for (double v : cache.sat_sum) out.saturation_exercised = out.saturation_exercised || v > 0.0;
  const std::vector<uint8_t> base_regime = prob.eval(params, prob.x).regime;
  // Central difference with the largest step whose stencil stays on one
  // smooth piece of every clamp, ReLU and max.
  auto probe = [&](const FdProblem& problem, Matrix<double>& input, double& v, double analytic,
                   const std::string& name) {
    const double keep = v;
    for (double eps : {1e-4, 3e-5, 1e-5, 3e-6, 1e-6}) {
      v = keep + eps;
      const FdProblem::Eval up = problem.eval(params, input);
      v = keep - eps;
      const FdProblem::Eval down = problem.eval(params, input);
      v = keep;
      if (up.regime != base_regime || down.regime != base_regime) continue;
      double diff = 0.0;
      for (size_t k = 0; k < up.terms.size(); ++k) diff += up.terms[k] - down.terms[k];
      const double numeric = diff / (2 * eps);
      const double err = relative_error(analytic, numeric);
      ++out.checked;
      if (err > out.worst) {
        out.worst = err;
        out.where = name;
        out.analytic = analytic;
        out.numeric = numeric;
      }
      return;
    }
    ++out.on_kink;
  };
  params.for_each([&](std::string_view name, Parameter<double>& p) {
    for (size_t i = 0; i < p.size(); ++i) {
      if (p.mask && p.mask->data[i] == 0.0) {
        out.masked_gradient_nonzero = out.masked_gradient_nonzero || p.grad.data[i] != 0.0;
        continue;
      }
      probe(prob, prob.x, p.value.data[i], p.grad.data[i], std::string(name) + "[" + std::to_string(i) + "]");
    }
  });
  // The input gradient covers the pixel path only, so compare against a
  // loss without the reward term.
  FdProblem pixel_only = prob;
  pixel_only.wl.setZero();
  Matrix<double> x = prob.x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    probe(pixel_only, x, x.data()[i], dx.data()[i], "input[" + std::to_string(i) + "]");
  }
  return out;
}

}  // namespace nge::testing

#endif  // NGE_TESTS_GRADIENT_CHECK_H_
