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

#include <cmath>
#include <tuple>

#include <gtest/gtest.h>

#include "nge/common/rng.h"
#include "nge/diffcore/adam.h"
#include "nge/diffcore/kernels.h"
#include "nge/diffcore/reference_ops.h"
#include "test_util.h"

namespace nge {
namespace {

using kernels::GridLayout;
using kernels::Matrix;
using testing::random_tensor;
using testing::relative_error;
using namespace reference;  // NOLINT

template <typename Fn>
void check_gradient(Tensor<double>& x, const Tensor<double>& analytic, Fn loss, const std::string& what) {
  constexpr double kEps = 1e-5;
  for (size_t i = 0; i < x.size(); ++i) {
    const double saved = x[i];
    x[i] = saved + kEps;
    const double up = loss();
    x[i] = saved - kEps;
    const double down = loss();
    x[i] = saved;
    ASSERT_LT(relative_error((up - down) / (2 * kEps), analytic[i]), 1e-6) << what << " index " << i;
  }
}

double weighted_sum(const Tensor<double>& t, const Tensor<double>& w) {
  double s = 0.0;
  for (size_t i = 0; i < t.size(); ++i) s += t[i] * w[i];
  return s;
}

TEST(ReferenceConvTest, HandComputedExample) {
  // 2x2 single-channel input, 2x2 kernel, no padding: one output.
  Tensor<double> in({2, 2, 1});
  in.data = {1, 2, 3, 4};  // (0,0)=1 (0,1)=2 (1,0)=3 (1,1)=4
  Tensor<double> k({2, 2, 1, 1});
  k.data = {1, 0, 0, -1};
  Tensor<double> b({1}, 0.5);
  const Tensor<double> out = conv2d(in, k, b, 1, 0);
  ASSERT_EQ(out.shape, (std::vector<int>{1, 1, 1}));
  EXPECT_DOUBLE_EQ(out[0], 1 - 4 + 0.5);
  // Padding 1 gives a 3x3 output whose corner (0,0) only sees in(0,0) via k(1,1).
  const Tensor<double> padded = conv2d(in, k, b, 1, 1);
  ASSERT_EQ(padded.shape, (std::vector<int>{3, 3, 1}));
  EXPECT_DOUBLE_EQ(padded.at(0, 0, 0), -1 + 0.5);
  EXPECT_DOUBLE_EQ(padded.at(2, 2, 0), 4 + 0.5);
  // Transposed conv with stride 2 and a 2x2 kernel tiles a copy per input cell.
  Tensor<double> t_in({1, 2, 1});
  t_in.data = {2, -1};
  const Tensor<double> up = conv2d_transpose(t_in, k, Tensor<double>({1}), 2);
  ASSERT_EQ(up.shape, (std::vector<int>{2, 4, 1}));
  const std::vector<double> want = {2, 0, -1, 0, 0, -2, 0, 1};
  EXPECT_EQ(up.data, want);
}

TEST(ReferenceConvTest, FiniteDifferencesOverShapes) {
  Rng rng(11);
  int cases = 0;
  for (auto [w, h, cin, cout, k, stride, pad] : std::vector<std::tuple<int, int, int, int, int, int, int>>{
           {3, 3, 1, 1, 3, 1, 1}, {4, 3, 2, 3, 3, 1, 1}, {5, 2, 3, 2, 3, 1, 1}, {1, 1, 2, 2, 3, 1, 1},
           {4, 4, 2, 2, 2, 2, 0}, {6, 4, 3, 2, 2, 2, 0}, {4, 6, 1, 4, 3, 1, 0}, {3, 5, 2, 1, 1, 1, 0},
           {5, 5, 2, 3, 3, 2, 1}, {2, 7, 3, 3, 3, 1, 1}, {6, 6, 1, 2, 3, 3, 0}, {3, 4, 4, 2, 1, 1, 0}}) {
    const Tensor<double> input0 = random_tensor<double>({w, h, cin}, rng);
    Tensor<double> input = input0;
    Tensor<double> kern = random_tensor<double>({k, k, cin, cout}, rng);
    Tensor<double> bias = random_tensor<double>({cout}, rng);
    const Tensor<double> out = conv2d(input, kern, bias, stride, pad);
    const Tensor<double> dy = random_tensor<double>(out.shape, rng);
    const auto g = conv2d_backward(input, kern, dy, stride, pad);
    auto loss = [&] { return weighted_sum(conv2d(input, kern, bias, stride, pad), dy); };
    check_gradient(input, g.input, loss, "conv input");
    check_gradient(kern, g.kernels, loss, "conv kernel");
    check_gradient(bias, g.bias, loss, "conv bias");
    ++cases;
  }
  for (auto [w, h, cin, cout, d] : std::vector<std::tuple<int, int, int, int, int>>{
           {1, 1, 1, 3, 2}, {2, 3, 2, 3, 2}, {3, 2, 4, 3, 3}, {2, 2, 3, 1, 4}, {4, 1, 2, 3, 2},
           {1, 3, 5, 3, 2}, {3, 3, 2, 2, 1}, {2, 4, 3, 3, 3}, {5, 2, 1, 3, 2}, {2, 2, 6, 3, 2}}) {
    Tensor<double> input = random_tensor<double>({w, h, cin}, rng);
    Tensor<double> kern = random_tensor<double>({d, d, cin, cout}, rng);
    Tensor<double> bias = random_tensor<double>({cout}, rng);
    const Tensor<double> out = conv2d_transpose(input, kern, bias, d);
    ASSERT_EQ(out.shape, (std::vector<int>{w * d, h * d, cout}));
    const Tensor<double> dy = random_tensor<double>(out.shape, rng);
    const auto g = conv2d_transpose_backward(input, kern, dy, d);
    auto loss = [&] { return weighted_sum(conv2d_transpose(input, kern, bias, d), dy); };
    check_gradient(input, g.input, loss, "deconv input");
    check_gradient(kern, g.kernels, loss, "deconv kernel");
    check_gradient(bias, g.bias, loss, "deconv bias");
    ++cases;
  }
  EXPECT_GE(cases, 20);
}

TEST(ActivationTest, HardNonlinearityValues) {
  EXPECT_DOUBLE_EQ(hard_sigmoid_value(0.0), 0.5);
  EXPECT_DOUBLE_EQ(hard_tanh_value(0.0), 0.0);
  // 1.2 * sigmoid(x) - 0.1 reaches 1 at sigmoid(x) = 11/12, i.e. x = ln 11.
  EXPECT_NEAR(hard_sigmoid_value(std::log(11.0)), 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(hard_sigmoid_value(10.0), 1.0);
  EXPECT_DOUBLE_EQ(hard_sigmoid_value(-10.0), 0.0);
  EXPECT_DOUBLE_EQ(hard_tanh_value(5.0), 1.0);
  EXPECT_DOUBLE_EQ(hard_tanh_value(-5.0), -1.0);
  EXPECT_DOUBLE_EQ(hard_sigmoid_derivative(10.0), 0.0);
  EXPECT_DOUBLE_EQ(hard_sigmoid_derivative(0.0), 0.3);
  EXPECT_DOUBLE_EQ(hard_tanh_derivative(0.0), 1.2);
  EXPECT_DOUBLE_EQ(hard_tanh_derivative(-5.0), 0.0);
  // Saturation measure: zero near the centre, 1.2 - limit in the far tails.
  EXPECT_DOUBLE_EQ(sigmoid_saturation(0.0, 0.99), 0.0);
  EXPECT_NEAR(sigmoid_saturation(40.0, 0.99), 0.21, 1e-12);
  EXPECT_NEAR(tanh_saturation(-40.0, 0.99), 0.21, 1e-12);
  EXPECT_DOUBLE_EQ(tanh_saturation(0.5, 0.99), 0.0);
  EXPECT_DOUBLE_EQ(relu(Tensor<double>({2}, -1.0))[0], 0.0);
}

TEST(ActivationTest, BackwardMatchesFiniteDifferences) {
  Rng rng(3);
  Tensor<double> x = random_tensor<double>({40}, rng, 4.0);
  const Tensor<double> dy = random_tensor<double>({40}, rng);
  for (int which = 0; which < 2; ++which) {
    SaturationAccumulator acc;
    acc.limit = 0.5;
    auto loss = [&] {
      SaturationAccumulator a;
      a.limit = 0.5;
      const Tensor<double> y = which ? hard_tanh(x, &a) : hard_sigmoid(x, &a);
      return weighted_sum(y, dy) + 0.7 * a.cost() * static_cast<double>(x.size());
    };
    const Tensor<double> g = which ? hard_tanh_backward(x, dy, 0.5, 0.7) : hard_sigmoid_backward(x, dy, 0.5, 0.7);
    check_gradient(x, g, loss, which ? "hard_tanh" : "hard_sigmoid");
  }
}

TEST(SaturationTest, PerSampleMeansThenBatchMean) {
  SaturationAccumulator acc;
  acc.add(1.0, 4);  // sample mean 0.25
  acc.end_sample();
  acc.add(3.0, 2);  // sample mean 1.5
  acc.end_sample();
  EXPECT_DOUBLE_EQ(acc.cost(), (0.25 + 1.5) / 2);
  EXPECT_DOUBLE_EQ(acc.weighted_cost(), 0.001 * 0.875);
  acc.reset();
  EXPECT_DOUBLE_EQ(acc.cost(), 0.0);
}

TEST(SoftmaxTest, ExamplesAndCrossEntropy) {
  Tensor<double> x({2});
  x.data = {0.0, std::log(3.0)};
  const Tensor<double> y = softmax(x, 0);
  EXPECT_NEAR(y[0], 0.25, 1e-15);
  EXPECT_NEAR(y[1], 0.75, 1e-15);
  EXPECT_NEAR(cross_entropy(x, 1), -std::log(0.75), 1e-15);
  const Tensor<double> g = cross_entropy_backward(x, 1);
  EXPECT_NEAR(g[0], 0.25, 1e-15);
  EXPECT_NEAR(g[1], -0.25, 1e-15);
  // Large logits do not overflow.
  x.data = {1000.0, 1000.0};
  EXPECT_NEAR(softmax(x, 0)[0], 0.5, 1e-15);
  EXPECT_NEAR(cross_entropy(x, 0), std::log(2.0), 1e-12);
  // Softmax along the middle axis.
  Tensor<double> m({1, 3, 2}, 0.0);
  const Tensor<double> sm = softmax(m, 1);
  for (double v : sm.data) EXPECT_NEAR(v, 1.0 / 3, 1e-15);

  Rng rng(8);
  Tensor<double> z = random_tensor<double>({2, 4, 3}, rng, 3.0);
  const Tensor<double> dy = random_tensor<double>(z.shape, rng);
  const Tensor<double> gz = softmax_backward(softmax(z, 1), dy, 1);
  check_gradient(z, gz, [&] { return weighted_sum(softmax(z, 1), dy); }, "softmax");
  Tensor<double> logits = random_tensor<double>({5}, rng, 2.0);
  check_gradient(logits, cross_entropy_backward(logits, 3), [&] { return cross_entropy(logits, 3); }, "ce");
  Tensor<double> a = random_tensor<double>({7}, rng), b = random_tensor<double>({7}, rng);
  check_gradient(a, mse_backward(a, b), [&] { return mse(a, b); }, "mse");
}

TEST(AdamTest, FirstStepsMoveByLearningRate) {
  Parameter<double> p({2});
  p.value.data = {1.0, -2.0};
  Adam<double> adam({&p}, AdamOptions{0.1, 0.9, 0.999, 1e-8});
  p.grad.data = {0.5, -3.0};
  adam.step();
  // Bias correction makes the first update lr * sign(g).
  EXPECT_NEAR(p.value[0], 0.9, 1e-7);
  EXPECT_NEAR(p.value[1], -1.9, 1e-7);
  adam.step();  // same gradient again: same unit step
  EXPECT_NEAR(p.value[0], 0.8, 1e-7);
  EXPECT_NEAR(p.value[1], -1.8, 1e-7);
  const double before = p.value[0];
  p.grad.data = {0.0, 0.0};
  adam.step();
  // Moments after a zero gradient, written out from the two earlier steps.
  const double m_hat = 0.5 * (0.1 * 0.9 + 0.1 * 0.81) / (1 - 0.729);
  const double v_hat = 0.25 * (0.001 * 0.999 + 0.001 * 0.998001) / (1 - std::pow(0.999, 3));
  EXPECT_NEAR(p.value[0], before - 0.1 * m_hat / (std::sqrt(v_hat) + 1e-8), 1e-9);
  EXPECT_EQ(adam.steps(), 3);
}

TEST(AdamTest, MaskedEntriesStayZero) {
  Parameter<double> p({3, 3, 1, 1});
  p.set_mask(adjacency_mask<double>(1, 1));
  p.value.fill(1.0);
  p.apply_mask();
  EXPECT_EQ(p.value.at(0, 0, 0, 0), 0.0);
  EXPECT_EQ(p.value.at(0, 1, 0, 0), 1.0);
  Adam<double> adam({&p}, AdamOptions{});
  p.grad.fill(1.0);
  adam.step();
  for (int a : {0, 2}) {
    for (int b : {0, 2}) EXPECT_EQ(p.value.at(a, b, 0, 0), 0.0);
  }
  EXPECT_LT(p.value.at(1, 1, 0, 0), 1.0);
}

// Extracts frame f of a layout matrix as a (W, H, C) tensor.
Tensor<double> frame_tensor(const GridLayout& layout, const Matrix<double>& m, int f) {
  Tensor<double> t({layout.width(f), layout.height(f), static_cast<int>(m.cols())});
  for (int n = 0; n < layout.cells(f); ++n) {
    for (int c = 0; c < m.cols(); ++c) t[static_cast<size_t>(n) * m.cols() + c] = m(layout.begin(f) + n, c);
  }
  return t;
}

Matrix<double> random_matrix(int rows, int cols, Rng& rng) {
  Matrix<double> m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = rng.uniform(-1, 1);
  }
  return m;
}

TEST(KernelTest, TapConvMatchesReference) {
  Rng rng(21);
  const GridLayout layout({{4, 3}, {1, 5}, {6, 6}, {3, 3}});
  const int cin = 3, cout = 4;
  const Matrix<double> x = random_matrix(layout.num_cells(), cin, rng);
  for (int taps : {kernels::kMaskedTaps, kernels::kAllTaps}) {
    Tensor<double> k = random_tensor<double>({3, 3, cin, cout}, rng);
    if (taps == kernels::kMaskedTaps) {
      const Tensor<double> mask = adjacency_mask<double>(cin, cout);
      for (size_t i = 0; i < k.size(); ++i) k[i] *= mask[i];
    }
    const Tensor<double> b = random_tensor<double>({cout}, rng);
    Matrix<double> col;
    kernels::gather_taps(layout, x, taps, col);
    Matrix<double> y = col * kernels::pack_taps(k, taps);
    y.rowwise() += kernels::as_row(b);
    for (int f = 0; f < layout.num_frames(); ++f) {
      const Tensor<double> want = conv2d(frame_tensor(layout, x, f), k, b, 1, 1);
      const Tensor<double> got = frame_tensor(layout, y, f);
      for (size_t i = 0; i < want.size(); ++i) ASSERT_NEAR(got[i], want[i], 1e-12) << "taps " << taps;
    }
    // Interior valid conv.
    Matrix<double> icol;
    kernels::gather_interior_taps(layout, x, icol);
    const Matrix<double> iy = icol * kernels::pack_taps(k, kernels::kAllTaps);
    int row = 0;
    for (int f = 0; f < layout.num_frames(); ++f) {
      if (layout.width(f) < 3 || layout.height(f) < 3) {
        EXPECT_EQ(layout.interior_begin(f + 1) - layout.interior_begin(f), 0);
        continue;
      }
      const Tensor<double> want = conv2d(frame_tensor(layout, x, f), k, Tensor<double>({cout}), 1, 0);
      for (size_t i = 0; i < want.size(); ++i) ASSERT_NEAR(iy(row + i / cout, i % cout), want[i], 1e-12);
      row += static_cast<int>(want.size() / cout);
    }
    EXPECT_EQ(row, static_cast<int>(layout.interior().size()));
  }
}

TEST(KernelTest, ScattersAreAdjointsOfGathers) {
  Rng rng(4);
  const GridLayout layout({{5, 4}, {2, 2}, {3, 7}});
  const int c = 3;
  const Matrix<double> x = random_matrix(layout.num_cells(), c, rng);
  for (int taps : {kernels::kMaskedTaps, kernels::kAllTaps}) {
    Matrix<double> col;
    kernels::gather_taps(layout, x, taps, col);
    const Matrix<double> y = random_matrix(static_cast<int>(col.rows()), static_cast<int>(col.cols()), rng);
    Matrix<double> back = Matrix<double>::Zero(x.rows(), c);
    kernels::scatter_taps_add(layout, y, taps, back);
    EXPECT_NEAR(col.cwiseProduct(y).sum(), x.cwiseProduct(back).sum(), 1e-10);
  }
  Matrix<double> icol;
  kernels::gather_interior_taps(layout, x, icol);
  const Matrix<double> iy = random_matrix(static_cast<int>(icol.rows()), static_cast<int>(icol.cols()), rng);
  Matrix<double> iback = Matrix<double>::Zero(x.rows(), c);
  kernels::scatter_interior_taps_add(layout, iy, iback);
  EXPECT_NEAR(icol.cwiseProduct(iy).sum(), x.cwiseProduct(iback).sum(), 1e-10);
  for (int tap = 0; tap < kernels::kAllTaps; ++tap) {
    Matrix<double> s = Matrix<double>::Zero(x.rows(), c);
    kernels::shift_from(layout, x, tap, 1, 3, s);
    const Matrix<double> y = random_matrix(static_cast<int>(x.rows()), c, rng);
    Matrix<double> back = Matrix<double>::Zero(x.rows(), c);
    kernels::shift_from_backward_add(layout, y, tap, 1, 3, back);
    EXPECT_NEAR(s.cwiseProduct(y).sum(), x.cwiseProduct(back).sum(), 1e-10);
    EXPECT_EQ(back.col(0).norm(), 0.0);
  }
}

TEST(KernelTest, ShiftFromBelowMovesContentUp) {
  const GridLayout layout({{2, 3}});
  Matrix<double> x(6, 1);
  x << 0, 1, 2, 10, 11, 12;  // (w, h) -> 10 w + h
  Matrix<double> s(6, 1);
  kernels::shift_from(layout, x, kernels::kDown, 0, 1, s);
  Matrix<double> want(6, 1);
  want << 1, 2, 0, 11, 12, 0;
  EXPECT_EQ(s, want);
  kernels::shift_from(layout, x, kernels::kLeft, 0, 1, s);
  want << 0, 0, 0, 0, 1, 2;
  EXPECT_EQ(s, want);
}

TEST(KernelTest, PatchRoundTripAndTransposeKernel) {
  Rng rng(9);
  const GridLayout layout({{2, 3}, {3, 1}});
  const int d = 2;
  std::vector<gridworld::Observation> images = {testing::random_observation(2, 3, d, rng),
                                                testing::random_observation(3, 1, d, rng)};
  Matrix<double> patches;
  kernels::images_to_patches(layout, {images[0].pixels.data(), images[1].pixels.data()}, d, patches);
  // Cell (1, 2) of frame 0, patch pixel (a=1, b=0, c=2).
  EXPECT_EQ(patches(1 * 3 + 2, (1 * d + 0) * 3 + 2), images[0].at(1 * d + 1, 2 * d + 0, 2));
  for (int f = 0; f < 2; ++f) {
    gridworld::Observation out(images[f].width_px, images[f].height_px, d);
    kernels::patches_to_image(layout, patches, f, d, out.pixels.data());
    EXPECT_EQ(out, images[f]);
  }
  // Decoder as a matrix product equals the reference transposed conv.
  const int c = 3;
  const Matrix<double> z = random_matrix(layout.num_cells(), c, rng);
  const Tensor<double> k = random_tensor<double>({d, d, c, 3}, rng);
  const Matrix<double> y = z * kernels::pack_transpose_kernel(k);
  for (int f = 0; f < 2; ++f) {
    const Tensor<double> want = conv2d_transpose(frame_tensor(layout, z, f), k, Tensor<double>({3}), d);
    gridworld::Observation out(layout.width(f) * d, layout.height(f) * d, d);
    kernels::patches_to_image(layout, y, f, d, out.pixels.data());
    for (size_t i = 0; i < want.size(); ++i) ASSERT_NEAR(out.pixels[i], want[i], 1e-6);
  }
  Tensor<double> kg(k.shape);
  kernels::unpack_transpose_kernel_add(kernels::pack_transpose_kernel(k), kg);
  EXPECT_EQ(kg, k);
}

}  // namespace
}  // namespace nge
