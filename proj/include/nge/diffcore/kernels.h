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

#ifndef NGE_DIFFCORE_KERNELS_H_
#define NGE_DIFFCORE_KERNELS_H_

// Batched kernels over a set of variably sized tile grids. Every grid cell
// of every frame is one row of a (cells x channels) matrix; the cell order
// inside a frame matches Tensor (W, H, C) row-major order, so a frame's rows
// are exactly the data of its latent tensor. Loops are OpenMP-parallel over
// cells; matrix products go through Eigen.

#include <algorithm>
#include <array>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "nge/common/errors.h"
#include "nge/diffcore/tensor.h"

namespace nge::kernels {

template <typename T>
using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using RowVector = Eigen::Matrix<T, 1, Eigen::Dynamic>;

// 3x3 neighbourhood taps. The first five are the edge-adjacent set kept by
// the masked kernels, so a 5-tap im2col is a column prefix of a 9-tap one.
enum Tap : int { kCenter = 0, kUp, kDown, kLeft, kRight, kUpLeft, kUpRight, kDownLeft, kDownRight };
inline constexpr int kMaskedTaps = 5;
inline constexpr int kAllTaps = 9;
inline constexpr std::array<std::pair<int, int>, kAllTaps> kTapOffsets = {
    {{0, 0}, {0, -1}, {0, 1}, {-1, 0}, {1, 0}, {-1, -1}, {1, -1}, {-1, 1}, {1, 1}}};
inline constexpr std::array<int, kAllTaps> kOppositeTap = {0, 2, 1, 4, 3, 8, 7, 6, 5};

class GridLayout {
 public:
  GridLayout() = default;
  explicit GridLayout(const std::vector<std::pair<int, int>>& extents);

  int num_frames() const { return static_cast<int>(widths_.size()); }
  int num_cells() const { return begins_.empty() ? 0 : begins_.back(); }
  int width(int f) const { return widths_[f]; }
  int height(int f) const { return heights_[f]; }
  int begin(int f) const { return begins_[f]; }
  int cells(int f) const { return begins_[f + 1] - begins_[f]; }
  int frame_of(int cell) const { return frame_of_[cell]; }

  // Global row of the neighbour at tap, or -1 outside the frame.
  int neighbor(int cell, int tap) const { return neighbors_[static_cast<size_t>(cell) * kAllTaps + tap]; }

  // Cells whose full 3x3 neighbourhood lies inside their frame, grouped by
  // frame; frame f owns interior()[interior_begin(f) .. interior_begin(f+1)).
  const std::vector<int>& interior() const { return interior_; }
  int interior_begin(int f) const { return interior_begins_[f]; }

  bool operator==(const GridLayout& o) const { return widths_ == o.widths_ && heights_ == o.heights_; }

 private:
  std::vector<int> widths_, heights_, begins_, frame_of_, neighbors_, interior_, interior_begins_;
};

// col[n, t*C + c] = src[neighbor(n, t), c], zero outside.
template <typename T>
void gather_taps(const GridLayout& layout, const Matrix<T>& src, int taps, Matrix<T>& col) {
  const int n_cells = layout.num_cells();
  const int c = static_cast<int>(src.cols());
  col.resize(n_cells, static_cast<Eigen::Index>(taps) * c);
#pragma omp parallel for schedule(static)
  for (int n = 0; n < n_cells; ++n) {
    T* dst = col.row(n).data();
    for (int t = 0; t < taps; ++t) {
      const int nb = layout.neighbor(n, t);
      if (nb < 0) {
        std::fill_n(dst + t * c, c, T(0));
      } else {
        std::copy_n(src.row(nb).data(), c, dst + t * c);
      }
    }
  }
}

// Adjoint of gather_taps, accumulated into dsrc.
template <typename T>
void scatter_taps_add(const GridLayout& layout, const Matrix<T>& dcol, int taps, Matrix<T>& dsrc) {
  const int n_cells = layout.num_cells();
  const int c = static_cast<int>(dsrc.cols());
#pragma omp parallel for schedule(static)
  for (int m = 0; m < n_cells; ++m) {
    T* dst = dsrc.row(m).data();
    for (int t = 0; t < taps; ++t) {
      // m is tap t of cell n exactly when n is tap opposite(t) of m.
      const int n = layout.neighbor(m, kOppositeTap[t]);
      if (n < 0) continue;
      const T* g = dcol.row(n).data() + t * c;
      for (int k = 0; k < c; ++k) dst[k] += g[k];
    }
  }
}

// dst[n, c] = src[neighbor(n, tap), c] for c in [c_begin, c_end), zero
// outside. Reading from the cell below (tap kDown) moves content up.
template <typename T>
void shift_from(const GridLayout& layout, const Matrix<T>& src, int tap, int c_begin, int c_end, Matrix<T>& dst) {
  const int n_cells = layout.num_cells();
  const int len = c_end - c_begin;
#pragma omp parallel for schedule(static)
  for (int n = 0; n < n_cells; ++n) {
    const int nb = layout.neighbor(n, tap);
    T* out = dst.row(n).data() + c_begin;
    if (nb < 0) {
      std::fill_n(out, len, T(0));
    } else {
      std::copy_n(src.row(nb).data() + c_begin, len, out);
    }
  }
}

// Adjoint of shift_from, accumulated into dsrc.
template <typename T>
void shift_from_backward_add(const GridLayout& layout, const Matrix<T>& ddst, int tap, int c_begin, int c_end,
                             Matrix<T>& dsrc) {
  const int n_cells = layout.num_cells();
#pragma omp parallel for schedule(static)
  for (int m = 0; m < n_cells; ++m) {
    const int n = layout.neighbor(m, kOppositeTap[tap]);
    if (n < 0) continue;
    const T* g = ddst.row(n).data();
    T* out = dsrc.row(m).data();
    for (int k = c_begin; k < c_end; ++k) out[k] += g[k];
  }
}

// Full 3x3 neighbourhoods of interior cells only (valid convolution).
template <typename T>
void gather_interior_taps(const GridLayout& layout, const Matrix<T>& src, Matrix<T>& col) {
  const auto& interior = layout.interior();
  const int m = static_cast<int>(interior.size());
  const int c = static_cast<int>(src.cols());
  col.resize(m, static_cast<Eigen::Index>(kAllTaps) * c);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < m; ++i) {
    T* dst = col.row(i).data();
    for (int t = 0; t < kAllTaps; ++t) {
      std::copy_n(src.row(layout.neighbor(interior[i], t)).data(), c, dst + t * c);
    }
  }
}

// Serial: interior neighbourhoods overlap, so the scatter is not race-free.
template <typename T>
void scatter_interior_taps_add(const GridLayout& layout, const Matrix<T>& dcol, Matrix<T>& dsrc) {
  const auto& interior = layout.interior();
  const int c = static_cast<int>(dsrc.cols());
  for (size_t i = 0; i < interior.size(); ++i) {
    const T* g = dcol.row(static_cast<Eigen::Index>(i)).data();
    for (int t = 0; t < kAllTaps; ++t) {
      T* out = dsrc.row(layout.neighbor(interior[i], t)).data();
      for (int k = 0; k < c; ++k) out[k] += g[t * c + k];
    }
  }
}

// Packs a (3, 3, C_in, C_out) kernel into a (taps * C_in, C_out) matrix in
// tap order, matching gather_taps columns.
template <typename T>
Matrix<T> pack_taps(const Tensor<T>& kernel, int taps) {
  const int c_in = kernel.dim(2), c_out = kernel.dim(3);
  Matrix<T> out(static_cast<Eigen::Index>(taps) * c_in, c_out);
  for (int t = 0; t < taps; ++t) {
    const int a = kTapOffsets[t].first + 1, b = kTapOffsets[t].second + 1;
    for (int i = 0; i < c_in; ++i) {
      for (int o = 0; o < c_out; ++o) out(t * c_in + i, o) = kernel.at(a, b, i, o);
    }
  }
  return out;
}

template <typename T>
void unpack_taps_add(const Matrix<T>& packed, int taps, Tensor<T>& kernel_grad) {
  const int c_in = kernel_grad.dim(2), c_out = kernel_grad.dim(3);
  for (int t = 0; t < taps; ++t) {
    const int a = kTapOffsets[t].first + 1, b = kTapOffsets[t].second + 1;
    for (int i = 0; i < c_in; ++i) {
      for (int o = 0; o < c_out; ++o) kernel_grad.at(a, b, i, o) += packed(t * c_in + i, o);
    }
  }
}

// Row-major (k, k, C_in, C_out) kernel viewed as a (k*k*C_in, C_out) matrix.
template <typename T>
Eigen::Map<const Matrix<T>> as_matrix(const Tensor<T>& kernel) {
  const int rows = static_cast<int>(kernel.size() / kernel.shape.back());
  return Eigen::Map<const Matrix<T>>(kernel.data.data(), rows, kernel.shape.back());
}

template <typename T>
Eigen::Map<Matrix<T>> as_matrix(Tensor<T>& kernel) {
  const int rows = static_cast<int>(kernel.size() / kernel.shape.back());
  return Eigen::Map<Matrix<T>>(kernel.data.data(), rows, kernel.shape.back());
}

template <typename T>
Eigen::Map<const RowVector<T>> as_row(const Tensor<T>& bias) {
  return Eigen::Map<const RowVector<T>>(bias.data.data(), static_cast<Eigen::Index>(bias.size()));
}

template <typename T>
Eigen::Map<RowVector<T>> as_row(Tensor<T>& bias) {
  return Eigen::Map<RowVector<T>>(bias.data.data(), static_cast<Eigen::Index>(bias.size()));
}

// Decoder kernel (D, D, C, 3) as a (C, D*D*3) matrix whose columns follow the
// patch pixel order (a * D + b) * 3 + c.
template <typename T>
Matrix<T> pack_transpose_kernel(const Tensor<T>& kernel) {
  const int d = kernel.dim(0), c_in = kernel.dim(2), c_out = kernel.dim(3);
  Matrix<T> out(c_in, d * d * c_out);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      for (int i = 0; i < c_in; ++i) {
        for (int o = 0; o < c_out; ++o) out(i, (a * d + b) * c_out + o) = kernel.at(a, b, i, o);
      }
    }
  }
  return out;
}

template <typename T>
void unpack_transpose_kernel_add(const Matrix<T>& packed, Tensor<T>& kernel_grad) {
  const int d = kernel_grad.dim(0), c_in = kernel_grad.dim(2), c_out = kernel_grad.dim(3);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      for (int i = 0; i < c_in; ++i) {
        for (int o = 0; o < c_out; ++o) kernel_grad.at(a, b, i, o) += packed(i, (a * d + b) * c_out + o);
      }
    }
  }
}

// Pixel images <-> per-cell patch rows. Image f has extents
// (width(f) * D, height(f) * D, 3) in Observation layout.
template <typename T>
void images_to_patches(const GridLayout& layout, const std::vector<const float*>& images, int tile,
                       Matrix<T>& patches) {
  const int p = tile * tile * 3;
  patches.resize(layout.num_cells(), p);
#pragma omp parallel for schedule(static)
  for (int n = 0; n < layout.num_cells(); ++n) {
    const int f = layout.frame_of(n);
    const int local = n - layout.begin(f);
    const int h_tiles = layout.height(f);
    const int w = local / h_tiles, h = local % h_tiles;
    const int h_px = h_tiles * tile;
    const float* img = images[f];
    T* dst = patches.row(n).data();
    for (int a = 0; a < tile; ++a) {
      const float* src = img + (static_cast<size_t>(w * tile + a) * h_px + h * tile) * 3;
      for (int k = 0; k < tile * 3; ++k) dst[a * tile * 3 + k] = static_cast<T>(src[k]);
    }
  }
}

template <typename T>
void patches_to_image(const GridLayout& layout, const Matrix<T>& patches, int frame, int tile, float* image) {
  const int h_tiles = layout.height(frame);
  const int h_px = h_tiles * tile;
  for (int local = 0; local < layout.cells(frame); ++local) {
    const int w = local / h_tiles, h = local % h_tiles;
    const T* src = patches.row(layout.begin(frame) + local).data();
    for (int a = 0; a < tile; ++a) {
      float* dst = image + (static_cast<size_t>(w * tile + a) * h_px + h * tile) * 3;
      for (int k = 0; k < tile * 3; ++k) dst[k] = static_cast<float>(src[a * tile * 3 + k]);
    }
  }
}

}  // namespace nge::kernels

#endif  // NGE_DIFFCORE_KERNELS_H_
