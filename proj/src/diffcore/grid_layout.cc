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

#include "nge/diffcore/kernels.h"

namespace nge::kernels {

GridLayout::GridLayout(const std::vector<std::pair<int, int>>& extents) {
  begins_.push_back(0);
  interior_begins_.push_back(0);
  for (const auto& [w, h] : extents) {
    if (w < 1 || h < 1) throw ShapeError("grid layout: empty frame");
    widths_.push_back(w);
    heights_.push_back(h);
    begins_.push_back(begins_.back() + w * h);
  }
  const int total = begins_.back();
  frame_of_.resize(total);
  neighbors_.assign(static_cast<size_t>(total) * kAllTaps, -1);
  for (int f = 0; f < num_frames(); ++f) {
    const int w_n = widths_[f], h_n = heights_[f], base = begins_[f];
    for (int w = 0; w < w_n; ++w) {
      for (int h = 0; h < h_n; ++h) {
        const int cell = base + w * h_n + h;
        frame_of_[cell] = f;
        for (int t = 0; t < kAllTaps; ++t) {
          const int nw = w + kTapOffsets[t].first, nh = h + kTapOffsets[t].second;
          if (nw >= 0 && nh >= 0 && nw < w_n && nh < h_n)
            neighbors_[static_cast<size_t>(cell) * kAllTaps + t] = base + nw * h_n + nh;
        }
        if (w > 0 && h > 0 && w < w_n - 1 && h < h_n - 1) interior_.push_back(cell);
      }
    }
    interior_begins_.push_back(static_cast<int>(interior_.size()));
  }
}

}  // namespace nge::kernels
