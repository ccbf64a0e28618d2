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

#ifndef NGE_LEVELGEN_LEVELGEN_H_
#define NGE_LEVELGEN_LEVELGEN_H_

#include <cstdint>
#include <span>
#include <vector>

#include "nge/gridworld/gridworld.h"

namespace nge::levelgen {

using gridworld::Grid;
using gridworld::TileId;

// Placement statistics estimated from hand-built levels.
struct TileDistribution {
  // Empirical frequency of each tile over interior cells (all cells when
  // edge_wall is false). Indexed by TileId; sums to 1.
  std::vector<double> probs;
  bool edge_wall = false;
  TileId wall = 0;
  // Tiles that appear exactly once in every source level.
  std::vector<TileId> singleton_tiles;

  // probs with singleton tiles removed and the remainder renormalized: the
  // i.i.d. distribution used for interior cells.
  std::vector<double> sampling_probs() const;
  void validate() const;
};

struct SizeRange {
  int w_min = 6;
  int w_max = 12;
  int h_min = 6;
  int h_max = 12;

  void validate() const;
};

TileDistribution estimate_distribution(std::span<const Grid> levels, TileId wall, int palette_size);

// W and H uniform in range, edge walls when required, each singleton placed
// once (in TileId order, redrawing occupied cells), then the remaining
// interior cells drawn i.i.d. from sampling_probs().
Grid generate(const TileDistribution& dist, const SizeRange& range, uint64_t seed);

}  // namespace nge::levelgen

#endif  // NGE_LEVELGEN_LEVELGEN_H_
