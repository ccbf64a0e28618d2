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

#include "nge/levelgen/levelgen.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "nge/common/errors.h"
#include "nge/common/rng.h"

namespace nge::levelgen {
namespace {

bool is_edge(const Grid& g, int w, int h) { return w == 0 || h == 0 || w == g.width - 1 || h == g.height - 1; }

}  // namespace

std::vector<double> TileDistribution::sampling_probs() const {
  std::vector<double> out = probs;
  for (TileId t : singleton_tiles) out.at(t) = 0.0;
  const double total = std::accumulate(out.begin(), out.end(), 0.0);
  if (total <= 0.0) throw ValidationError("tile distribution has no non-singleton mass");
  for (double& p : out) p /= total;
  return out;
}

void TileDistribution::validate() const {
  if (probs.empty()) throw ValidationError("tile distribution: empty probs");
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("tile distribution: probability outside [0,1]");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ValidationError("tile distribution: probs do not sum to 1");
  for (TileId t : singleton_tiles) {
    if (t >= probs.size()) throw ValidationError("tile distribution: singleton outside palette");
  }
  if (wall >= probs.size()) throw ValidationError("tile distribution: wall outside palette");
}

void SizeRange::validate() const {
  if (w_min < 3 || h_min < 3 || w_max < w_min || h_max < h_min) {
    throw ValidationError("size range must satisfy 3 <= min <= max");
  }
}

TileDistribution estimate_distribution(std::span<const Grid> levels, TileId wall, int palette_size) {
  if (levels.empty()) throw ValidationError("estimate_distribution: no levels");
  TileDistribution dist;
  dist.wall = wall;
  dist.edge_wall = true;
  for (const Grid& g : levels) {
    for (int w = 0; w < g.width; ++w) {
      for (int h = 0; h < g.height; ++h) {
        if (is_edge(g, w, h) && g.at(w, h) != wall) dist.edge_wall = false;
      }
    }
  }

  std::vector<double> counts(palette_size, 0.0);
  for (const Grid& g : levels) {
    for (int w = 0; w < g.width; ++w) {
      for (int h = 0; h < g.height; ++h) {
        if (dist.edge_wall && is_edge(g, w, h)) continue;
        const TileId t = g.at(w, h);
        if (t >= palette_size) throw ValidationError("estimate_distribution: tile outside palette");
        counts[t] += 1.0;
      }
    }
  }
  const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
  if (total <= 0.0) throw ValidationError("estimate_distribution: levels have no interior cells");
  dist.probs.resize(palette_size);
  for (int t = 0; t < palette_size; ++t) dist.probs[t] = counts[t] / total;

  for (int t = 0; t < palette_size; ++t) {
    const bool once_everywhere = std::all_of(levels.begin(), levels.end(), [t](const Grid& g) {
      return g.count(static_cast<TileId>(t)) == 1;
    });
    if (once_everywhere) dist.singleton_tiles.push_back(static_cast<TileId>(t));
  }
  return dist;
}

Grid generate(const TileDistribution& dist, const SizeRange& range, uint64_t seed) {
  dist.validate();
  range.validate();
  Rng rng(seed);
  const int width = rng.uniform_int(range.w_min, range.w_max);
  const int height = rng.uniform_int(range.h_min, range.h_max);
  Grid grid(width, height, dist.wall);

  std::vector<int> interior;
  for (int w = 0; w < width; ++w) {
    for (int h = 0; h < height; ++h) {
      if (!(dist.edge_wall && is_edge(grid, w, h))) interior.push_back(w * height + h);
    }
  }
  std::vector<TileId> singletons = dist.singleton_tiles;
  std::sort(singletons.begin(), singletons.end());
  if (interior.size() < singletons.size()) {
    throw ValidationError("generate: interior of " + std::to_string(interior.size()) + " cells cannot host " +
                          std::to_string(singletons.size()) + " singleton tiles");
  }

  std::vector<uint8_t> taken(grid.cells.size(), 0);
  for (TileId t : singletons) {
    int cell;
    do {
      cell = interior[rng.uniform_index(interior.size())];
    } while (taken[cell]);
    taken[cell] = 1;
    grid.cells[cell] = t;
  }

  const std::vector<double> probs = dist.sampling_probs();
  std::vector<double> cumulative(probs.size());
  std::partial_sum(probs.begin(), probs.end(), cumulative.begin());
  for (int cell : interior) {
    if (taken[cell]) continue;
    const double u = rng.uniform();
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    size_t t = static_cast<size_t>(it - cumulative.begin());
    if (t == probs.size()) {
      // u landed past a cumulative sum that rounded below 1.
      t = probs.size() - 1;
      while (probs[t] == 0.0) --t;
    }
    grid.cells[cell] = static_cast<TileId>(t);
  }
  return grid;
}

}  // namespace nge::levelgen
