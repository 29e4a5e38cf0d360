// Copyright Contributors to the splatops Project
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <utility>
#include <vector>

#include "splat/image_io.hpp"
#include "splat/projection.hpp"
#include "splat/types.hpp"

namespace splat {

// Contributions below this alpha are skipped.
inline constexpr double kAlphaMin = 1.0 / 255.0;
// Compositing stops, without blending the candidate, once the remaining
// transmittance would drop below this.
inline constexpr double kTerminationT = 1e-4;

struct RenderOptions {
  int tile_size = 16;
  Eigen::Vector3d background = Eigen::Vector3d::Zero();  // channels in [0,1]
};

// Color, both depth renders, and the per-pixel blending records the floater
// pruner replays. Pixel buffers are row-major, top row first.
struct RenderOutput {
  int width = 0;
  int height = 0;
  std::vector<double> color;        // H*W*3, includes the background term
  std::vector<double> d_alpha;      // H*W, unnormalized sum of w_i * depth_i
  std::vector<double> d_mode;       // H*W, depth of the argmax-w_i gaussian
  std::vector<double> final_T;      // H*W, transmittance left after blending
  std::vector<double> weight_sum;   // H*W, sum of w_i (= 1 - final_T)
  std::vector<double> mode_weight;  // H*W, max w_i, 0 when no contributor

  // Per-pixel (first contributor, argmax contributor) as absolute indices
  // into point_list; (-1,-1) when nothing contributed. Ties in the argmax
  // resolve to the smaller blend index.
  std::vector<std::pair<std::int32_t, std::int32_t>> mode_range;

  // Depth-sorted gaussian ids, concatenated tile by tile (one global span
  // for reference_render). Sort key is (camera-space z, id).
  std::vector<std::int32_t> point_list;

  std::vector<Projected2D> projected;         // survivors of projection
  std::vector<std::int32_t> projected_index;  // gaussian id -> index, or -1

  int tile_size = 0;  // 0 means a single global point_list span
  int tiles_x = 0;
  int tiles_y = 0;
  std::vector<std::pair<std::int32_t, std::int32_t>> tile_ranges;  // [begin,end)

  std::size_t pixel_index(int row, int col) const {
    return static_cast<std::size_t>(row) * width + col;
  }
  // The point_list span a pixel's compositor walked.
  std::pair<std::int32_t, std::int32_t> pixel_tile_range(int row,
                                                         int col) const;
  const Projected2D* projected_for(std::int32_t gaussian_id) const;

  Image color_image() const;
  Grid d_alpha_grid() const;
  Grid d_mode_grid() const;
};

// Tile-based forward splatter. Front-to-back over (depth, id)-sorted
// gaussians per tile; per-pixel alpha = min(0.99, opacity e^{-q/2}) inside
// the q <= 9 support window, skipped below kAlphaMin; stops when the
// post-blend transmittance would fall below kTerminationT. Deterministic.
RenderOutput render(const Scene& scene, const Camera& cam,
                    const RenderOptions& opts = {});

// Oracle: identical per-pixel math over one globally sorted list, no tiling
// and no screen-extent culling. O(gaussians * pixels).
RenderOutput reference_render(const Scene& scene, const Camera& cam,
                              const RenderOptions& opts = {});

}  // namespace splat
