// Copyright Contributors to the splatops Project
// SPDX-License-Identifier: Apache-2.0
#include "splat/rasterizer.hpp"

#include <algorithm>
#include <cmath>

#include "splat/common.hpp"

namespace splat {
namespace {

void validate(const Camera& cam, const RenderOptions& opts) {
  if (cam.width <= 0 || cam.height <= 0)
    throw Error("render requires positive image dimensions");
  if (!(cam.fx > 0.0) || !(cam.fy > 0.0))
    throw Error("render requires positive focal lengths");
  if (opts.tile_size < 1) throw Error("tile_size must be >= 1");
  for (int c = 0; c < 3; ++c) {
    if (!std::isfinite(opts.background[c]) || opts.background[c] < 0.0 ||
        opts.background[c] > 1.0)
      throw Error("background channels must be finite and in [0, 1]");
  }
}

RenderOutput make_output(const Camera& cam) {
  RenderOutput out;
  out.width = cam.width;
  out.height = cam.height;
  const std::size_t pixels =
      static_cast<std::size_t>(cam.width) * cam.height;
  out.color.assign(pixels * 3, 0.0);
  out.d_alpha.assign(pixels, 0.0);
  out.d_mode.assign(pixels, 0.0);
  out.final_T.assign(pixels, 1.0);
  out.weight_sum.assign(pixels, 0.0);
  out.mode_weight.assign(pixels, 0.0);
  out.mode_range.assign(pixels, {-1, -1});
  return out;
}

// Front-to-back compositing of one pixel over point_list[begin, end).
// The single compositor both render paths share: their agreement then rests
// only on feeding equivalent candidate sequences.
void composite_pixel(RenderOutput& out, const RenderOptions& opts, int row,
                     int col, std::int32_t begin, std::int32_t end) {
  const double cx = col + 0.5;
  const double cy = row + 0.5;
  const std::size_t px = out.pixel_index(row, col);

  double transmittance = 1.0;
  double rgb[3] = {0.0, 0.0, 0.0};
  double depth_sum = 0.0;
  double weight_sum = 0.0;
  std::int32_t first = -1;
  std::int32_t mode = -1;
  double mode_weight = 0.0;
  double mode_depth = 0.0;

  for (std::int32_t k = begin; k < end; ++k) {
    const Projected2D& p =
        out.projected[static_cast<std::size_t>(
            out.projected_index[static_cast<std::size_t>(out.point_list[
                static_cast<std::size_t>(k)])])];
    const double alpha = test_alpha(p, cx, cy);
    if (alpha < kAlphaMin) continue;
    const double next_T = transmittance * (1.0 - alpha);
    if (next_T < kTerminationT) break;  // candidate is not blended

    const double w = transmittance * alpha;
    if (first < 0) first = k;
    if (w > mode_weight) {  // strict: ties keep the earlier blend index
      mode_weight = w;
      mode = k;
      mode_depth = p.depth;
    }
    for (int c = 0; c < 3; ++c) rgb[c] += w * p.color[c];
    depth_sum += w * p.depth;
    weight_sum += w;
    transmittance = next_T;
  }

  for (int c = 0; c < 3; ++c)
    out.color[px * 3 + c] = rgb[c] + transmittance * opts.background[c];
  out.d_alpha[px] = depth_sum;
  out.d_mode[px] = mode >= 0 ? mode_depth : 0.0;
  out.final_T[px] = transmittance;
  out.weight_sum[px] = weight_sum;
  out.mode_weight[px] = mode_weight;
  out.mode_range[px] = {first, mode};
}

void project_scene(const Scene& scene, const Camera& cam, bool cull_extent,
                   RenderOutput& out) {
  out.projected_index.assign(scene.size(), -1);
  const int degree = scene.sh_degree();
  for (std::size_t i = 0; i < scene.size(); ++i) {
    auto p = project_gaussian(scene.gaussians[i], cam,
                              static_cast<std::int32_t>(i), degree,
                              cull_extent);
    if (!p) continue;
    out.projected_index[i] = static_cast<std::int32_t>(out.projected.size());
    out.projected.push_back(*p);
  }
}

// (depth, id) ordering of projected entries; ids are unique so this is a
// strict total order and the sort is deterministic.
bool depth_then_id(const Projected2D& lhs, const Projected2D& rhs) {
  if (lhs.depth != rhs.depth) return lhs.depth < rhs.depth;
  return lhs.gaussian_id < rhs.gaussian_id;
}

}  // namespace

std::pair<std::int32_t, std::int32_t> RenderOutput::pixel_tile_range(
    int row, int col) const {
  if (row < 0 || row >= height || col < 0 || col >= width)
    throw Error("pixel out of range");
  if (tile_size <= 0) return tile_ranges.empty() ? std::pair<std::int32_t,
      std::int32_t>{0, 0} : tile_ranges[0];
  const std::size_t tile =
      static_cast<std::size_t>(row / tile_size) * tiles_x + col / tile_size;
  return tile_ranges[tile];
}

const Projected2D* RenderOutput::projected_for(
    std::int32_t gaussian_id) const {
  if (gaussian_id < 0 ||
      static_cast<std::size_t>(gaussian_id) >= projected_index.size())
    return nullptr;
  const std::int32_t idx =
      projected_index[static_cast<std::size_t>(gaussian_id)];
  return idx < 0 ? nullptr : &projected[static_cast<std::size_t>(idx)];
}

Image RenderOutput::color_image() const {
  Image image = make_image(width, height);
  image.rgb = color;
  return image;
}

Grid RenderOutput::d_alpha_grid() const {
  return Grid{width, height, d_alpha};
}

Grid RenderOutput::d_mode_grid() const { return Grid{width, height, d_mode}; }

RenderOutput render(const Scene& scene, const Camera& cam,
                    const RenderOptions& opts) {
  validate(cam, opts);
  RenderOutput out = make_output(cam);
  project_scene(scene, cam, /*cull_extent=*/true, out);

  const int tile = opts.tile_size;
  out.tile_size = tile;
  out.tiles_x = (cam.width + tile - 1) / tile;
  out.tiles_y = (cam.height + tile - 1) / tile;
  const std::size_t tile_count =
      static_cast<std::size_t>(out.tiles_x) * out.tiles_y;

  // Bin projected gaussians into every tile their dilated 3 sigma box
  // touches; a superset of the q <= 9 support, so binning never changes
  // pixel results.
  std::vector<std::vector<std::int32_t>> bins(tile_count);
  for (std::int32_t idx = 0;
       idx < static_cast<std::int32_t>(out.projected.size()); ++idx) {
    const Projected2D& p = out.projected[static_cast<std::size_t>(idx)];
    const int x0 = std::clamp(
        static_cast<int>(std::floor((p.mean2d.x() - p.radius) / tile)), 0,
        out.tiles_x - 1);
    const int x1 = std::clamp(
        static_cast<int>(std::floor((p.mean2d.x() + p.radius) / tile)), 0,
        out.tiles_x - 1);
    const int y0 = std::clamp(
        static_cast<int>(std::floor((p.mean2d.y() - p.radius) / tile)), 0,
        out.tiles_y - 1);
    const int y1 = std::clamp(
        static_cast<int>(std::floor((p.mean2d.y() + p.radius) / tile)), 0,
        out.tiles_y - 1);
    for (int ty = y0; ty <= y1; ++ty)
      for (int tx = x0; tx <= x1; ++tx)
        bins[static_cast<std::size_t>(ty) * out.tiles_x + tx].push_back(idx);
  }

  out.tile_ranges.resize(tile_count);
  for (std::size_t t = 0; t < tile_count; ++t) {
    std::vector<std::int32_t>& bin = bins[t];
    std::sort(bin.begin(), bin.end(), [&](std::int32_t lhs, std::int32_t rhs) {
      return depth_then_id(out.projected[static_cast<std::size_t>(lhs)],
                           out.projected[static_cast<std::size_t>(rhs)]);
    });
    const std::int32_t begin = static_cast<std::int32_t>(out.point_list.size());
    for (std::int32_t idx : bin)
      out.point_list.push_back(
          out.projected[static_cast<std::size_t>(idx)].gaussian_id);
    out.tile_ranges[t] = {begin,
                          static_cast<std::int32_t>(out.point_list.size())};
  }

  for (int ty = 0; ty < out.tiles_y; ++ty) {
    for (int tx = 0; tx < out.tiles_x; ++tx) {
      const auto [begin, end] =
          out.tile_ranges[static_cast<std::size_t>(ty) * out.tiles_x + tx];
      const int row_end = std::min(cam.height, (ty + 1) * tile);
      const int col_end = std::min(cam.width, (tx + 1) * tile);
      for (int row = ty * tile; row < row_end; ++row)
        for (int col = tx * tile; col < col_end; ++col)
          composite_pixel(out, opts, row, col, begin, end);
    }
  }
  return out;
}

RenderOutput reference_render(const Scene& scene, const Camera& cam,
                              const RenderOptions& opts) {
  validate(cam, opts);
  RenderOutput out = make_output(cam);
  project_scene(scene, cam, /*cull_extent=*/false, out);

  std::vector<std::int32_t> order(out.projected.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    order[i] = static_cast<std::int32_t>(i);
  std::sort(order.begin(), order.end(), [&](std::int32_t lhs, std::int32_t rhs) {
    return depth_then_id(out.projected[static_cast<std::size_t>(lhs)],
                         out.projected[static_cast<std::size_t>(rhs)]);
  });
  for (std::int32_t idx : order)
    out.point_list.push_back(
        out.projected[static_cast<std::size_t>(idx)].gaussian_id);

  out.tile_size = 0;
  out.tiles_x = 1;
  out.tiles_y = 1;
  out.tile_ranges = {{0, static_cast<std::int32_t>(out.point_list.size())}};

  for (int row = 0; row < cam.height; ++row)
    for (int col = 0; col < cam.width; ++col)
      composite_pixel(out, opts, row, col, 0,
                      static_cast<std::int32_t>(out.point_list.size()));
  return out;
}

}  // namespace splat
