// Copyright Contributors to the splatops Project
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "splat/common.hpp"

namespace splat {

// Row-major scalar grid, top row first. Shared by depth maps and loss maps.
struct Grid {
  int width = 0;
  int height = 0;
  std::vector<double> values;  // height * width

  double at(int row, int col) const {
    return values[static_cast<std::size_t>(row) * width + col];
  }
  double& at(int row, int col) {
    return values[static_cast<std::size_t>(row) * width + col];
  }
};

Grid make_grid(int width, int height, double fill = 0.0);

// Row-major interleaved RGB image, values in [0, 1], top row first.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<double> rgb;  // height * width * 3

  double at(int row, int col, int channel) const {
    return rgb[(static_cast<std::size_t>(row) * width + col) * 3 + channel];
  }
  double& at(int row, int col, int channel) {
    return rgb[(static_cast<std::size_t>(row) * width + col) * 3 + channel];
  }
};

Image make_image(int width, int height);

// Whether a depth grid carries unit-free model output or scene distances.
// Scene-anchored grids must be non-negative.
enum class ScaleConvention { kMonocularRelative, kSceneAnchored };

struct DepthMapFile {
  int width = 0;
  int height = 0;
  std::vector<double> values;  // row-major, top row first
  ScaleConvention scale_convention = ScaleConvention::kMonocularRelative;

  Grid grid() const { return Grid{width, height, values}; }
};

// Grayscale PFM ("Pf"). The scale sign selects payload endianness; rows are
// stored bottom-to-top in the file and returned top-row-first. Non-finite
// values are rejected, as are negative values under kSceneAnchored.
DepthMapFile read_depth_pfm(
    const std::string& path,
    ScaleConvention convention = ScaleConvention::kMonocularRelative);

// Little-endian grayscale PFM (scale -1).
void write_pfm(const Grid& grid, const std::string& path);

// 8-bit RGB PNG; values clamped to [0, 1] and rounded to the nearest level.
void write_png_rgb8(const Image& image, const std::string& path);

// 8-bit grayscale PNG from bytes, row-major top row first.
void write_png_gray8(const std::vector<std::uint8_t>& pixels, int width,
                     int height, const std::string& path);

// Reads an 8- or 16-bit PNG into [0, 1] RGB; grayscale is replicated across
// channels and alpha is dropped.
Image read_png(const std::string& path);

// Bilinear resample onto a width x height grid. Sample points are pixel
// centers mapped proportionally, clamped at the borders.
Grid resample_bilinear(const Grid& grid, int width, int height);

}  // namespace splat
