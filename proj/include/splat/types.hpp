// Copyright Contributors to the splatops Project
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "splat/common.hpp"

namespace splat {

inline constexpr int kMaxRestCoeffs = 45;  // 15 per channel, degree 3
inline constexpr int kShCoeffSlots = 16;   // (3+1)^2

// Storage-layout gaussian: exactly the float32 fields of one PLY vertex, in
// file order. Kept verbatim so survivors of any edit round-trip byte-exact.
struct RawGaussian {
  std::array<float, 3> position{};
  std::array<float, 3> normal{};
  std::array<float, 3> f_dc{};
  std::array<float, kMaxRestCoeffs> f_rest{};  // first Scene::rest_count used
  float opacity_logit = 0.0f;
  std::array<float, 3> log_scale{};
  std::array<float, 4> quat{};  // wxyz, unnormalized on disk
};

// Working-precision gaussian. All rendering and pruning math reads these.
struct Gaussian {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  // sh(c, k): channel c, coefficient k. Column 0 is the DC term; columns
  // 1..m follow the file's channel-major rest block. Unused columns are zero.
  Eigen::Matrix<double, 3, kShCoeffSlots> sh =
      Eigen::Matrix<double, 3, kShCoeffSlots>::Zero();
  double opacity = 0.0;                      // in (0, 1)
  Eigen::Vector3d scale = Eigen::Vector3d::Ones();  // per-axis stddev, > 0
  Eigen::Quaterniond rotation = Eigen::Quaterniond::Identity();  // unit norm
};

// Pinhole camera. `rotation` is camera-to-world; `position` is the camera
// center in world coordinates. Principal point is the image center.
struct Camera {
  int id = 0;
  std::string image_name;
  int width = 0;
  int height = 0;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  double fx = 0.0;
  double fy = 0.0;
};

// Gaussian cloud plus the SH layout shared by every member. `raw` and
// `gaussians` stay index-aligned; edits must touch both.
struct Scene {
  std::vector<RawGaussian> raw;
  std::vector<Gaussian> gaussians;
  int rest_count = kMaxRestCoeffs;  // total f_rest floats, multiple of 3
  std::string source_path;          // optional provenance, empty if in-memory

  std::size_t size() const { return gaussians.size(); }
  int rest_per_channel() const { return rest_count / 3; }
  // Smallest degree whose coefficient count covers 1 + rest_per_channel().
  int sh_degree() const;
};

// opacity = sigmoid(logit) clamped into the open interval, scale = exp,
// rotation = quat / |quat|. Throws on non-finite input or zero-norm quat.
Gaussian activate(const RawGaussian& raw, int rest_count);

// Inverse of activate up to float32 rounding.
RawGaussian deactivate(const Gaussian& g, int rest_count);

// Builds the index-aligned activated view. Throws if rest_count is negative,
// above kMaxRestCoeffs, or not a multiple of 3.
Scene make_scene(std::vector<RawGaussian> raw, int rest_count);

// Appends an activated gaussian, deriving its raw storage.
void append_gaussian(Scene& scene, const Gaussian& g);

// Removes the listed indices (any order, duplicates allowed). Survivors keep
// their relative order and exact raw bytes.
void remove_gaussians(Scene& scene, const std::vector<std::int32_t>& indices);

}  // namespace splat
