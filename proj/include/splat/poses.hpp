// Copyright Contributors to the splatops Project
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "splat/types.hpp"

namespace splat {

struct ThetaRange {
  double min_deg = -10.0;
  double max_deg = 10.0;
};

// Novel-pose sampling plan around the estimated scene axis.
struct PoseSampler {
  Eigen::Vector3d y_bar = Eigen::Vector3d::UnitY();  // unit axis
  ThetaRange theta_range;
  std::uint64_t seed = 0;
  Eigen::Vector3d center = Eigen::Vector3d::Zero();  // rotation center
};

// The camera's contribution to the scene axis: column `column` of its
// rotation. Column 0 is the convention used here; 1 selects the
// conventional image-up column for datasets that need it.
Eigen::Vector3d up_vector(const Camera& cam, int column = 0);

// Normalized mean of up_vector over the cameras. Throws when the mean norm
// falls under 1e-6 (up-vectors cancel).
Eigen::Vector3d estimate_axis(const std::vector<Camera>& cameras,
                              int column = 0);

// Rotates the camera center about `axis` through `center` by theta degrees
// (standard Rodrigues, axis cross vector) and composes the same rotation
// onto the camera orientation, so it keeps facing the scene. Intrinsics are
// untouched. Throws when the axis is not unit within 1e-6.
Camera rotate_pose(const Camera& cam, const Eigen::Vector3d& axis,
                   double theta_deg,
                   const Eigen::Vector3d& center = Eigen::Vector3d::Zero());

// k poses: camera i % count rotated by theta ~ Uniform[range) drawn from the
// sampler's seed. Deterministic.
std::vector<Camera> sample_novel_poses(const std::vector<Camera>& cameras,
                                       const PoseSampler& sampler, int k);

}  // namespace splat
