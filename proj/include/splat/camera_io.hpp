// Copyright Contributors to the splatops Project
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "splat/types.hpp"

namespace splat {

// JSON array of camera objects with keys id, img_name, width, height,
// position (3 numbers), rotation (3 rows of 3, camera-to-world), fx, fy.
// Rotations whose orthonormality drift is at most 1e-3 are snapped back to
// the nearest rotation via SVD; larger drift, reflections, duplicate ids,
// and non-positive dimensions or focals are errors.
std::vector<Camera> read_cameras(const std::string& path);

void write_cameras(const std::vector<Camera>& cameras, const std::string& path);

// Largest absolute entry of R^T R - I; the drift measure used by read_cameras.
double rotation_drift(const Eigen::Matrix3d& rotation);

// Nearest rotation in Frobenius norm. Throws if the input is closer to a
// reflection (non-positive determinant after projection).
Eigen::Matrix3d orthonormalize_rotation(const Eigen::Matrix3d& rotation);

}  // namespace splat
