// Copyright Contributors to the splatops Project
// SPDX-License-Identifier: Apache-2.0
#include "splat/poses.hpp"

#include <cmath>
#include <string>

#include "splat/common.hpp"
#include "splat/rng.hpp"

namespace splat {

Eigen::Vector3d up_vector(const Camera& cam, int column) {
  if (column < 0 || column > 2)
    throw Error("up-vector column must be 0, 1, or 2");
  return cam.rotation.col(column);
}

Eigen::Vector3d estimate_axis(const std::vector<Camera>& cameras, int column) {
  if (cameras.empty()) throw Error("estimate_axis needs at least one camera");
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  for (const Camera& cam : cameras) mean += up_vector(cam, column);
  mean /= static_cast<double>(cameras.size());
  const double norm = mean.norm();
  if (norm < 1e-6)
    throw Error("estimate_axis: camera up-vectors cancel (mean norm " +
                std::to_string(norm) + ")");
  return mean / norm;
}

Camera rotate_pose(const Camera& cam, const Eigen::Vector3d& axis,
                   double theta_deg, const Eigen::Vector3d& center) {
  if (std::abs(axis.norm() - 1.0) > 1e-6)
    throw Error("rotate_pose requires a unit axis");
  const double theta = theta_deg * M_PI / 180.0;
  // Rodrigues built from the axis-angle; applied to both the offset from the
  // rotation center and the orientation, so the view direction co-rotates.
  const Eigen::Matrix3d rot =
      Eigen::AngleAxisd(theta, axis).toRotationMatrix();
  Camera out = cam;
  out.position = center + rot * (cam.position - center);
  out.rotation = rot * cam.rotation;
  return out;
}

std::vector<Camera> sample_novel_poses(const std::vector<Camera>& cameras,
                                       const PoseSampler& sampler, int k) {
  if (cameras.empty())
    throw Error("sample_novel_poses needs at least one camera");
  if (k < 1) throw Error("sample_novel_poses needs k >= 1");
  if (std::abs(sampler.y_bar.norm() - 1.0) > 1e-9)
    throw Error("PoseSampler.y_bar must be unit length");
  if (sampler.theta_range.min_deg > sampler.theta_range.max_deg)
    throw Error("theta_range.min must not exceed theta_range.max");

  Rng rng(sampler.seed);
  std::vector<Camera> out;
  out.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    const Camera& base = cameras[static_cast<std::size_t>(i) % cameras.size()];
    const double theta = rng.next_uniform(sampler.theta_range.min_deg,
                                          sampler.theta_range.max_deg);
    Camera cam = rotate_pose(base, sampler.y_bar, theta, sampler.center);
    cam.id = static_cast<int>(out.size());
    cam.image_name = "novel_" + std::to_string(out.size());
    out.push_back(std::move(cam));
  }
  return out;
}

}  // namespace splat
