// Copyright Contributors to the splatops Project
// SPDX-License-Identifier: Apache-2.0
#include "splat/projection.hpp"

#include <cmath>

#include "splat/common.hpp"
#include "splat/sh.hpp"

namespace splat {

Eigen::Matrix3d covariance3d(const Gaussian& g) {
  const Eigen::Matrix3d rs =
      g.rotation.toRotationMatrix() * g.scale.asDiagonal();
  return rs * rs.transpose();
}

std::optional<Projected2D> project_gaussian(const Gaussian& g,
                                            const Camera& cam,
                                            std::int32_t gaussian_id,
                                            int sh_degree, bool cull_extent) {
  if (cam.width <= 0 || cam.height <= 0)
    throw Error("camera has non-positive image dimensions");
  if (!(cam.fx > 0.0) || !(cam.fy > 0.0))
    throw Error("camera has non-positive focal length");

  const Eigen::Matrix3d world_to_cam = cam.rotation.transpose();
  const Eigen::Vector3d t = world_to_cam * (g.position - cam.position);
  if (!(t.z() > kNearPlane)) return std::nullopt;

  const double inv_z = 1.0 / t.z();
  Eigen::Matrix<double, 2, 3> jacobian;
  jacobian << cam.fx * inv_z, 0.0, -cam.fx * t.x() * inv_z * inv_z,
      0.0, cam.fy * inv_z, -cam.fy * t.y() * inv_z * inv_z;

  const Eigen::Matrix3d cov_cam =
      world_to_cam * covariance3d(g) * world_to_cam.transpose();
  Eigen::Matrix2d cov2d = jacobian * cov_cam * jacobian.transpose();
  cov2d(0, 0) += kCovarianceDilation;
  cov2d(1, 1) += kCovarianceDilation;

  const double a = cov2d(0, 0);
  const double b = 0.5 * (cov2d(0, 1) + cov2d(1, 0));
  const double c = cov2d(1, 1);
  const double det = a * c - b * b;
  if (!(det > 0.0) || !(a > 0.0) || !(c > 0.0)) return std::nullopt;

  const double mid = 0.5 * (a + c);
  const double lambda_max =
      mid + std::sqrt(std::max(0.0, mid * mid - det));
  const double radius = 3.0 * std::sqrt(lambda_max);

  Projected2D p;
  p.gaussian_id = gaussian_id;
  p.mean2d = Eigen::Vector2d(cam.fx * t.x() * inv_z + cam.width / 2.0,
                             cam.fy * t.y() * inv_z + cam.height / 2.0);
  if (cull_extent) {
    if (p.mean2d.x() - radius >= cam.width || p.mean2d.x() + radius <= 0.0 ||
        p.mean2d.y() - radius >= cam.height || p.mean2d.y() + radius <= 0.0)
      return std::nullopt;
  }
  p.conic = Eigen::Vector3d(c / det, -b / det, a / det);
  p.depth = t.z();
  p.radius = radius;
  p.opacity = g.opacity;
  const double dist = (g.position - cam.position).norm();
  const Eigen::Vector3d dir = dist > 0.0
                                  ? ((g.position - cam.position) / dist).eval()
                                  : Eigen::Vector3d(0.0, 0.0, 1.0);
  p.color = eval_sh_color(g, dir, sh_degree);
  return p;
}

double test_alpha(const Projected2D& p, double center_x, double center_y) {
  const double dx = center_x - p.mean2d.x();
  const double dy = center_y - p.mean2d.y();
  const double q =
      p.conic[0] * dx * dx + 2.0 * p.conic[1] * dx * dy + p.conic[2] * dy * dy;
  if (q > kMaxSupportQ) return 0.0;
  return std::min(0.99, p.opacity * std::exp(-0.5 * q));
}

}  // namespace splat
