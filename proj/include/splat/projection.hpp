// Copyright Contributors to the splatops Project
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>

#include "splat/types.hpp"

namespace splat {

// Gaussians at or behind this camera-space depth are culled.
inline constexpr double kNearPlane = 0.2;
// Low-pass variance floor added to both diagonal entries of the projected
// covariance before inversion, in pixels squared.
inline constexpr double kCovarianceDilation = 0.3;
// Squared Mahalanobis cutoff of the splat support window. 9 = (3 sigma)^2,
// so `radius` (3 sqrt of the max eigenvalue) always encloses the support.
inline constexpr double kMaxSupportQ = 9.0;

// Screen-space footprint of one gaussian under one camera.
struct Projected2D {
  std::int32_t gaussian_id = -1;
  Eigen::Vector2d mean2d = Eigen::Vector2d::Zero();  // pixels
  // Inverse 2D covariance, upper triangle (a, b, c): q = a dx^2 + 2b dx dy +
  // c dy^2. Positive definite by construction.
  Eigen::Vector3d conic = Eigen::Vector3d::Zero();
  double depth = 0.0;   // camera-space z, world units
  double radius = 0.0;  // pixels, 3 sqrt(max eigenvalue of the 2D covariance)
  double opacity = 0.0;
  Eigen::Vector3d color = Eigen::Vector3d::Zero();  // SH evaluated, clamped
};

// World-space 3x3 covariance R diag(s) (R diag(s))^T.
Eigen::Matrix3d covariance3d(const Gaussian& g);

// EWA projection of one gaussian. Returns nullopt when culled: camera-space
// z <= kNearPlane, or (when cull_extent) the 3 sigma box misses the image.
// The projected covariance is J W Sigma W^T J^T plus the dilation floor,
// with J the pinhole Jacobian at the gaussian center and W the
// world-to-camera rotation. SH color is evaluated once per gaussian along
// the camera-center-to-gaussian direction, up to sh_degree.
std::optional<Projected2D> project_gaussian(const Gaussian& g,
                                            const Camera& cam,
                                            std::int32_t gaussian_id = -1,
                                            int sh_degree = 3,
                                            bool cull_extent = true);

// Test-alpha of a projected gaussian at pixel center (px + 0.5, py + 0.5):
// min(0.99, opacity * exp(-q/2)), or 0 outside the q <= kMaxSupportQ support
// window. Shared by the compositors and the pruner's candidate re-test.
double test_alpha(const Projected2D& p, double center_x, double center_y);

}  // namespace splat
