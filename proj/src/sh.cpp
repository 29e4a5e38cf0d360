// Copyright Contributors to the splatops Project
// SPDX-License-Identifier: Apache-2.0
#include "splat/sh.hpp"

#include <algorithm>

#include "splat/common.hpp"

namespace splat {

Eigen::Vector3d eval_sh_color(const Gaussian& g, const Eigen::Vector3d& dir,
                              int degree) {
  if (degree < 0 || degree > 3)
    throw Error("SH degree must be in [0, 3], got " + std::to_string(degree));
  const double x = dir.x();
  const double y = dir.y();
  const double z = dir.z();

  double basis[kShCoeffSlots];
  int terms = 1;
  basis[0] = kShC0;
  if (degree >= 1) {
    basis[1] = -kShC1 * y;
    basis[2] = kShC1 * z;
    basis[3] = -kShC1 * x;
    terms = 4;
  }
  if (degree >= 2) {
    const double xx = x * x, yy = y * y, zz = z * z;
    basis[4] = kShC2[0] * x * y;
    basis[5] = kShC2[1] * y * z;
    basis[6] = kShC2[2] * (2.0 * zz - xx - yy);
    basis[7] = kShC2[3] * x * z;
    basis[8] = kShC2[4] * (xx - yy);
    terms = 9;
  }
  if (degree >= 3) {
    const double xx = x * x, yy = y * y, zz = z * z;
    basis[9] = kShC3[0] * y * (3.0 * xx - yy);
    basis[10] = kShC3[1] * x * y * z;
    basis[11] = kShC3[2] * y * (4.0 * zz - xx - yy);
    basis[12] = kShC3[3] * z * (2.0 * zz - 3.0 * xx - 3.0 * yy);
    basis[13] = kShC3[4] * x * (4.0 * zz - xx - yy);
    basis[14] = kShC3[5] * z * (xx - yy);
    basis[15] = kShC3[6] * x * (xx - 3.0 * yy);
    terms = 16;
  }

  Eigen::Vector3d color = Eigen::Vector3d::Zero();
  for (int k = 0; k < terms; ++k) color += basis[k] * g.sh.col(k);
  color.array() += 0.5;  // standard 3DGS DC offset
  return color.cwiseMax(0.0).cwiseMin(1.0);
}

}  // namespace splat
