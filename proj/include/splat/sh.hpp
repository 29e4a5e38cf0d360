// Copyright Contributors to the splatops Project
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include "splat/types.hpp"

namespace splat {

// Real spherical-harmonic basis constants, standard 3DGS ordering.
inline constexpr double kShC0 = 0.28209479177387814;
inline constexpr double kShC1 = 0.4886025119029199;
inline constexpr double kShC2[5] = {1.0925484305920792, -1.0925484305920792,
                                    0.31539156525252005, -1.0925484305920792,
                                    0.5462742152960396};
inline constexpr double kShC3[7] = {-0.5900435899266435, 2.890611442640554,
                                    -0.4570457994644658, 0.3731763325901154,
                                    -0.4570457994644658, 1.445305721320277,
                                    -0.5900435899266435};

// Evaluates the SH color of `g` seen along unit direction `dir`, up to
// `degree` (0..3). Coefficients above the stored degree are zero, so passing
// a larger degree is harmless. Channels are clamped to [0, 1].
Eigen::Vector3d eval_sh_color(const Gaussian& g, const Eigen::Vector3d& dir,
                              int degree);

// DC coefficient that renders as `value` under degree-0 evaluation.
inline double dc_from_color(double value) { return (value - 0.5) / kShC0; }

}  // namespace splat
