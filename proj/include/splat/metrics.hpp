// Copyright Contributors to the splatops Project
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "splat/image_io.hpp"

namespace splat {

// Population variance below this is treated as degenerate in pcc.
inline constexpr double kVarianceFloor = 1e-12;
// Reported instead of +inf when two images are identical.
inline constexpr double kPsnrCap = 100.0;

// Pearson correlation of two equal-length vectors (n >= 2). When either
// population variance is under kVarianceFloor the value is 0 and
// *degenerate (if given) is set.
double pcc(const std::vector<double>& x, const std::vector<double>& y,
           bool* degenerate = nullptr);

// Patch sampling plan for the local depth-correlation loss.
struct PatchSpec {
  int box_p = 128;      // patch side S in pixels
  double p_corr = 0.5;  // fraction of the floor(H/S)*floor(W/S) patch grid
  std::uint64_t seed = 0;
};

// Per-call accounting of the patch loop.
struct PatchLossStats {
  int sampled = 0;     // patches drawn
  int evaluated = 0;   // entered the loss (valid-pixel quota met)
  int skipped = 0;     // under-populated patches
  int degenerate = 0;  // evaluated with a constant side, contributing 1
};

// Mean of (1 - PCC) over sampled patches of d_src vs d_target. Patches are
// squares of side box_p with corners drawn uniformly (row then column per
// patch, possibly overlapping) from [0, H-S] x [0, W-S]; n = floor(p_corr *
// floor(H/S) * floor(W/S)) draws. Pixels where either map is <= 0 carry no
// depth and are masked out; patches keeping fewer than max(2, 25% of S^2)
// pixels are skipped. Returns 0 when nothing was evaluated. Deterministic
// in the seed.
double local_pearson_loss(const Grid& d_src, const Grid& d_target,
                          const PatchSpec& spec,
                          PatchLossStats* stats = nullptr);

// Analytic d loss / d d_src for the identical patch draw. Unsampled and
// masked pixels get zero; degenerate patches contribute zero gradient.
Grid local_pearson_loss_grad(const Grid& d_src, const Grid& d_target,
                             const PatchSpec& spec);

// 10 log10(1 / MSE) over all pixels and channels, capped at kPsnrCap.
double psnr(const Image& a, const Image& b);

// Mean structural similarity: 11x11 Gaussian window (sigma 1.5), K1 = 0.01,
// K2 = 0.03, dynamic range 1; averaged over fully interior windows and the
// three channels. Requires both dimensions >= 11.
double ssim(const Image& a, const Image& b);

}  // namespace splat
