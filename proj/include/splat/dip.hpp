// Copyright Contributors to the splatops Project
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

#include "splat/common.hpp"

namespace splat {

// Result of the unimodality dip test.
struct DipResult {
  double dip = 0.0;   // sup-norm distance to the nearest unimodal CDF
  std::size_t n = 0;  // sample count that entered the statistic
};

// Hartigan dip statistic of an unsorted sample (n >= 4, finite). The dip is
// the smallest e such that some CDF, convex left of a mode and concave right
// of it, stays within e of the empirical CDF everywhere. Always in
// [0, 0.25]; 0 exactly when all samples coincide.
DipResult dip_statistic(const std::vector<double>& samples);

// Per-view outcome of average_dip, for reporting.
struct ViewDipInfo {
  std::size_t positive_count = 0;  // strictly positive entries found
  std::size_t used_count = 0;      // after the subsampling cap
  double dip = 0.0;
  bool skipped = false;  // fewer than 4 positive entries
};

// Values above this many positives per view are thinned by uniform stride
// before the dip test; the statistic is stable far below this count.
inline constexpr std::size_t kDipSubsampleCap = 50000;

// Mean dip over views. Each map is filtered to strictly positive values,
// subsampled to kDipSubsampleCap, and dip-tested; views with fewer than 4
// positive values are skipped and marked in `info`. Throws when every view
// is skipped.
double average_dip(const std::vector<std::vector<double>>& delta_maps,
                   std::vector<ViewDipInfo>* info = nullptr);

}  // namespace splat
