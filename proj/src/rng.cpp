// Copyright Contributors to the splatops Project
// SPDX-License-Identifier: Apache-2.0
#include "splat/rng.hpp"

#include <cmath>

namespace splat {

double Rng::next_normal() {
  // next_double() can return exactly 0; shift into (0, 1] for the log.
  const double u1 = 1.0 - next_double();
  const double u2 = next_double();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace splat
