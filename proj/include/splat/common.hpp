// Copyright Contributors to the splatops Project
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace splat {

// All recoverable failures (bad input files, invalid arguments, degenerate
// geometry) throw Error. The CLI and the python bindings translate it at the
// boundary; library code never calls abort/exit.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace splat
