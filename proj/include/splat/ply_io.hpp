// Copyright Contributors to the splatops Project
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "splat/types.hpp"

namespace splat {

// Binary little-endian PLY with float32 vertex properties in this exact
// order: x y z nx ny nz f_dc_0..2 f_rest_0..(m-1) opacity scale_0..2
// rot_0..3, with m a multiple of 3 up to 45. The reader accepts only the
// canonical header write_ply emits (modulo vertex and f_rest counts), which
// makes write_ply(read_ply(f)) byte-identical for every accepted file.
// Parse failures name the offending line or byte offset.
Scene read_ply(const std::string& path);

void write_ply(const Scene& scene, const std::string& path);

}  // namespace splat
