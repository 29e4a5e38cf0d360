// Copyright Contributors to the splatops Project
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "splat/types.hpp"

namespace splat {

// Description of a synthetic test scene. Three kinds are understood:
//   "ray4"          four gaussians along one camera ray; exactly one pixel
//                   blends the requested (depth, opacity) list in order
//   "plane"         a fronto-parallel textured surface (a visible layer
//                   backed by two deeper same-xy absorber layers) with two
//                   faint haze pods and a fainter reservoir pod in front of
//                   it; covered pixels away from the pods have strictly
//                   negative relative depth difference, pod pixels a small
//                   positive one
//   "plane+floater" the plane plus a compact translucent blob hovering much
//                   closer to the cameras, whose positive relative depth
//                   differences sit well above the pods'
struct ToySceneSpec {
  std::string kind = "ray4";
  std::uint64_t seed = 0;

  // ray4 knobs
  std::vector<double> ray_depths{1.0, 1.5, 5.0, 6.0};
  std::vector<double> ray_opacities{0.2, 0.5, 0.2, 0.3};

  // plane family knobs
  int plane_side = 131;     // grid points per side, duplicated into two layers
  int floater_count = 100;  // haze-sheet gaussians ("plane+floater" only)
  int camera_count = 3;     // cameras along the x axis
};

// Fixture bundle: the scene plus everything tests need to interrogate it.
// Gaussian ids [0, surface_count) belong to the plane fixture proper (all
// three surface layers and the haze pods); ids [surface_count,
// surface_count + floater_count) are the floater sheet.
struct ToyFixture {
  Scene scene;
  std::vector<Camera> cameras;
  std::size_t surface_count = 0;
  std::size_t floater_count = 0;
  int target_x = -1;  // ray4: the pixel that reproduces the requested list
  int target_y = -1;
};

// Deterministic in (spec, seed). Throws on unknown kind or non-positive
// counts.
ToyFixture make_toy_fixture(const ToySceneSpec& spec);

// Scene-only convenience wrapper over make_toy_fixture.
Scene make_toy_scene(const ToySceneSpec& spec);

}  // namespace splat
