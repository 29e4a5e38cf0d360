// Copyright Contributors to the splatops Project
// SPDX-License-Identifier: Apache-2.0
#include "splat/toy_scenes.hpp"

#include <cmath>

#include "splat/rng.hpp"
#include "splat/sh.hpp"

namespace splat {

namespace {

// ray4 geometry: small odd image so one pixel center sits exactly on the
// optical axis.
constexpr int kRayImage = 33;
constexpr double kRayFocal = 20.0;

// plane-family geometry. The relative depth difference of a covered pixel is
// delta = (d_mode - d_alpha) / d_alpha, and the pruner keeps only delta > 0,
// so the fixture controls the sign pixel by pixel:
//   - The visible surface is three stacked grids. Layer 1 (z = 2.5, 8 px
//     pitch, 6 px sigma) holds the per-pixel mode everywhere. Layer 2
//     (z = 2.8) absorbs whatever leaks through: the opacities are sized
//     against the compositor's early-out, which drops the candidate that
//     would push transmittance under 1e-4. When that drop fires, the walk
//     strands a tail of at most 1e-4 / (1 - alpha_max), where alpha_max is
//     the largest alpha any one candidate can present. Keeping the pixel
//     negative needs that tail under T1 * dz / (z1 + dz) ~ 0.107 * T1,
//     and layer 1 at 0.90 leaves T1 >= ~6.7e-3 after its deepest stack,
//     so layer-2 alphas must stay at or below ~0.86; 0.80 leaves a wide
//     margin. (At 0.98 a late near-center candidate can strand ~3.3e-3
//     after weaker neighbors drain the pixel, scattering ~9k small
//     positive deltas across the plane and burying the threshold.)
//   - Layer 3 (z = 4.0) repeats the trick one level down for pruning
//     holes: where a pass removes layer-1 cells, layer 2 becomes the mode,
//     and layer 3's long lever arm (1.2 vs 0.3) keeps those pixels
//     negative too, so later passes see no phantom positives. The same
//     alpha cap bounds its own stranded tail at 5e-4, far under the
//     ~5.7e-3 a hole pixel tolerates.
//   - Two translucent 12-splat "pods" at z = 1.6 supply the positive
//     population every view needs: under a pod the mode stays on the
//     surface while the haze pulls d_alpha nearer, so delta ramps smoothly
//     toward the pod core (~0.36 * accumulated alpha).
//   - One far fainter reservoir pod sits below any plausible first-pass
//     cut (peak delta ~0.01) but above the 1/255 selection floor, so a
//     second pruning pass still finds a positive population to work on.
//   - The floater is a dense haze sheet: a 10x10 grid of low-alpha
//     gaussians at z = 0.8, pitch 0.7 projected sigma, reading as one
//     semi-opaque blob (accumulated alpha ~0.5). A grid's interior coverage
//     is translation-invariant, so ~80 interior pixels share one delta
//     (~0.51) while the shoulder ramps smoothly to zero; that spike is a
//     genuine second mode in the positive-delta histogram, which is what
//     the adaptive cutoff keys on. A lone radial blob cannot do this: its
//     pixel count per delta band decreases monotonically, so the dip
//     statistic reads it as noise. Per-splat alpha 0.054 keeps every
//     sheet contribution under the attenuated layer-1 weight
//     (0.163 * (1 - 0.5)), so the mode never leaves the surface and the
//     selection walk at masked pixels crosses the whole sheet.
// The grid extends far past the frustum so the cameras see only interior
// surface.
constexpr int kPlaneImage = 256;
constexpr double kPlaneFocal = 400.0;
constexpr double kPlaneDepth = 2.5;
constexpr double kPlaneMidDepth = 2.8;
constexpr double kPlaneBackDepth = 4.0;
constexpr double kPlanePitch = 0.05;     // 8 px at kPlaneDepth
constexpr double kPlaneSigma = 0.0375;   // 6 px projected
constexpr double kPlaneOpacity = 0.90;
constexpr double kPlaneMidOpacity = 0.80;
constexpr double kPlaneBackOpacity = 0.80;
constexpr double kCameraSpacing = 0.05;  // 8 px parallax at the surface

constexpr int kPodSplats = 12;
constexpr double kPodDepth = 1.6;
constexpr double kPodJitterXy = 0.02;  // ~5 px at kPodDepth
constexpr double kPodJitterZ = 0.05;
constexpr double kPodSigma = 0.012;  // 3 px projected
constexpr double kPodOpacity = 0.05;
constexpr double kPodCenters[2][2] = {{-0.30, -0.25}, {0.28, 0.30}};

constexpr int kReservoirSplats = 8;
constexpr double kReservoirSigma = 0.015;  // ~3.75 px projected
constexpr double kReservoirOpacity = 0.005;
constexpr double kReservoirJitterXy = 0.016;
constexpr double kReservoirCenter[2] = {-0.05, 0.35};

constexpr double kBlobDepth = 0.8;
constexpr double kBlobOffsetX = 0.05;
constexpr double kBlobOffsetY = 0.04;
constexpr double kBlobSigma = 0.008;       // 4 px projected
constexpr double kBlobPitch = 0.0056;      // 0.7 projected sigma
constexpr double kBlobOpacity = 0.054;     // < 0.163 * (1 - sheet alpha ~0.5)
constexpr double kBlobJitter = 0.0004;     // small vs pitch: keeps the plateau
constexpr double kBlobDepthJitter = 0.008;

Gaussian basic_gaussian(const Eigen::Vector3d& position, double sigma,
                        double opacity, const Eigen::Vector3d& color) {
  Gaussian g;
  g.position = position;
  g.scale = Eigen::Vector3d::Constant(sigma);
  g.opacity = opacity;
  g.rotation = Eigen::Quaterniond::Identity();
  for (int c = 0; c < 3; ++c) g.sh(c, 0) = dc_from_color(color[c]);
  return g;
}

Camera axis_camera(int id, const std::string& name, int image, double focal,
                   const Eigen::Vector3d& position) {
  Camera cam;
  cam.id = id;
  cam.image_name = name;
  cam.width = image;
  cam.height = image;
  cam.fx = focal;
  cam.fy = focal;
  cam.position = position;
  cam.rotation = Eigen::Matrix3d::Identity();
  return cam;
}

ToyFixture make_ray4(const ToySceneSpec& spec) {
  const std::size_t n = spec.ray_depths.size();
  if (n == 0 || spec.ray_opacities.size() != n) {
    throw Error("ray4 requires equally sized, non-empty depth/opacity lists");
  }
  double transmittance = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double z = spec.ray_depths[i];
    const double op = spec.ray_opacities[i];
    if (!(z > 0.2) || (i > 0 && !(z > spec.ray_depths[i - 1]))) {
      throw Error("ray4 depths must be strictly increasing and > 0.2");
    }
    // The requested opacity must be the exact blend alpha: below the clamp,
    // above the contribution cutoff, and never tripping early termination.
    if (!(op >= 1.0 / 255.0 && op <= 0.99)) {
      throw Error("ray4 opacities must lie in [1/255, 0.99]");
    }
    transmittance *= 1.0 - op;
    if (transmittance < 1e-4) {
      throw Error("ray4 opacity list would terminate compositing early");
    }
  }

  ToyFixture fix;
  fix.scene.rest_count = 0;
  fix.scene.source_path = "toy:ray4";
  fix.cameras.push_back(axis_camera(0, "toy_ray4_0", kRayImage, kRayFocal,
                                    Eigen::Vector3d::Zero()));
  fix.target_x = (kRayImage - 1) / 2;
  fix.target_y = (kRayImage - 1) / 2;

  Rng rng(spec.seed);
  for (std::size_t i = 0; i < n; ++i) {
    const double z = spec.ray_depths[i];
    // Projected sigma 0.25 px at every depth keeps neighbors' alphas distinct
    // from the requested list while the axis pixel sees exp(0) falloff.
    const double sigma = 0.25 * z / kRayFocal;
    const Eigen::Vector3d color(0.1 + 0.8 * rng.next_double(),
                                0.1 + 0.8 * rng.next_double(),
                                0.1 + 0.8 * rng.next_double());
    Gaussian g = basic_gaussian(Eigen::Vector3d(0.0, 0.0, z), sigma, 1.0,
                                color);
    g.opacity = spec.ray_opacities[i];  // exact, no logit round-trip
    fix.scene.raw.push_back(deactivate(g, fix.scene.rest_count));
    fix.scene.gaussians.push_back(g);
  }
  fix.surface_count = n;
  return fix;
}

ToyFixture make_plane(const ToySceneSpec& spec, bool with_floater) {
  if (spec.plane_side < 3 || spec.plane_side % 2 == 0) {
    throw Error("plane_side must be odd and >= 3");
  }
  if (spec.camera_count < 1) {
    throw Error("camera_count must be >= 1");
  }
  if (with_floater && spec.floater_count < 1) {
    throw Error("floater_count must be >= 1");
  }

  ToyFixture fix;
  fix.scene.rest_count = 0;
  fix.scene.source_path = with_floater ? "toy:plane+floater" : "toy:plane";

  const int side = spec.plane_side;
  const double half = (side - 1) / 2.0;
  Rng rng(spec.seed);

  // Layer 1: the visible surface, row-major; a smooth low-frequency texture
  // avoids constant-patch degeneracies in correlation metrics.
  std::vector<Gaussian> layer;
  layer.reserve(static_cast<std::size_t>(side) * side);
  for (int i = 0; i < side; ++i) {
    for (int j = 0; j < side; ++j) {
      const double x = (i - half) * kPlanePitch;
      const double y = (j - half) * kPlanePitch;
      const double wave =
          0.25 * std::sin(0.9 * i) * std::cos(1.3 * j);
      const Eigen::Vector3d color(
          std::clamp(0.55 + wave + 0.1 * rng.next_double(), 0.05, 0.95),
          std::clamp(0.45 - wave + 0.1 * rng.next_double(), 0.05, 0.95),
          std::clamp(0.5 + 0.2 * rng.next_double(), 0.05, 0.95));
      layer.push_back(basic_gaussian(Eigen::Vector3d(x, y, kPlaneDepth),
                                     kPlaneSigma, kPlaneOpacity, color));
    }
  }
  // Layers 2 and 3: same-xy absorber grids behind layer 1 (see the design
  // note above). Layer 2 keeps intact pixels strictly negative; layer 3
  // does the same for pixels whose layer-1 cell a pruning pass removed.
  for (const Gaussian& g : layer) {
    fix.scene.gaussians.push_back(g);
  }
  for (Gaussian g : layer) {
    g.position.z() = kPlaneMidDepth;
    g.opacity = kPlaneMidOpacity;
    fix.scene.gaussians.push_back(g);
  }
  for (Gaussian g : layer) {
    g.position.z() = kPlaneBackDepth;
    g.opacity = kPlaneBackOpacity;
    fix.scene.gaussians.push_back(g);
  }

  // Haze pods: the controlled positive-delta population every view needs.
  for (const auto& center : kPodCenters) {
    for (int k = 0; k < kPodSplats; ++k) {
      const Eigen::Vector3d pos(
          center[0] + kPodJitterXy * (2.0 * rng.next_double() - 1.0),
          center[1] + kPodJitterXy * (2.0 * rng.next_double() - 1.0),
          kPodDepth + kPodJitterZ * (2.0 * rng.next_double() - 1.0));
      const Eigen::Vector3d color(0.6, 0.62, 0.66 + 0.05 * rng.next_double());
      fix.scene.gaussians.push_back(
          basic_gaussian(pos, kPodSigma, kPodOpacity, color));
    }
  }

  // Reservoir pod: positive but under any plausible first-pass threshold,
  // so a second pruning pass still has a population to threshold.
  for (int k = 0; k < kReservoirSplats; ++k) {
    const Eigen::Vector3d pos(
        kReservoirCenter[0] + kReservoirJitterXy * (2.0 * rng.next_double() - 1.0),
        kReservoirCenter[1] + kReservoirJitterXy * (2.0 * rng.next_double() - 1.0),
        kPodDepth + kPodJitterZ * (2.0 * rng.next_double() - 1.0));
    const Eigen::Vector3d color(0.58, 0.60, 0.64 + 0.05 * rng.next_double());
    fix.scene.gaussians.push_back(
        basic_gaussian(pos, kReservoirSigma, kReservoirOpacity, color));
  }
  fix.surface_count = fix.scene.gaussians.size();

  if (with_floater) {
    const int grid = static_cast<int>(
        std::ceil(std::sqrt(static_cast<double>(spec.floater_count))));
    const double half = (grid - 1) / 2.0;
    for (int k = 0; k < spec.floater_count; ++k) {
      const int row = k / grid;
      const int col = k % grid;
      const Eigen::Vector3d jitter(
          kBlobJitter * (2.0 * rng.next_double() - 1.0),
          kBlobJitter * (2.0 * rng.next_double() - 1.0),
          kBlobDepthJitter * (2.0 * rng.next_double() - 1.0));
      const Eigen::Vector3d pos =
          Eigen::Vector3d(kBlobOffsetX + (col - half) * kBlobPitch,
                          kBlobOffsetY + (row - half) * kBlobPitch,
                          kBlobDepth) +
          jitter;
      const Eigen::Vector3d color(0.75, 0.7 + 0.05 * rng.next_double(), 0.68);
      fix.scene.gaussians.push_back(
          basic_gaussian(pos, kBlobSigma, kBlobOpacity, color));
    }
    fix.floater_count = static_cast<std::size_t>(spec.floater_count);
  }

  fix.scene.raw.reserve(fix.scene.gaussians.size());
  for (const Gaussian& g : fix.scene.gaussians) {
    fix.scene.raw.push_back(deactivate(g, fix.scene.rest_count));
  }

  for (int c = 0; c < spec.camera_count; ++c) {
    const double x = (c - (spec.camera_count - 1) / 2.0) * kCameraSpacing;
    fix.cameras.push_back(axis_camera(
        c, "toy_plane_" + std::to_string(c), kPlaneImage, kPlaneFocal,
        Eigen::Vector3d(x, 0.0, 0.0)));
  }
  return fix;
}

}  // namespace

ToyFixture make_toy_fixture(const ToySceneSpec& spec) {
  if (spec.kind == "ray4") return make_ray4(spec);
  if (spec.kind == "plane") return make_plane(spec, false);
  if (spec.kind == "plane+floater") return make_plane(spec, true);
  throw Error("unknown toy scene kind: " + spec.kind);
}

Scene make_toy_scene(const ToySceneSpec& spec) {
  return make_toy_fixture(spec).scene;
}

}  // namespace splat
