// Copyright Contributors to the splatops Project
// SPDX-License-Identifier: Apache-2.0
//
// End-to-end acceptance gate. Each check prints exactly one PASS/FAIL line
// (with its wall time); the process exits nonzero when any check fails.
// Checks with a stated time budget also fail by exceeding it.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "dip_oracle.hpp"
#include "splat/dip.hpp"
#include "splat/metrics.hpp"
#include "splat/ply_io.hpp"
#include "splat/poses.hpp"
#include "splat/projection.hpp"
#include "splat/pruner.hpp"
#include "splat/rasterizer.hpp"
#include "splat/rng.hpp"
#include "splat/toy_scenes.hpp"
#include "test_helpers.hpp"

namespace {

using Failures = std::vector<std::string>;

void expect(Failures& failures, bool ok, const std::string& message) {
  if (!ok && failures.size() < 8) failures.push_back(message);
}

std::string fmt(double value) {
  std::ostringstream os;
  os.precision(12);
  os << value;
  return os.str();
}

// ---------------------------------------------------------------------------
// Four gaussians on one ray: the target pixel blends the exact weights.

void check_ray_blend(Failures& f) {
  const splat::ToyFixture fix =
      splat::make_toy_fixture(splat::ToySceneSpec{});
  const splat::RenderOutput out =
      splat::render(fix.scene, fix.cameras[0], {});
  const std::size_t px = out.pixel_index(fix.target_y, fix.target_x);

  // Replay the pixel's blend list to recover the intermediate weights.
  const auto [begin, end] = out.pixel_tile_range(fix.target_y, fix.target_x);
  std::vector<double> weights;
  double transmittance = 1.0;
  for (std::int32_t k = begin; k < end; ++k) {
    const splat::Projected2D* p =
        out.projected_for(out.point_list[static_cast<std::size_t>(k)]);
    if (!p) continue;
    const double alpha =
        splat::test_alpha(*p, fix.target_x + 0.5, fix.target_y + 0.5);
    if (alpha < splat::kAlphaMin) continue;
    const double next = transmittance * (1.0 - alpha);
    if (next < splat::kTerminationT) break;
    weights.push_back(transmittance * alpha);
    transmittance = next;
  }

  const std::vector<double> wanted{0.2, 0.4, 0.08, 0.096};
  expect(f, weights.size() == wanted.size(),
         "expected 4 blended gaussians, got " +
             std::to_string(weights.size()));
  for (std::size_t i = 0; i < wanted.size() && i < weights.size(); ++i) {
    expect(f, std::abs(weights[i] - wanted[i]) <= 1e-9,
           "weight " + std::to_string(i) + " = " + fmt(weights[i]) +
               ", wanted " + fmt(wanted[i]));
  }
  expect(f, std::abs(out.d_alpha[px] - 1.776) <= 1e-6,
         "blended depth " + fmt(out.d_alpha[px]) + ", wanted 1.776");
  expect(f, out.d_mode[px] == 1.5,
         "modal depth " + fmt(out.d_mode[px]) + ", wanted exactly 1.5");
}

// ---------------------------------------------------------------------------
// The tiled rasterizer agrees with the single-span reference renderer.

void check_tiled_equivalence(Failures& f) {
  splat::Rng rng(0x7e5ca1e);
  const int tile_sizes[] = {1, 5, 16, 32};
  for (int scene_idx = 0; scene_idx < 20; ++scene_idx) {
    const std::size_t count = static_cast<std::size_t>(rng.next_int(1, 100));
    const splat::Scene scene =
        splat_test::random_render_scene(rng, count, 24.0, 32);
    const splat::Camera cam = splat_test::basic_camera(scene_idx, 32, 32, 24.0);
    splat::RenderOptions opts;
    opts.tile_size = tile_sizes[scene_idx % 4];
    opts.background = Eigen::Vector3d(0.1, 0.2, 0.3);
    const splat::RenderOutput tiled = splat::render(scene, cam, opts);
    const splat::RenderOutput reference =
        splat::reference_render(scene, cam, opts);

    double worst = 0.0;
    for (std::size_t i = 0; i < tiled.color.size(); ++i)
      worst = std::max(worst, std::abs(tiled.color[i] - reference.color[i]));
    for (std::size_t i = 0; i < tiled.d_alpha.size(); ++i) {
      worst =
          std::max(worst, std::abs(tiled.d_alpha[i] - reference.d_alpha[i]));
      worst = std::max(worst, std::abs(tiled.d_mode[i] - reference.d_mode[i]));
    }
    expect(f, worst <= 1e-4,
           "scene " + std::to_string(scene_idx) + " (" +
               std::to_string(count) + " gaussians, tile " +
               std::to_string(opts.tile_size) + "): max deviation " +
               fmt(worst));
  }
}

// ---------------------------------------------------------------------------
// Per pixel, blended weights and the remaining transmittance sum to one.

void check_weight_conservation(Failures& f) {
  std::vector<std::pair<std::string, splat::ToySceneSpec>> specs(3);
  specs[0].first = "ray4";
  specs[1].first = "plane";
  specs[2].first = "plane+floater";
  for (auto& [kind, spec] : specs) {
    spec.kind = kind;
    spec.plane_side = 41;
    spec.seed = 3;
  }
  for (const auto& [kind, spec] : specs) {
    const splat::ToyFixture fix = splat::make_toy_fixture(spec);
    for (const splat::Camera& cam : fix.cameras) {
      const splat::RenderOutput out = splat::render(fix.scene, cam, {});
      double worst = 0.0;
      for (std::size_t i = 0; i < out.weight_sum.size(); ++i)
        worst = std::max(worst,
                         std::abs(out.weight_sum[i] + out.final_T[i] - 1.0));
      expect(f, worst <= 1e-5,
             kind + " view " + std::to_string(cam.id) +
                 ": worst |sum w + T - 1| = " + fmt(worst));
    }
  }
  // And on random scenes, where termination and clamping both fire.
  splat::Rng rng(0xc0de);
  for (int trial = 0; trial < 3; ++trial) {
    const splat::Scene scene = splat_test::random_render_scene(rng, 80, 24.0, 32);
    const splat::Camera cam = splat_test::basic_camera(trial, 32, 32, 24.0);
    const splat::RenderOutput out = splat::render(scene, cam, {});
    double worst = 0.0;
    for (std::size_t i = 0; i < out.weight_sum.size(); ++i)
      worst = std::max(worst,
                       std::abs(out.weight_sum[i] + out.final_T[i] - 1.0));
    expect(f, worst <= 1e-5,
           "random scene " + std::to_string(trial) +
               ": worst |sum w + T - 1| = " + fmt(worst));
  }
}

// ---------------------------------------------------------------------------
// The dip statistic agrees with an independently coded reference.

std::vector<double> dip_sample(splat::Rng& rng, std::size_t n, int flavor) {
  std::vector<double> x(n);
  switch (flavor % 4) {
    case 0:
      for (double& v : x) v = rng.next_uniform(-3.0, 7.0);
      break;
    case 1:
      for (double& v : x) v = static_cast<double>(rng.next_int(0, 9));
      break;
    case 2:
      for (double& v : x) v = rng.next_normal();
      break;
    default:
      for (double& v : x)
        v = rng.next_normal() + (rng.next_double() < 0.5 ? 0.0 : 4.0);
      break;
  }
  return x;
}

void check_dip(Failures& f) {
  splat::Rng rng(0xd1b5);
  for (std::size_t n : {std::size_t{4}, std::size_t{50}, std::size_t{200}}) {
    for (int trial = 0; trial < 100; ++trial) {
      const std::vector<double> x = dip_sample(rng, n, trial);
      const double got = splat::dip_statistic(x).dip;
      const double want = splat_test::dip_oracle(x);
      if (std::abs(got - want) > 1e-9) {
        expect(f, false,
               "n=" + std::to_string(n) + " trial " + std::to_string(trial) +
                   ": dip " + fmt(got) + " vs reference " + fmt(want));
      }
    }
  }

  const double two_mass = splat::dip_statistic({0.0, 0.0, 1.0, 1.0}).dip;
  expect(f, std::abs(two_mass - 0.25) <= 1e-12,
         "two-point mass: dip " + fmt(two_mass) + ", wanted 0.25");

  std::vector<double> bimodal;
  for (int i = 0; i < 100; ++i) {
    bimodal.push_back(0.1 * rng.next_normal());
    bimodal.push_back(10.0 + 0.1 * rng.next_normal());
  }
  const double split = splat::dip_statistic(bimodal).dip;
  expect(f, split >= 0.2,
         "separated bimodal sample: dip " + fmt(split) + " under 0.2");

  std::vector<double> grid(201);
  for (int i = 0; i <= 200; ++i) grid[static_cast<std::size_t>(i)] = i / 200.0;
  const double flat = splat::dip_statistic(grid).dip;
  expect(f, flat <= 0.01, "uniform grid: dip " + fmt(flat) + " over 0.01");
}

// ---------------------------------------------------------------------------
// Floater pruning on the textured-plane fixture.

double mean_abs_delta(const splat::Scene& scene,
                      const std::vector<splat::Camera>& cams) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const splat::Camera& cam : cams) {
    const splat::RenderOutput out = splat::render(scene, cam, {});
    for (double d : splat::relative_diff(out)) {
      sum += std::abs(d);
      ++count;
    }
  }
  return sum / static_cast<double>(count);
}

void check_pruning(Failures& f) {
  splat::ToySceneSpec spec;
  spec.kind = "plane+floater";
  spec.seed = 7;
  splat::ToyFixture fix = splat::make_toy_fixture(spec);
  const std::size_t surface = fix.surface_count;
  const std::size_t floaters = fix.floater_count;

  const double delta_before = mean_abs_delta(fix.scene, fix.cameras);
  const splat::FloaterReport report =
      splat::prune_floaters(fix.scene, fix.cameras);

  std::size_t blob_removed = 0, surface_removed = 0;
  for (std::int32_t id : report.pruned_ids) {
    if (static_cast<std::size_t>(id) >= surface)
      ++blob_removed;
    else
      ++surface_removed;
  }
  expect(f,
         static_cast<double>(blob_removed) >=
             0.95 * static_cast<double>(floaters),
         "removed " + std::to_string(blob_removed) + " of " +
             std::to_string(floaters) + " floaters (under 95%)");
  expect(f,
         static_cast<double>(surface_removed) <=
             0.01 * static_cast<double>(surface),
         "removed " + std::to_string(surface_removed) + " of " +
             std::to_string(surface) + " surface gaussians (over 1%)");

  const double delta_after = mean_abs_delta(fix.scene, fix.cameras);
  expect(f, delta_after < delta_before,
         "mean |relative depth difference| did not decrease: " +
             fmt(delta_before) + " -> " + fmt(delta_after));

  splat::ToySceneSpec clean_spec = spec;
  clean_spec.kind = "plane";
  splat::ToyFixture clean = splat::make_toy_fixture(clean_spec);
  const std::size_t clean_before = clean.scene.size();
  const splat::FloaterReport clean_report =
      splat::prune_floaters(clean.scene, clean.cameras);
  expect(f,
         static_cast<double>(clean_report.pruned_ids.size()) <=
             0.01 * static_cast<double>(clean_before),
         "clean surface lost " +
             std::to_string(clean_report.pruned_ids.size()) + " of " +
             std::to_string(clean_before) + " gaussians (over 1%)");
}

// ---------------------------------------------------------------------------
// The adaptive percentile curve a e^{bD} at its two anchor points.

void check_percentile_curve(Failures& f) {
  // Positives 1..101 make the q-th percentile exactly 1 + q, so the cut
  // reads the percentile back out.
  std::vector<double> delta;
  for (int k = 1; k <= 101; ++k) delta.push_back(static_cast<double>(k));
  const splat::PruneConfig cfg;  // a = 97, b = -8

  const double at_zero = splat::threshold_from_dip(delta, 0.0, cfg) - 1.0;
  expect(f, std::abs(at_zero - 97.0) <= 1e-9,
         "percentile at D=0: " + fmt(at_zero) + ", wanted 97");

  const double at_tenth = splat::threshold_from_dip(delta, 0.1, cfg) - 1.0;
  const double wanted = 97.0 * std::exp(-0.8);
  expect(f, std::abs(at_tenth - wanted) <= 1e-9,
         "percentile at D=0.1: " + fmt(at_tenth) + ", wanted " + fmt(wanted));
}

// ---------------------------------------------------------------------------
// Local depth-correlation loss: affine invariance and gradient fidelity.

void check_depth_loss(Failures& f) {
  splat::Rng rng(0x10e55);
  splat::Grid src = splat::make_grid(64, 64);
  for (double& v : src.values) v = rng.next_uniform(0.5, 2.0);
  splat::Grid affine = src;
  for (double& v : affine.values) v = 2.0 * v + 3.0;
  splat::PatchSpec spec;
  spec.box_p = 16;
  spec.p_corr = 1.0;
  const double affine_loss = splat::local_pearson_loss(src, affine, spec);
  expect(f, std::abs(affine_loss) <= 1e-9,
         "affine-related maps: loss " + fmt(affine_loss) + ", wanted 0");

  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    splat::Rng grad_rng(seed * 7919);
    splat::Grid x = splat::make_grid(16, 16);
    splat::Grid y = splat::make_grid(16, 16);
    for (double& v : x.values) v = grad_rng.next_uniform(0.5, 2.0);
    for (double& v : y.values) v = grad_rng.next_uniform(0.5, 2.0);
    splat::PatchSpec gspec;
    gspec.box_p = 8;
    gspec.p_corr = 1.0;
    gspec.seed = seed;
    const splat::Grid grad = splat::local_pearson_loss_grad(x, y, gspec);

    std::vector<std::size_t> strong;
    for (std::size_t i = 0; i < grad.values.size(); ++i)
      if (std::abs(grad.values[i]) > 1e-4) strong.push_back(i);
    expect(f, strong.size() >= 10,
           "seed " + std::to_string(seed) + ": too few usable pixels");
    for (int pick = 0; pick < 10 && !strong.empty(); ++pick) {
      const std::size_t idx = strong[static_cast<std::size_t>(grad_rng.next_int(
          0, static_cast<std::int64_t>(strong.size()) - 1))];
      const double h = 1e-5;
      x.values[idx] += h;
      const double up = splat::local_pearson_loss(x, y, gspec);
      x.values[idx] -= 2.0 * h;
      const double down = splat::local_pearson_loss(x, y, gspec);
      x.values[idx] += h;
      const double fd = (up - down) / (2.0 * h);
      const double rel = std::abs(fd - grad.values[idx]) /
                         std::max(std::abs(fd), std::abs(grad.values[idx]));
      if (rel > 1e-4) {
        expect(f, false,
               "seed " + std::to_string(seed) + " pixel " +
                   std::to_string(idx) + ": analytic " +
                   fmt(grad.values[idx]) + " vs central difference " +
                   fmt(fd));
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Pose rotations: identity, isometry, composition, column extraction.

void check_poses(Failures& f) {
  splat::Camera cam = splat_test::basic_camera(0, 8, 8, 10.0);
  cam.position = Eigen::Vector3d(0.4, -1.0, 2.0);
  const splat::Camera same =
      splat::rotate_pose(cam, Eigen::Vector3d::UnitY(), 0.0);
  expect(f,
         (same.position - cam.position).norm() == 0.0 &&
             (same.rotation - cam.rotation).cwiseAbs().maxCoeff() == 0.0,
         "zero-angle rotation is not the exact identity");

  splat::Rng rng(0x905e5);
  for (int trial = 0; trial < 40; ++trial) {
    Eigen::Vector3d axis;
    do {
      axis = Eigen::Vector3d(rng.next_normal(), rng.next_normal(),
                             rng.next_normal());
    } while (axis.norm() < 0.1);
    axis.normalize();
    const Eigen::Vector3d center(rng.next_uniform(-2.0, 2.0),
                                 rng.next_uniform(-2.0, 2.0),
                                 rng.next_uniform(-2.0, 2.0));
    splat::Camera base = splat_test::basic_camera(trial, 8, 8, 10.0);
    base.position = Eigen::Vector3d(rng.next_uniform(-3.0, 3.0),
                                    rng.next_uniform(-3.0, 3.0),
                                    rng.next_uniform(-3.0, 3.0));
    const double t1 = rng.next_uniform(-170.0, 170.0);
    const double t2 = rng.next_uniform(-170.0, 170.0);

    const splat::Camera once = splat::rotate_pose(base, axis, t1, center);
    const double radius_drift = std::abs((once.position - center).norm() -
                                         (base.position - center).norm());
    if (radius_drift > 1e-9)
      expect(f, false, "trial " + std::to_string(trial) +
                           ": rotation changed the radius by " +
                           fmt(radius_drift));
    const double ortho = (once.rotation.transpose() * once.rotation -
                          Eigen::Matrix3d::Identity())
                             .cwiseAbs()
                             .maxCoeff();
    if (ortho > 1e-9)
      expect(f, false, "trial " + std::to_string(trial) +
                           ": orientation drifted from orthonormal by " +
                           fmt(ortho));
    const splat::Camera twice = splat::rotate_pose(once, axis, t2, center);
    const splat::Camera direct =
        splat::rotate_pose(base, axis, t1 + t2, center);
    const double compose = std::max(
        (twice.position - direct.position).norm(),
        (twice.rotation - direct.rotation).cwiseAbs().maxCoeff());
    if (compose > 1e-9)
      expect(f, false, "trial " + std::to_string(trial) +
                           ": composition differs from the direct rotation (" +
                           fmt(compose) + ")");
  }

  // Column extraction against a hand-built rotation about z.
  const double t = 30.0 * M_PI / 180.0;
  splat::Camera rotated = splat_test::basic_camera(1, 8, 8, 10.0);
  rotated.rotation << std::cos(t), -std::sin(t), 0.0,
                      std::sin(t),  std::cos(t), 0.0,
                      0.0,          0.0,         1.0;
  const double col0 =
      (splat::up_vector(rotated, 0) -
       Eigen::Vector3d(std::cos(t), std::sin(t), 0.0))
          .norm();
  const double col1 =
      (splat::up_vector(rotated, 1) -
       Eigen::Vector3d(-std::sin(t), std::cos(t), 0.0))
          .norm();
  expect(f, col0 <= 1e-12 && col1 <= 1e-12,
         "extracted up-vector disagrees with the hand-built rotation");
}

// ---------------------------------------------------------------------------
// PLY round trips are byte-identical across randomized scenes.

void check_ply_round_trip(Failures& f) {
  const splat_test::TempDir dir;
  splat::Rng rng(0x91f);
  const int rests[] = {0, 9, 24, 45};
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t count = static_cast<std::size_t>(rng.next_int(0, 50));
    const int rest = rests[trial % 4];
    const splat::Scene scene = splat_test::random_scene(rng, count, rest);
    const std::string first = dir.file("a.ply");
    const std::string second = dir.file("b.ply");
    splat::write_ply(scene, first);
    const splat::Scene reread = splat::read_ply(first);
    splat::write_ply(reread, second);
    if (splat_test::read_file_bytes(first) !=
        splat_test::read_file_bytes(second)) {
      expect(f, false,
             "trial " + std::to_string(trial) + " (" + std::to_string(count) +
                 " gaussians, " + std::to_string(rest) +
                 " rest coefficients): bytes changed across a round trip");
    }
  }
}

struct Check {
  const char* name;
  double budget_seconds;  // 0 means no stated budget
  std::function<void(Failures&)> run;
};

}  // namespace

int main() {
  const std::vector<Check> checks{
      {"ray-blend-values", 1.0, check_ray_blend},
      {"tiled-matches-reference", 10.0, check_tiled_equivalence},
      {"weight-conservation", 0.0, check_weight_conservation},
      {"dip-statistic", 5.0, check_dip},
      {"floater-pruning", 30.0, check_pruning},
      {"adaptive-percentile", 0.0, check_percentile_curve},
      {"depth-correlation-loss", 0.0, check_depth_loss},
      {"pose-rotations", 0.0, check_poses},
      {"ply-round-trip", 0.0, check_ply_round_trip},
  };

  int failed = 0;
  for (const Check& check : checks) {
    Failures failures;
    const auto start = std::chrono::steady_clock::now();
    try {
      check.run(failures);
    } catch (const std::exception& e) {
      failures.push_back(std::string("exception: ") + e.what());
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (check.budget_seconds > 0.0 && elapsed > check.budget_seconds) {
      failures.push_back("took " + fmt(elapsed) + "s, budget " +
                         fmt(check.budget_seconds) + "s");
    }
    if (failures.empty()) {
      std::printf("PASS %-26s (%.2fs)\n", check.name, elapsed);
    } else {
      ++failed;
      std::printf("FAIL %-26s (%.2fs)\n", check.name, elapsed);
      for (const std::string& why : failures)
        std::printf("     %s\n", why.c_str());
    }
  }
  std::printf("%d of %zu checks passed\n",
              static_cast<int>(checks.size()) - failed, checks.size());
  return failed == 0 ? 0 : 1;
}
