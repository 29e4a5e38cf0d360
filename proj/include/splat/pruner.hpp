// Copyright Contributors to the splatops Project
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "splat/dip.hpp"
#include "splat/rasterizer.hpp"
#include "splat/types.hpp"

namespace splat {

// Adaptive floater-removal knobs. The percentile cut is a * exp(b * D),
// where D is the mean per-view dip: unimodal relative-depth histograms
// (small D) cut only the extreme tail, bimodal ones cut deep.
struct PruneConfig {
  double a = 97.0;                 // percentile at D = 0, in (0, 100]
  double b = -8.0;                 // decay per unit dip, < 0
  double power_thresh = 1.0 / 255.0;  // selection needs test-alpha above this
};

// Per-view diagnostics of one pruning (or diagnose-only) run.
struct ViewPruneReport {
  int camera_id = 0;
  std::string image_name;
  int width = 0;
  int height = 0;
  std::vector<double> delta;  // relative depth difference, H*W
  ViewDipInfo dip;
  double percentile = 0.0;  // a e^{bD}, shared across views
  double tau = 0.0;         // per-view percentile of positive delta
  bool tau_valid = false;   // false when the view had no positive delta
  std::vector<std::uint8_t> mask;      // H*W, 1 where delta > tau
  std::vector<std::int32_t> selected;  // ascending unique gaussian ids
};

struct FloaterReport {
  double average_dip = 0.0;
  double percentile = 0.0;
  std::vector<ViewPruneReport> views;
  std::vector<std::int32_t> pruned_ids;  // ascending union over views
  std::size_t scene_size_before = 0;
  std::size_t scene_size_after = 0;
};

// Per-pixel (d_mode - d_alpha) / d_alpha; 0 where d_alpha <= 1e-8
// (background), excluding those pixels from all downstream statistics.
std::vector<double> relative_diff(const RenderOutput& out);

// Linear-interpolation percentile (rank h = (n-1) p / 100) of an unsorted
// sample. p in [0, 100].
double percentile_linear(std::vector<double> values, double p);

// tau = the (a e^{b d_bar})-th percentile of delta's strictly positive
// entries. Throws when delta has no positive entry or cfg is invalid.
double threshold_from_dip(const std::vector<double>& delta, double d_bar,
                          const PruneConfig& cfg);

// Strict per-pixel cut: mask = delta > tau.
std::vector<std::uint8_t> floater_mask(const std::vector<double>& delta,
                                       double tau);

// For every masked pixel with a contributor, walks the blend records from
// the first contributor through the mode gaussian inclusive and keeps ids
// whose recomputed test-alpha at the pixel center exceeds power_thresh.
// Returns the ascending union. Never selects past the mode: gaussians
// behind it keep their support.
std::vector<std::int32_t> select_gaussians(const RenderOutput& out,
                                           const std::vector<std::uint8_t>& mask,
                                           const PruneConfig& cfg);

// Two-pass adaptive prune: renders every camera to accumulate the average
// dip, derives per-view thresholds and selections, then removes the union
// once (stable remap). The scene is mutated; survivors keep exact bytes.
FloaterReport prune_floaters(Scene& scene, const std::vector<Camera>& cameras,
                             const PruneConfig& cfg = {},
                             const RenderOptions& opts = {});

}  // namespace splat
