// Copyright Contributors to the splatops Project
// SPDX-License-Identifier: Apache-2.0
#include "splat/pruner.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace splat {
namespace {

constexpr double kDepthFloor = 1e-8;  // below this, d_alpha is background

void check_config(const PruneConfig& cfg) {
  if (!(cfg.a > 0.0) || cfg.a > 100.0)
    throw Error("PruneConfig.a must lie in (0, 100]");
  if (!(cfg.b < 0.0)) throw Error("PruneConfig.b must be negative");
  if (!(cfg.power_thresh >= 0.0))
    throw Error("PruneConfig.power_thresh must be non-negative");
}

}  // namespace

std::vector<double> relative_diff(const RenderOutput& out) {
  std::vector<double> delta(out.d_alpha.size(), 0.0);
  for (std::size_t i = 0; i < delta.size(); ++i) {
    const double da = out.d_alpha[i];
    if (da <= kDepthFloor) continue;
    delta[i] = (out.d_mode[i] - da) / da;
  }
  return delta;
}

double percentile_linear(std::vector<double> values, double p) {
  if (values.empty()) throw Error("percentile of an empty sample");
  if (!(p >= 0.0) || p > 100.0)
    throw Error("percentile must lie in [0, 100]");
  std::sort(values.begin(), values.end());
  const double rank = (static_cast<double>(values.size()) - 1.0) * p / 100.0;
  const std::size_t lo = static_cast<std::size_t>(rank);
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = rank - static_cast<double>(lo);
  return values[lo] * (1.0 - frac) + values[hi] * frac;
}

double threshold_from_dip(const std::vector<double>& delta, double d_bar,
                          const PruneConfig& cfg) {
  check_config(cfg);
  std::vector<double> positive;
  positive.reserve(delta.size());
  for (double d : delta) {
    if (d > 0.0) positive.push_back(d);
  }
  if (positive.empty())
    throw Error("threshold_from_dip: no positive delta values");
  const double percentile = cfg.a * std::exp(cfg.b * d_bar);
  return percentile_linear(std::move(positive), percentile);
}

std::vector<std::uint8_t> floater_mask(const std::vector<double>& delta,
                                       double tau) {
  std::vector<std::uint8_t> mask(delta.size(), 0);
  for (std::size_t i = 0; i < delta.size(); ++i)
    mask[i] = delta[i] > tau ? 1 : 0;
  return mask;
}

std::vector<std::int32_t> select_gaussians(const RenderOutput& out,
                                           const std::vector<std::uint8_t>& mask,
                                           const PruneConfig& cfg) {
  check_config(cfg);
  if (mask.size() != out.mode_range.size())
    throw Error("mask dimensions do not match the render output");

  std::set<std::int32_t> selected;
  for (int row = 0; row < out.height; ++row) {
    for (int col = 0; col < out.width; ++col) {
      const std::size_t px = out.pixel_index(row, col);
      if (!mask[px]) continue;
      const auto [start, mode] = out.mode_range[px];
      if (start < 0 || mode < 0) continue;  // nothing blended here
      const double cx = col + 0.5;
      const double cy = row + 0.5;
      for (std::int32_t k = start; k <= mode; ++k) {
        const std::int32_t id = out.point_list[static_cast<std::size_t>(k)];
        const Projected2D* p = out.projected_for(id);
        if (!p) continue;
        if (test_alpha(*p, cx, cy) > cfg.power_thresh) selected.insert(id);
      }
    }
  }
  return std::vector<std::int32_t>(selected.begin(), selected.end());
}

FloaterReport prune_floaters(Scene& scene, const std::vector<Camera>& cameras,
                             const PruneConfig& cfg,
                             const RenderOptions& opts) {
  check_config(cfg);
  if (cameras.empty()) throw Error("prune_floaters needs at least one camera");
  if (scene.size() == 0)
    throw Error("prune_floaters needs a non-empty scene");

  FloaterReport report;
  report.scene_size_before = scene.size();

  // Pass 1: render every view and accumulate the dip of its positive
  // relative differences.
  std::vector<RenderOutput> renders;
  std::vector<std::vector<double>> deltas;
  renders.reserve(cameras.size());
  deltas.reserve(cameras.size());
  for (const Camera& cam : cameras) {
    renders.push_back(render(scene, cam, opts));
    deltas.push_back(relative_diff(renders.back()));
  }
  std::vector<ViewDipInfo> dip_info;
  report.average_dip = average_dip(deltas, &dip_info);
  report.percentile = cfg.a * std::exp(cfg.b * report.average_dip);

  // Pass 2: per-view threshold, mask, and selection against the original
  // scene; the removal batches the union so view order cannot matter.
  std::set<std::int32_t> union_ids;
  for (std::size_t v = 0; v < cameras.size(); ++v) {
    ViewPruneReport view;
    view.camera_id = cameras[v].id;
    view.image_name = cameras[v].image_name;
    view.width = renders[v].width;
    view.height = renders[v].height;
    view.delta = std::move(deltas[v]);
    view.dip = dip_info[v];
    view.percentile = report.percentile;
    const bool has_positive =
        std::any_of(view.delta.begin(), view.delta.end(),
                    [](double d) { return d > 0.0; });
    if (has_positive) {
      view.tau = threshold_from_dip(view.delta, report.average_dip, cfg);
      view.tau_valid = true;
      view.mask = floater_mask(view.delta, view.tau);
      view.selected = select_gaussians(renders[v], view.mask, cfg);
      union_ids.insert(view.selected.begin(), view.selected.end());
    } else {
      view.mask.assign(view.delta.size(), 0);
    }
    report.views.push_back(std::move(view));
  }

  report.pruned_ids.assign(union_ids.begin(), union_ids.end());
  remove_gaussians(scene, report.pruned_ids);
  report.scene_size_after = scene.size();
  return report;
}

}  // namespace splat
