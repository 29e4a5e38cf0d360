// Copyright Contributors to the splatops Project
// SPDX-License-Identifier: Apache-2.0
#include "splat/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "splat/rng.hpp"

namespace splat {
namespace {

void check_grid(const Grid& g, const char* name) {
  if (g.width <= 0 || g.height <= 0 ||
      g.values.size() != static_cast<std::size_t>(g.width) * g.height)
    throw Error(std::string(name) + ": grid dimensions do not match its "
                "value count");
}

void check_pair(const Grid& a, const Grid& b) {
  check_grid(a, "d_src");
  check_grid(b, "d_target");
  if (a.width != b.width || a.height != b.height)
    throw Error("depth maps differ in size: " + std::to_string(a.width) + "x" +
                std::to_string(a.height) + " vs " + std::to_string(b.width) +
                "x" + std::to_string(b.height));
}

void check_spec(const PatchSpec& spec, const Grid& g) {
  if (spec.box_p < 1 || spec.box_p > std::min(g.width, g.height))
    throw Error("box_p must be in [1, min(H, W)], got " +
                std::to_string(spec.box_p));
  if (!(spec.p_corr > 0.0) || spec.p_corr > 1.0)
    throw Error("p_corr must be in (0, 1]");
}

// One sampled patch, reduced to its valid (both maps positive) pixels.
struct PatchData {
  std::vector<std::size_t> indices;  // flat indices into the grids
  std::vector<double> x, y;          // d_src, d_target values
};

// Centered second moments of a patch; the shared core of loss and gradient.
struct PatchMoments {
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  double mean_x = 0.0, mean_y = 0.0;
  bool degenerate = false;
  double pcc_value = 0.0;
};

PatchMoments patch_moments(const PatchData& patch) {
  PatchMoments m;
  const std::size_t n = patch.x.size();
  for (std::size_t i = 0; i < n; ++i) {
    m.mean_x += patch.x[i];
    m.mean_y += patch.y[i];
  }
  m.mean_x /= static_cast<double>(n);
  m.mean_y /= static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = patch.x[i] - m.mean_x;
    const double dy = patch.y[i] - m.mean_y;
    m.sxx += dx * dx;
    m.syy += dy * dy;
    m.sxy += dx * dy;
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  if (m.sxx * inv_n < kVarianceFloor || m.syy * inv_n < kVarianceFloor) {
    m.degenerate = true;
    return m;
  }
  m.pcc_value =
      std::clamp(m.sxy / std::sqrt(m.sxx * m.syy), -1.0, 1.0);
  return m;
}

// Runs the seeded patch loop, handing each evaluated patch to `consume`.
// Loss and gradient share this walk so they see identical draws.
template <typename Consume>
PatchLossStats for_each_patch(const Grid& d_src, const Grid& d_target,
                              const PatchSpec& spec, Consume consume) {
  check_pair(d_src, d_target);
  check_spec(spec, d_src);

  const int s = spec.box_p;
  const std::size_t cells = static_cast<std::size_t>(d_src.height / s) *
                            static_cast<std::size_t>(d_src.width / s);
  const int n_corr = static_cast<int>(spec.p_corr * static_cast<double>(cells));
  const std::size_t quota = std::max<std::size_t>(
      2, (static_cast<std::size_t>(s) * s + 3) / 4);  // 25% rounded up

  PatchLossStats stats;
  Rng rng(spec.seed);
  PatchData patch;
  for (int p = 0; p < n_corr; ++p) {
    const int row0 = static_cast<int>(rng.next_int(0, d_src.height - s));
    const int col0 = static_cast<int>(rng.next_int(0, d_src.width - s));
    ++stats.sampled;
    patch.indices.clear();
    patch.x.clear();
    patch.y.clear();
    for (int r = row0; r < row0 + s; ++r) {
      for (int c = col0; c < col0 + s; ++c) {
        const std::size_t idx = static_cast<std::size_t>(r) * d_src.width + c;
        const double xv = d_src.values[idx];
        const double yv = d_target.values[idx];
        if (xv <= 0.0 || yv <= 0.0) continue;  // no depth signal
        patch.indices.push_back(idx);
        patch.x.push_back(xv);
        patch.y.push_back(yv);
      }
    }
    if (patch.x.size() < quota) {
      ++stats.skipped;
      continue;
    }
    ++stats.evaluated;
    const PatchMoments m = patch_moments(patch);
    if (m.degenerate) ++stats.degenerate;
    consume(patch, m);
  }
  return stats;
}

}  // namespace

double pcc(const std::vector<double>& x, const std::vector<double>& y,
           bool* degenerate) {
  if (x.size() != y.size())
    throw Error("pcc requires equal lengths, got " + std::to_string(x.size()) +
                " vs " + std::to_string(y.size()));
  if (x.size() < 2) throw Error("pcc requires at least 2 samples");
  PatchData data;
  data.x = x;
  data.y = y;
  const PatchMoments m = patch_moments(data);
  if (degenerate) *degenerate = m.degenerate;
  return m.degenerate ? 0.0 : m.pcc_value;
}

double local_pearson_loss(const Grid& d_src, const Grid& d_target,
                          const PatchSpec& spec, PatchLossStats* stats) {
  double sum = 0.0;
  const PatchLossStats run = for_each_patch(
      d_src, d_target, spec, [&](const PatchData&, const PatchMoments& m) {
        sum += 1.0 - (m.degenerate ? 0.0 : m.pcc_value);
      });
  if (stats) *stats = run;
  return run.evaluated == 0 ? 0.0 : sum / run.evaluated;
}

Grid local_pearson_loss_grad(const Grid& d_src, const Grid& d_target,
                             const PatchSpec& spec) {
  Grid grad = make_grid(d_src.width, d_src.height);
  std::vector<std::pair<std::size_t, double>> contributions;
  int evaluated = 0;
  for_each_patch(
      d_src, d_target, spec,
      [&](const PatchData& patch, const PatchMoments& m) {
        ++evaluated;
        if (m.degenerate) return;  // flat loss plateau, zero gradient
        // d PCC / d x_k = (y~_k - x~_k Sxy/Sxx) / sqrt(Sxx Syy); the loss
        // term is (1 - PCC) so the sign flips.
        const double inv_root = 1.0 / std::sqrt(m.sxx * m.syy);
        const double ratio = m.sxy / m.sxx;
        for (std::size_t i = 0; i < patch.indices.size(); ++i) {
          const double xc = patch.x[i] - m.mean_x;
          const double yc = patch.y[i] - m.mean_y;
          contributions.emplace_back(patch.indices[i],
                                     -(yc - xc * ratio) * inv_root);
        }
      });
  if (evaluated == 0) return grad;
  const double scale = 1.0 / evaluated;
  for (const auto& [idx, value] : contributions) grad.values[idx] += value * scale;
  return grad;
}

double psnr(const Image& a, const Image& b) {
  if (a.width != b.width || a.height != b.height)
    throw Error("psnr requires equal image dimensions");
  if (a.rgb.empty()) throw Error("psnr requires non-empty images");
  double mse = 0.0;
  for (std::size_t i = 0; i < a.rgb.size(); ++i) {
    const double d = a.rgb[i] - b.rgb[i];
    mse += d * d;
  }
  mse /= static_cast<double>(a.rgb.size());
  if (mse <= 0.0) return kPsnrCap;
  return std::min(kPsnrCap, 10.0 * std::log10(1.0 / mse));
}

double ssim(const Image& a, const Image& b) {
  if (a.width != b.width || a.height != b.height)
    throw Error("ssim requires equal image dimensions");
  constexpr int kWindow = 11;
  constexpr double kSigma = 1.5;
  constexpr double kC1 = 0.01 * 0.01;
  constexpr double kC2 = 0.03 * 0.03;
  if (a.width < kWindow || a.height < kWindow)
    throw Error("ssim requires images at least 11x11");

  double kernel[kWindow];
  double kernel_sum = 0.0;
  for (int i = 0; i < kWindow; ++i) {
    const double d = i - (kWindow - 1) / 2.0;
    kernel[i] = std::exp(-d * d / (2.0 * kSigma * kSigma));
    kernel_sum += kernel[i];
  }
  for (double& k : kernel) k /= kernel_sum;

  // Separable window means over the five products, valid positions only.
  const int out_w = a.width - kWindow + 1;
  const int out_h = a.height - kWindow + 1;
  double total = 0.0;
  std::size_t count = 0;
  std::vector<double> row_acc[5];
  for (auto& acc : row_acc)
    acc.assign(static_cast<std::size_t>(a.height) * out_w, 0.0);
  for (int ch = 0; ch < 3; ++ch) {
    // Horizontal pass.
    for (int r = 0; r < a.height; ++r) {
      for (int c = 0; c < out_w; ++c) {
        double m[5] = {0, 0, 0, 0, 0};
        for (int k = 0; k < kWindow; ++k) {
          const double av = a.at(r, c + k, ch);
          const double bv = b.at(r, c + k, ch);
          m[0] += kernel[k] * av;
          m[1] += kernel[k] * bv;
          m[2] += kernel[k] * av * av;
          m[3] += kernel[k] * bv * bv;
          m[4] += kernel[k] * av * bv;
        }
        for (int t = 0; t < 5; ++t)
          row_acc[t][static_cast<std::size_t>(r) * out_w + c] = m[t];
      }
    }
    // Vertical pass plus the SSIM formula.
    for (int r = 0; r < out_h; ++r) {
      for (int c = 0; c < out_w; ++c) {
        double m[5] = {0, 0, 0, 0, 0};
        for (int k = 0; k < kWindow; ++k) {
          const std::size_t idx =
              static_cast<std::size_t>(r + k) * out_w + c;
          for (int t = 0; t < 5; ++t) m[t] += kernel[k] * row_acc[t][idx];
        }
        const double mu_a = m[0], mu_b = m[1];
        const double var_a = m[2] - mu_a * mu_a;
        const double var_b = m[3] - mu_b * mu_b;
        const double cov = m[4] - mu_a * mu_b;
        const double value =
            ((2.0 * mu_a * mu_b + kC1) * (2.0 * cov + kC2)) /
            ((mu_a * mu_a + mu_b * mu_b + kC1) * (var_a + var_b + kC2));
        total += value;
        ++count;
      }
    }
  }
  return total / static_cast<double>(count);
}

}  // namespace splat
