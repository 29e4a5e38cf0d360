// Copyright Contributors to the splatops Project
// SPDX-License-Identifier: Apache-2.0
//
// Command-line frontend: render, diagnose, prune, metrics, poses.
// Exit code 0 only when every per-item operation succeeded; otherwise a JSON
// error list is printed to stderr and the exit code is 1.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "splat/camera_io.hpp"
#include "splat/dip.hpp"
#include "splat/image_io.hpp"
#include "splat/metrics.hpp"
#include "splat/ply_io.hpp"
#include "splat/poses.hpp"
#include "splat/pruner.hpp"
#include "splat/rasterizer.hpp"
#include "splat/types.hpp"

namespace fs = std::filesystem;
using splat::Error;

namespace {

// Accumulates per-item failures; rendered as machine-readable JSON on exit.
struct ErrorList {
  std::vector<std::pair<std::string, std::string>> items;

  void add(const std::string& item, const std::string& message) {
    items.emplace_back(item, message);
  }
  bool empty() const { return items.empty(); }
  int finish() const {
    if (items.empty()) return 0;
    nlohmann::json out = nlohmann::json::array();
    for (const auto& [item, message] : items)
      out.push_back({{"item", item}, {"error", message}});
    std::cerr << out.dump() << "\n";
    return 1;
  }
};

// img_name values may carry subdirectories or extensions; flatten to a safe
// file stem.
std::string stem_of(const std::string& image_name) {
  std::string stem = fs::path(image_name).stem().string();
  if (stem.empty()) stem = "view";
  std::replace(stem.begin(), stem.end(), '/', '_');
  std::replace(stem.begin(), stem.end(), '\\', '_');
  return stem;
}

void ensure_outdir(const std::string& outdir) {
  std::error_code ec;
  fs::create_directories(outdir, ec);
  if (ec) throw Error(outdir + ": cannot create directory: " + ec.message());
}

void require_distinct(const std::string& input, const std::string& output) {
  std::error_code ec;
  if (fs::exists(output, ec) && fs::equivalent(input, output, ec))
    throw Error("output path '" + output +
                "' would overwrite the input; inputs are never mutated");
}

splat::RenderOptions make_opts(int tile_size,
                               const std::vector<double>& background) {
  splat::RenderOptions opts;
  opts.tile_size = tile_size;
  opts.background =
      Eigen::Vector3d(background[0], background[1], background[2]);
  return opts;
}

int cmd_render(const std::string& scene_path, const std::string& cameras_path,
               const std::string& outdir, int tile_size,
               const std::vector<double>& background) {
  ErrorList errors;
  splat::Scene scene = splat::read_ply(scene_path);
  const std::vector<splat::Camera> cameras = splat::read_cameras(cameras_path);
  ensure_outdir(outdir);
  const splat::RenderOptions opts = make_opts(tile_size, background);
  for (const splat::Camera& cam : cameras) {
    const std::string stem = stem_of(cam.image_name);
    try {
      const splat::RenderOutput out = splat::render(scene, cam, opts);
      splat::write_png_rgb8(out.color_image(),
                            (fs::path(outdir) / (stem + ".png")).string());
      splat::write_pfm(out.d_alpha_grid(),
                       (fs::path(outdir) / (stem + "_dalpha.pfm")).string());
      splat::write_pfm(out.d_mode_grid(),
                       (fs::path(outdir) / (stem + "_dmode.pfm")).string());
      std::cout << "rendered " << cam.image_name << " (" << out.width << "x"
                << out.height << ")\n";
    } catch (const std::exception& e) {
      errors.add(cam.image_name, e.what());
    }
  }
  return errors.finish();
}

int cmd_diagnose(const std::string& scene_path,
                 const std::string& cameras_path, const std::string& outdir,
                 int tile_size, const std::vector<double>& background,
                 const splat::PruneConfig& cfg, int histogram_bins) {
  splat::Scene scene = splat::read_ply(scene_path);
  const std::vector<splat::Camera> cameras = splat::read_cameras(cameras_path);
  ensure_outdir(outdir);
  const splat::RenderOptions opts = make_opts(tile_size, background);

  std::vector<std::vector<double>> deltas;
  deltas.reserve(cameras.size());
  for (const splat::Camera& cam : cameras)
    deltas.push_back(splat::relative_diff(splat::render(scene, cam, opts)));

  std::vector<splat::ViewDipInfo> info;
  const double d_bar = splat::average_dip(deltas, &info);
  const double percentile = cfg.a * std::exp(cfg.b * d_bar);

  std::ofstream summary(fs::path(outdir) / "diagnosis.csv");
  summary << "camera_id,img_name,positive_count,used_count,skipped,dip,tau\n";
  for (std::size_t v = 0; v < cameras.size(); ++v) {
    double tau = 0.0;
    bool has_tau = false;
    if (!info[v].skipped && info[v].positive_count > 0) {
      tau = splat::threshold_from_dip(deltas[v], d_bar, cfg);
      has_tau = true;
    }
    summary << cameras[v].id << "," << cameras[v].image_name << ","
            << info[v].positive_count << "," << info[v].used_count << ","
            << (info[v].skipped ? "skipped" : "ok") << ",";
    if (info[v].skipped)
      summary << ",";
    else
      summary << info[v].dip << ",";
    if (has_tau) summary << tau;
    summary << "\n";

    // Positive-delta histogram for plotting the cutoff.
    std::vector<double> positive;
    for (double d : deltas[v])
      if (d > 0.0) positive.push_back(d);
    std::ofstream hist(fs::path(outdir) /
                       (stem_of(cameras[v].image_name) + "_hist.csv"));
    hist << "bin_lo,bin_hi,count\n";
    if (!positive.empty()) {
      const auto [mn_it, mx_it] =
          std::minmax_element(positive.begin(), positive.end());
      const double lo = *mn_it;
      const double span = std::max(*mx_it - lo, 1e-12);
      std::vector<std::size_t> counts(
          static_cast<std::size_t>(histogram_bins), 0);
      for (double d : positive) {
        auto bin = static_cast<std::size_t>((d - lo) / span * histogram_bins);
        counts[std::min(bin, counts.size() - 1)]++;
      }
      for (std::size_t b = 0; b < counts.size(); ++b)
        hist << lo + span * static_cast<double>(b) / histogram_bins << ","
             << lo + span * static_cast<double>(b + 1) / histogram_bins << ","
             << counts[b] << "\n";
    }
  }
  std::cout << "views: " << cameras.size() << "\naverage_dip: " << d_bar
            << "\npercentile: " << percentile << "\n";
  return 0;
}

int cmd_prune(const std::string& scene_path, const std::string& cameras_path,
              const std::string& out_path, const std::string& outdir,
              int tile_size, const std::vector<double>& background,
              const splat::PruneConfig& cfg) {
  require_distinct(scene_path, out_path);
  splat::Scene scene = splat::read_ply(scene_path);
  const std::vector<splat::Camera> cameras = splat::read_cameras(cameras_path);
  ensure_outdir(outdir);
  const splat::RenderOptions opts = make_opts(tile_size, background);

  const splat::FloaterReport report =
      splat::prune_floaters(scene, cameras, cfg, opts);
  splat::write_ply(scene, out_path);

  std::ofstream txt(fs::path(outdir) / "prune_report.txt");
  txt << "scene: " << scene_path << "\n";
  txt << "gaussians_before: " << report.scene_size_before << "\n";
  txt << "gaussians_after: " << report.scene_size_after << "\n";
  txt << "pruned: " << report.pruned_ids.size() << "\n";
  txt << "average_dip: " << report.average_dip << "\n";
  txt << "percentile: " << report.percentile << "\n";
  for (const splat::ViewPruneReport& view : report.views) {
    txt << "view " << view.camera_id << " (" << view.image_name << ")"
        << ": positive=" << view.dip.positive_count
        << " dip=" << (view.dip.skipped ? std::string("skipped")
                                        : std::to_string(view.dip.dip))
        << " tau=" << (view.tau_valid ? std::to_string(view.tau)
                                      : std::string("n/a"))
        << " selected=" << view.selected.size() << "\n";

    const std::string stem = stem_of(view.image_name);
    splat::write_pfm(
        splat::Grid{view.width, view.height, view.delta},
        (fs::path(outdir) / (stem + "_delta.pfm")).string());
    std::vector<std::uint8_t> mask_png(view.mask.size());
    for (std::size_t i = 0; i < view.mask.size(); ++i)
      mask_png[i] = view.mask[i] ? 255 : 0;
    splat::write_png_gray8(mask_png, view.width, view.height,
                           (fs::path(outdir) / (stem + "_mask.png")).string());
  }
  std::cout << "pruned " << report.pruned_ids.size() << " of "
            << report.scene_size_before << " gaussians (average_dip "
            << report.average_dip << ", percentile " << report.percentile
            << ")\nwrote " << out_path << "\n";
  return 0;
}

int cmd_metrics(const std::string& rendered_dir, const std::string& truth_dir,
                const std::string& depth_dir, const splat::PatchSpec& spec) {
  ErrorList errors;
  std::vector<std::string> stems;
  for (const fs::directory_entry& entry : fs::directory_iterator(rendered_dir))
    if (entry.is_regular_file() && entry.path().extension() == ".png")
      stems.push_back(entry.path().stem().string());
  std::sort(stems.begin(), stems.end());
  if (stems.empty()) {
    errors.add(rendered_dir, "no .png files found");
    return errors.finish();
  }

  std::cout << "name,psnr,ssim,depth_loss\n";
  double sum_psnr = 0.0, sum_ssim = 0.0, sum_loss = 0.0;
  std::size_t image_count = 0, loss_count = 0;
  for (const std::string& stem : stems) {
    std::string psnr_s, ssim_s, loss_s;
    try {
      const splat::Image rendered =
          splat::read_png((fs::path(rendered_dir) / (stem + ".png")).string());
      const splat::Image truth =
          splat::read_png((fs::path(truth_dir) / (stem + ".png")).string());
      const double p = splat::psnr(rendered, truth);
      const double s = splat::ssim(rendered, truth);
      sum_psnr += p;
      sum_ssim += s;
      ++image_count;
      psnr_s = std::to_string(p);
      ssim_s = std::to_string(s);
    } catch (const std::exception& e) {
      errors.add(stem, e.what());
    }
    if (!depth_dir.empty()) {
      try {
        const splat::DepthMapFile rendered_depth = splat::read_depth_pfm(
            (fs::path(rendered_dir) / (stem + "_dalpha.pfm")).string());
        const splat::DepthMapFile target_depth = splat::read_depth_pfm(
            (fs::path(depth_dir) / (stem + ".pfm")).string());
        // The rendered view fixes the resolution; external depth resamples.
        const splat::Grid target = splat::resample_bilinear(
            target_depth.grid(), rendered_depth.width, rendered_depth.height);
        const double loss =
            splat::local_pearson_loss(rendered_depth.grid(), target, spec);
        sum_loss += loss;
        ++loss_count;
        loss_s = std::to_string(loss);
      } catch (const std::exception& e) {
        errors.add(stem + " (depth)", e.what());
      }
    }
    std::cout << stem << "," << psnr_s << "," << ssim_s << "," << loss_s
              << "\n";
  }
  if (image_count > 0) {
    std::cout << "mean," << sum_psnr / static_cast<double>(image_count) << ","
              << sum_ssim / static_cast<double>(image_count) << ",";
    if (loss_count > 0)
      std::cout << sum_loss / static_cast<double>(loss_count);
    std::cout << "\n";
  }
  return errors.finish();
}

int cmd_poses(const std::string& cameras_path, const std::string& out_path,
              int count, double theta_min, double theta_max,
              std::uint64_t seed, int up_column,
              const std::vector<double>& center) {
  require_distinct(cameras_path, out_path);
  const std::vector<splat::Camera> cameras = splat::read_cameras(cameras_path);
  splat::PoseSampler sampler;
  sampler.y_bar = splat::estimate_axis(cameras, up_column);
  sampler.theta_range = {theta_min, theta_max};
  sampler.seed = seed;
  sampler.center = Eigen::Vector3d(center[0], center[1], center[2]);
  const std::vector<splat::Camera> novel =
      splat::sample_novel_poses(cameras, sampler, count);
  splat::write_cameras(novel, out_path);
  std::cout << "wrote " << novel.size() << " poses to " << out_path
            << " (axis " << sampler.y_bar.transpose() << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "splat: few-shot gaussian-splat depth diagnostics and floater "
      "pruning.\nOn failure a JSON error list is printed to stderr.\n"
      "Config placeholders lambda-depth / lambda-sds are reserved for "
      "training integration and are accepted but unused."};
  app.require_subcommand(1);

  std::string scene_path, cameras_path, outdir, out_path;
  std::string rendered_dir, truth_dir, depth_dir;
  int tile_size = 16;
  std::vector<double> background{0.0, 0.0, 0.0};
  std::vector<double> center{0.0, 0.0, 0.0};
  splat::PruneConfig cfg;
  splat::PatchSpec spec;
  std::uint64_t seed = 0;
  int count = 1;
  int histogram_bins = 64;
  int up_column = 0;
  double theta_min = -10.0, theta_max = 10.0;
  double lambda_depth = 0.0, lambda_sds = 0.0;

  auto add_render_opts = [&](CLI::App* cmd) {
    cmd->add_option("--tile-size", tile_size, "Rasterizer tile size")
        ->capture_default_str();
    cmd->add_option("--background", background,
                    "Background color, three values in [0,1]")
        ->expected(3)
        ->capture_default_str();
  };
  auto add_prune_opts = [&](CLI::App* cmd) {
    cmd->add_option("--a", cfg.a, "Percentile curve amplitude, in (0, 100]")
        ->capture_default_str();
    cmd->add_option("--b", cfg.b, "Percentile curve decay, negative")
        ->capture_default_str();
    cmd->add_option("--power-thresh", cfg.power_thresh,
                    "Minimum test-alpha for selection")
        ->capture_default_str();
  };

  CLI::App* render = app.add_subcommand(
      "render", "Render color and depth maps for every camera");
  render->add_option("--scene", scene_path, "Input gaussian PLY")->required();
  render->add_option("--cameras", cameras_path, "Camera JSON file")
      ->required();
  render->add_option("--outdir", outdir, "Output directory")->required();
  add_render_opts(render);

  CLI::App* diagnose = app.add_subcommand(
      "diagnose", "Report relative-depth statistics without mutating");
  diagnose->add_option("--scene", scene_path, "Input gaussian PLY")
      ->required();
  diagnose->add_option("--cameras", cameras_path, "Camera JSON file")
      ->required();
  diagnose->add_option("--outdir", outdir, "Output directory")->required();
  diagnose
      ->add_option("--histogram-bins", histogram_bins,
                   "Bins in the per-view delta histograms")
      ->capture_default_str();
  add_render_opts(diagnose);
  add_prune_opts(diagnose);

  CLI::App* prune = app.add_subcommand(
      "prune", "Remove floaters and write the repaired scene");
  prune->add_option("--scene", scene_path, "Input gaussian PLY")->required();
  prune->add_option("--cameras", cameras_path, "Camera JSON file")
      ->required();
  prune->add_option("--out", out_path, "Output PLY (must differ from input)")
      ->required();
  prune->add_option("--outdir", outdir, "Directory for masks and the report")
      ->required();
  add_render_opts(prune);
  add_prune_opts(prune);

  CLI::App* metrics = app.add_subcommand(
      "metrics", "PSNR/SSIM against ground truth, plus the depth loss");
  metrics->add_option("--rendered", rendered_dir, "Directory of rendered PNGs")
      ->required();
  metrics->add_option("--truth", truth_dir, "Directory of ground-truth PNGs")
      ->required();
  metrics->add_option("--depth", depth_dir,
                      "Directory of target depth PFMs (optional)");
  metrics->add_option("--box-p", spec.box_p, "Correlation patch side")
      ->capture_default_str();
  metrics->add_option("--p-corr", spec.p_corr, "Fraction of patches sampled")
      ->capture_default_str();
  metrics->add_option("--seed", spec.seed, "Patch sampling seed")
      ->capture_default_str();
  metrics
      ->add_option("--lambda-depth", lambda_depth,
                   "Reserved (training out of scope)")
      ->capture_default_str();
  metrics
      ->add_option("--lambda-sds", lambda_sds,
                   "Reserved (training out of scope)")
      ->capture_default_str();

  CLI::App* poses = app.add_subcommand(
      "poses", "Sample novel camera poses about the scene axis");
  poses->add_option("--cameras", cameras_path, "Camera JSON file")
      ->required();
  poses->add_option("--out", out_path, "Output camera JSON file")->required();
  poses->add_option("--count", count, "Number of poses")->required();
  poses->add_option("--theta-min", theta_min, "Rotation lower bound, degrees")
      ->capture_default_str();
  poses->add_option("--theta-max", theta_max, "Rotation upper bound, degrees")
      ->capture_default_str();
  poses->add_option("--seed", seed, "Sampling seed")->capture_default_str();
  poses
      ->add_option("--up-column", up_column,
                   "Rotation column used as the up-vector")
      ->capture_default_str();
  poses->add_option("--center", center, "Rotation center, three values")
      ->expected(3)
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (render->parsed())
      return cmd_render(scene_path, cameras_path, outdir, tile_size,
                        background);
    if (diagnose->parsed())
      return cmd_diagnose(scene_path, cameras_path, outdir, tile_size,
                          background, cfg, histogram_bins);
    if (prune->parsed())
      return cmd_prune(scene_path, cameras_path, out_path, outdir, tile_size,
                       background, cfg);
    if (metrics->parsed())
      return cmd_metrics(rendered_dir, truth_dir, depth_dir, spec);
    if (poses->parsed())
      return cmd_poses(cameras_path, out_path, count, theta_min, theta_max,
                       seed, up_column, center);
  } catch (const std::exception& e) {
    nlohmann::json out = nlohmann::json::array();
    out.push_back({{"item", app.get_subcommands().front()->get_name()},
                   {"error", e.what()}});
    std::cerr << out.dump() << "\n";
    return 1;
  }
  return 0;
}
