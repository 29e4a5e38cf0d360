// Copyright Contributors to the splatops Project
// SPDX-License-Identifier: Apache-2.0
//
// Python bindings for the core operations. Images and grids cross the
// boundary as numpy arrays (row-major, float64).

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "splat/camera_io.hpp"
#include "splat/dip.hpp"
#include "splat/image_io.hpp"
#include "splat/metrics.hpp"
#include "splat/ply_io.hpp"
#include "splat/poses.hpp"
#include "splat/pruner.hpp"
#include "splat/rasterizer.hpp"
#include "splat/toy_scenes.hpp"
#include "splat/types.hpp"

namespace py = pybind11;

namespace {

py::array_t<double> grid_to_numpy(const splat::Grid& grid) {
  py::array_t<double> out({grid.height, grid.width});
  std::copy(grid.values.begin(), grid.values.end(), out.mutable_data());
  return out;
}

splat::Grid numpy_to_grid(const py::array_t<double>& array) {
  if (array.ndim() != 2) throw splat::Error("expected a 2-d array");
  auto buf = array.unchecked<2>();
  splat::Grid grid = splat::make_grid(static_cast<int>(buf.shape(1)),
                                      static_cast<int>(buf.shape(0)));
  for (py::ssize_t r = 0; r < buf.shape(0); ++r)
    for (py::ssize_t c = 0; c < buf.shape(1); ++c)
      grid.values[static_cast<std::size_t>(r * buf.shape(1) + c)] = buf(r, c);
  return grid;
}

py::array_t<double> image_to_numpy(const splat::Image& image) {
  py::array_t<double> out({image.height, image.width, 3});
  std::copy(image.rgb.begin(), image.rgb.end(), out.mutable_data());
  return out;
}

splat::Image numpy_to_image(const py::array_t<double>& array) {
  if (array.ndim() != 3 || array.shape(2) != 3)
    throw splat::Error("expected an array of shape (H, W, 3)");
  auto buf = array.unchecked<3>();
  splat::Image image = splat::make_image(static_cast<int>(buf.shape(1)),
                                         static_cast<int>(buf.shape(0)));
  std::size_t i = 0;
  for (py::ssize_t r = 0; r < buf.shape(0); ++r)
    for (py::ssize_t c = 0; c < buf.shape(1); ++c)
      for (py::ssize_t ch = 0; ch < 3; ++ch) image.rgb[i++] = buf(r, c, ch);
  return image;
}

splat::RenderOptions make_options(int tile_size,
                                  const Eigen::Vector3d& background) {
  splat::RenderOptions opts;
  opts.tile_size = tile_size;
  opts.background = background;
  return opts;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Gaussian-splat rendering, depth diagnostics and floater pruning";

  py::register_exception<splat::Error>(m, "SplatError", PyExc_ValueError);

  py::class_<splat::Scene>(m, "Scene")
      .def_property_readonly("size", &splat::Scene::size)
      .def_property_readonly("sh_degree", &splat::Scene::sh_degree)
      .def_readonly("source_path", &splat::Scene::source_path)
      .def("position",
           [](const splat::Scene& s, std::size_t i) {
             if (i >= s.size()) throw splat::Error("gaussian index range");
             return s.gaussians[i].position;
           })
      .def("__len__", &splat::Scene::size);

  py::class_<splat::Camera>(m, "Camera")
      .def_readwrite("id", &splat::Camera::id)
      .def_readwrite("image_name", &splat::Camera::image_name)
      .def_readwrite("width", &splat::Camera::width)
      .def_readwrite("height", &splat::Camera::height)
      .def_readwrite("position", &splat::Camera::position)
      .def_readwrite("rotation", &splat::Camera::rotation)
      .def_readwrite("fx", &splat::Camera::fx)
      .def_readwrite("fy", &splat::Camera::fy);

  m.def("read_ply", &splat::read_ply, py::arg("path"));
  m.def("write_ply", &splat::write_ply, py::arg("scene"), py::arg("path"));
  m.def("read_cameras", &splat::read_cameras, py::arg("path"));
  m.def("write_cameras", &splat::write_cameras, py::arg("cameras"),
        py::arg("path"));

  m.def(
      "read_depth_pfm",
      [](const std::string& path) {
        return grid_to_numpy(splat::read_depth_pfm(path).grid());
      },
      py::arg("path"));
  m.def(
      "write_pfm",
      [](const py::array_t<double>& values, const std::string& path) {
        splat::write_pfm(numpy_to_grid(values), path);
      },
      py::arg("values"), py::arg("path"));

  m.def(
      "render",
      [](const splat::Scene& scene, const splat::Camera& camera,
         int tile_size, const Eigen::Vector3d& background) {
        const splat::RenderOutput out =
            splat::render(scene, camera, make_options(tile_size, background));
        py::dict result;
        result["color"] = image_to_numpy(out.color_image());
        result["d_alpha"] = grid_to_numpy(out.d_alpha_grid());
        result["d_mode"] = grid_to_numpy(out.d_mode_grid());
        return result;
      },
      py::arg("scene"), py::arg("camera"), py::arg("tile_size") = 16,
      py::arg("background") = Eigen::Vector3d::Zero().eval());

  m.def(
      "dip",
      [](const std::vector<double>& values) {
        return splat::dip_statistic(values).dip;
      },
      py::arg("values"));
  m.def("pcc",
        [](const std::vector<double>& x, const std::vector<double>& y) {
          return splat::pcc(x, y);
        },
        py::arg("x"), py::arg("y"));
  m.def(
      "local_pearson_loss",
      [](const py::array_t<double>& x, const py::array_t<double>& y,
         int box_p, double p_corr, std::uint64_t seed) {
        splat::PatchSpec spec;
        spec.box_p = box_p;
        spec.p_corr = p_corr;
        spec.seed = seed;
        return splat::local_pearson_loss(numpy_to_grid(x), numpy_to_grid(y),
                                         spec);
      },
      py::arg("x"), py::arg("y"), py::arg("box_p") = 128,
      py::arg("p_corr") = 0.5, py::arg("seed") = 0);
  m.def(
      "psnr",
      [](const py::array_t<double>& a, const py::array_t<double>& b) {
        return splat::psnr(numpy_to_image(a), numpy_to_image(b));
      },
      py::arg("a"), py::arg("b"));
  m.def(
      "ssim",
      [](const py::array_t<double>& a, const py::array_t<double>& b) {
        return splat::ssim(numpy_to_image(a), numpy_to_image(b));
      },
      py::arg("a"), py::arg("b"));

  m.def(
      "prune_floaters",
      [](splat::Scene& scene, const std::vector<splat::Camera>& cameras,
         double a, double b, double power_thresh, int tile_size) {
        splat::PruneConfig cfg;
        cfg.a = a;
        cfg.b = b;
        cfg.power_thresh = power_thresh;
        const splat::FloaterReport report = splat::prune_floaters(
            scene, cameras, cfg,
            make_options(tile_size, Eigen::Vector3d::Zero()));
        py::dict result;
        result["average_dip"] = report.average_dip;
        result["percentile"] = report.percentile;
        result["pruned"] = report.pruned_ids.size();
        result["size_before"] = report.scene_size_before;
        result["size_after"] = report.scene_size_after;
        return result;
      },
      py::arg("scene"), py::arg("cameras"), py::arg("a") = 97.0,
      py::arg("b") = -8.0, py::arg("power_thresh") = 1.0 / 255.0,
      py::arg("tile_size") = 16,
      "Removes floaters from the scene in place and returns a summary");

  m.def(
      "sample_novel_poses",
      [](const std::vector<splat::Camera>& cameras, std::size_t k,
         std::uint64_t seed, double theta_min, double theta_max, int column,
         const Eigen::Vector3d& center) {
        splat::PoseSampler sampler;
        sampler.y_bar = splat::estimate_axis(cameras, column);
        sampler.theta_range = {theta_min, theta_max};
        sampler.seed = seed;
        sampler.center = center;
        return splat::sample_novel_poses(cameras, sampler, k);
      },
      py::arg("cameras"), py::arg("k"), py::arg("seed") = 0,
      py::arg("theta_min") = -10.0, py::arg("theta_max") = 10.0,
      py::arg("column") = 0,
      py::arg("center") = Eigen::Vector3d::Zero().eval());

  m.def(
      "make_toy_fixture",
      [](const std::string& kind, std::uint64_t seed) {
        splat::ToySceneSpec spec;
        spec.kind = kind;
        spec.seed = seed;
        splat::ToyFixture fixture = splat::make_toy_fixture(spec);
        return py::make_tuple(std::move(fixture.scene),
                              std::move(fixture.cameras));
      },
      py::arg("kind") = "ray4", py::arg("seed") = 0,
      "Builds a synthetic scene and its cameras for experiments");
}
