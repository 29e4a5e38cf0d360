// Copyright Contributors to the splatops Project
// SPDX-License-Identifier: Apache-2.0
#include "splat/types.hpp"

#include <algorithm>
#include <cmath>

namespace splat {

namespace {

constexpr double kOpacityMargin = 1e-12;
// Norm window treated as exactly unit, 8x above float32 cast noise and far
// below any intentional deviation a storage file could carry.
constexpr double kUnitQuatSnap = 1e-6;

void check_finite(const float* values, std::size_t count, const char* field) {
  for (std::size_t i = 0; i < count; ++i) {
    if (!std::isfinite(values[i])) {
      throw Error(std::string("non-finite value in gaussian field ") + field);
    }
  }
}

void check_rest_count(int rest_count) {
  if (rest_count < 0 || rest_count > kMaxRestCoeffs || rest_count % 3 != 0) {
    throw Error("rest_count must be a multiple of 3 in [0, 45], got " +
                std::to_string(rest_count));
  }
}

}  // namespace

int Scene::sh_degree() const {
  const int coeffs = 1 + rest_count / 3;
  for (int degree = 0; degree <= 3; ++degree) {
    if ((degree + 1) * (degree + 1) >= coeffs) return degree;
  }
  return 3;
}

Gaussian activate(const RawGaussian& raw, int rest_count) {
  check_rest_count(rest_count);
  check_finite(raw.position.data(), 3, "position");
  check_finite(raw.normal.data(), 3, "normal");
  check_finite(raw.f_dc.data(), 3, "f_dc");
  check_finite(raw.f_rest.data(), static_cast<std::size_t>(rest_count),
               "f_rest");
  check_finite(&raw.opacity_logit, 1, "opacity");
  check_finite(raw.log_scale.data(), 3, "scale");
  check_finite(raw.quat.data(), 4, "rotation");

  Gaussian g;
  g.position = Eigen::Vector3d(raw.position[0], raw.position[1],
                               raw.position[2]);

  const int per_channel = rest_count / 3;
  for (int c = 0; c < 3; ++c) {
    g.sh(c, 0) = raw.f_dc[static_cast<std::size_t>(c)];
    for (int k = 0; k < per_channel; ++k) {
      g.sh(c, 1 + k) = raw.f_rest[static_cast<std::size_t>(c * per_channel + k)];
    }
  }

  const double logit = raw.opacity_logit;
  g.opacity = 1.0 / (1.0 + std::exp(-logit));
  g.opacity = std::clamp(g.opacity, kOpacityMargin, 1.0 - kOpacityMargin);

  for (int a = 0; a < 3; ++a) {
    g.scale[a] = std::exp(static_cast<double>(raw.log_scale[static_cast<std::size_t>(a)]));
    if (!(g.scale[a] > 0.0) || !std::isfinite(g.scale[a])) {
      throw Error("scale activation overflowed; log_scale too large");
    }
  }

  Eigen::Quaterniond q(raw.quat[0], raw.quat[1], raw.quat[2], raw.quat[3]);
  const double norm = q.norm();
  if (!(norm > 1e-12)) {
    throw Error("zero-norm quaternion cannot be normalized");
  }
  // Quaternions already unit to float32 cast noise (norm error <= ~1.2e-7
  // from four component roundings) are kept verbatim instead of divided.
  // Dividing by 1 + eps would perturb components past a float ulp, so
  // deactivate(activate(raw)) would creep across repeated edit passes.
  if (std::abs(norm - 1.0) >= kUnitQuatSnap) {
    q = Eigen::Quaterniond(q.w() / norm, q.x() / norm, q.y() / norm,
                           q.z() / norm);
  }
  g.rotation = q;
  return g;
}

RawGaussian deactivate(const Gaussian& g, int rest_count) {
  check_rest_count(rest_count);
  if (!(g.opacity > 0.0 && g.opacity < 1.0)) {
    throw Error("opacity must lie in (0, 1) to invert the sigmoid");
  }
  if (!(g.scale.array() > 0.0).all()) {
    throw Error("scale must be positive to invert the exponential");
  }

  RawGaussian raw;
  for (int a = 0; a < 3; ++a) {
    raw.position[static_cast<std::size_t>(a)] = static_cast<float>(g.position[a]);
    raw.log_scale[static_cast<std::size_t>(a)] = static_cast<float>(std::log(g.scale[a]));
  }
  const int per_channel = rest_count / 3;
  for (int c = 0; c < 3; ++c) {
    raw.f_dc[static_cast<std::size_t>(c)] = static_cast<float>(g.sh(c, 0));
    for (int k = 0; k < per_channel; ++k) {
      raw.f_rest[static_cast<std::size_t>(c * per_channel + k)] =
          static_cast<float>(g.sh(c, 1 + k));
    }
  }
  raw.opacity_logit =
      static_cast<float>(std::log(g.opacity / (1.0 - g.opacity)));
  // Stored verbatim: activation guarantees a unit rotation, and a second
  // normalize here would shift components by more than a float ulp and
  // break bitwise storage stability. Hand-built non-unit rotations are
  // normalized by the next activation, which defines the semantics.
  raw.quat = {static_cast<float>(g.rotation.w()),
              static_cast<float>(g.rotation.x()),
              static_cast<float>(g.rotation.y()),
              static_cast<float>(g.rotation.z())};
  return raw;
}

Scene make_scene(std::vector<RawGaussian> raw, int rest_count) {
  check_rest_count(rest_count);
  Scene scene;
  scene.rest_count = rest_count;
  scene.raw = std::move(raw);
  scene.gaussians.reserve(scene.raw.size());
  for (const RawGaussian& r : scene.raw) {
    scene.gaussians.push_back(activate(r, rest_count));
  }
  return scene;
}

void append_gaussian(Scene& scene, const Gaussian& g) {
  scene.raw.push_back(deactivate(g, scene.rest_count));
  scene.gaussians.push_back(g);
}

void remove_gaussians(Scene& scene, const std::vector<std::int32_t>& indices) {
  const std::size_t n = scene.size();
  std::vector<char> drop(n, 0);
  for (std::int32_t idx : indices) {
    if (idx < 0 || static_cast<std::size_t>(idx) >= n) {
      throw Error("gaussian index out of range: " + std::to_string(idx));
    }
    drop[static_cast<std::size_t>(idx)] = 1;
  }
  std::size_t keep = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (drop[i]) continue;
    if (keep != i) {
      scene.raw[keep] = scene.raw[i];
      scene.gaussians[keep] = scene.gaussians[i];
    }
    ++keep;
  }
  scene.raw.resize(keep);
  scene.gaussians.resize(keep);
}

}  // namespace splat
