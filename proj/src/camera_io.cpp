// Copyright Contributors to the splatops Project
// SPDX-License-Identifier: Apache-2.0
#include "splat/camera_io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "splat/common.hpp"

namespace splat {
namespace {

using Json = nlohmann::ordered_json;

double require_finite(double value, const std::string& where) {
  if (!std::isfinite(value)) throw Error(where + " is not finite");
  return value;
}

}  // namespace

double rotation_drift(const Eigen::Matrix3d& rotation) {
  const Eigen::Matrix3d gram =
      rotation.transpose() * rotation - Eigen::Matrix3d::Identity();
  return gram.cwiseAbs().maxCoeff();
}

Eigen::Matrix3d orthonormalize_rotation(const Eigen::Matrix3d& rotation) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(
      rotation, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d snapped = svd.matrixU() * svd.matrixV().transpose();
  if (snapped.determinant() <= 0.0)
    throw Error("rotation projects to a reflection, not a rotation");
  return snapped;
}

std::vector<Camera> read_cameras(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw Error(path + ": cannot open file");
  Json root;
  try {
    root = Json::parse(file);
  } catch (const Json::parse_error& e) {
    throw Error(path + ": " + e.what());
  }
  if (!root.is_array()) throw Error(path + ": top-level value must be an array");

  std::vector<Camera> cameras;
  std::set<int> seen_ids;
  for (std::size_t idx = 0; idx < root.size(); ++idx) {
    const Json& entry = root[idx];
    const std::string where = path + ": camera entry " + std::to_string(idx);
    if (!entry.is_object()) throw Error(where + " is not an object");
    auto field = [&](const char* key) -> const Json& {
      auto it = entry.find(key);
      if (it == entry.end())
        throw Error(where + " is missing field '" + key + "'");
      return *it;
    };
    auto number = [&](const char* key) {
      const Json& value = field(key);
      if (!value.is_number())
        throw Error(where + " field '" + key + "' is not a number");
      return require_finite(value.get<double>(), where + " field '" + key + "'");
    };

    Camera cam;
    {
      const Json& id = field("id");
      if (!id.is_number_integer())
        throw Error(where + " field 'id' is not an integer");
      cam.id = id.get<int>();
    }
    {
      const Json& name = field("img_name");
      if (!name.is_string())
        throw Error(where + " field 'img_name' is not a string");
      cam.image_name = name.get<std::string>();
    }
    {
      const Json& w = field("width");
      const Json& h = field("height");
      if (!w.is_number_integer() || !h.is_number_integer())
        throw Error(where + " fields 'width'/'height' must be integers");
      cam.width = w.get<int>();
      cam.height = h.get<int>();
      if (cam.width <= 0 || cam.height <= 0)
        throw Error(where + " has non-positive image dimensions");
    }
    {
      const Json& position = field("position");
      if (!position.is_array() || position.size() != 3)
        throw Error(where + " field 'position' must be an array of 3 numbers");
      for (int i = 0; i < 3; ++i) {
        if (!position[i].is_number())
          throw Error(where + " field 'position' must be an array of 3 numbers");
        cam.position[i] = require_finite(position[i].get<double>(),
                                         where + " field 'position'");
      }
    }
    {
      const Json& rotation = field("rotation");
      if (!rotation.is_array() || rotation.size() != 3)
        throw Error(where + " field 'rotation' must be 3 rows of 3 numbers");
      for (int r = 0; r < 3; ++r) {
        const Json& row = rotation[r];
        if (!row.is_array() || row.size() != 3)
          throw Error(where + " field 'rotation' must be 3 rows of 3 numbers");
        for (int c = 0; c < 3; ++c) {
          if (!row[c].is_number())
            throw Error(where + " field 'rotation' must be 3 rows of 3 numbers");
          cam.rotation(r, c) = require_finite(row[c].get<double>(),
                                              where + " field 'rotation'");
        }
      }
    }
    cam.fx = number("fx");
    cam.fy = number("fy");
    if (cam.fx <= 0.0 || cam.fy <= 0.0)
      throw Error(where + " has non-positive focal length");

    const double drift = rotation_drift(cam.rotation);
    if (drift > 1e-3)
      throw Error(where + " rotation deviates from orthonormal by " +
                  std::to_string(drift) + ", above the 0.001 tolerance");
    if (cam.rotation.determinant() <= 0.0)
      throw Error(where + " rotation has non-positive determinant");
    if (drift > 0.0) cam.rotation = orthonormalize_rotation(cam.rotation);

    if (!seen_ids.insert(cam.id).second)
      throw Error(path + ": duplicate camera id " + std::to_string(cam.id));
    cameras.push_back(std::move(cam));
  }
  return cameras;
}

void write_cameras(const std::vector<Camera>& cameras, const std::string& path) {
  Json root = Json::array();
  for (const Camera& cam : cameras) {
    Json entry;
    entry["id"] = cam.id;
    entry["img_name"] = cam.image_name;
    entry["width"] = cam.width;
    entry["height"] = cam.height;
    entry["position"] = {cam.position[0], cam.position[1], cam.position[2]};
    Json rotation = Json::array();
    for (int r = 0; r < 3; ++r)
      rotation.push_back(
          {cam.rotation(r, 0), cam.rotation(r, 1), cam.rotation(r, 2)});
    entry["rotation"] = std::move(rotation);
    entry["fx"] = cam.fx;
    entry["fy"] = cam.fy;
    root.push_back(std::move(entry));
  }
  std::ofstream file(path, std::ios::trunc);
  if (!file) throw Error(path + ": cannot open file for writing");
  file << root.dump(2) << "\n";
  if (!file) throw Error(path + ": write failed");
}

}  // namespace splat
