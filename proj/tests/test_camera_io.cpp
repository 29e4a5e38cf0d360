// Copyright Contributors to the splatops Project
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "splat/camera_io.hpp"
#include "test_helpers.hpp"

using splat::Camera;
using splat::Error;
using splat_test::TempDir;
using splat_test::write_file_bytes;

namespace {

std::string entry_json(int id, const std::string& rotation_rows) {
  return std::string("{\"id\": ") + std::to_string(id) +
         ", \"img_name\": \"v" + std::to_string(id) +
         "\", \"width\": 64, \"height\": 48, "
         "\"position\": [0.5, -1.0, 2.0], \"rotation\": " + rotation_rows +
         ", \"fx\": 100.0, \"fy\": 100.0}";
}

const char* kIdentityRows = "[[1, 0, 0], [0, 1, 0], [0, 0, 1]]";

Eigen::Matrix3d rot_z(double degrees) {
  return Eigen::AngleAxisd(degrees * M_PI / 180.0, Eigen::Vector3d::UnitZ())
      .toRotationMatrix();
}

}  // namespace

TEST_CASE("write then read restores every camera field") {
  TempDir dir;
  std::vector<Camera> cams;
  for (int i = 0; i < 4; ++i) {
    Camera cam = splat_test::basic_camera(i + 10, 320, 240, 250.0 + i,
                                          Eigen::Vector3d(0.1 * i, -0.2, 3.0));
    cam.rotation = rot_z(30.0 * i);
    cam.image_name = "IMG_" + std::to_string(i) + ".jpg";
    cam.fy = 260.0 + i;
    cams.push_back(cam);
  }
  const std::string path = dir.file("cameras.json");
  splat::write_cameras(cams, path);
  const std::vector<Camera> back = splat::read_cameras(path);
  REQUIRE(back.size() == cams.size());
  for (std::size_t i = 0; i < cams.size(); ++i) {
    CHECK(back[i].id == cams[i].id);
    CHECK(back[i].image_name == cams[i].image_name);
    CHECK(back[i].width == cams[i].width);
    CHECK(back[i].height == cams[i].height);
    CHECK(back[i].fx == doctest::Approx(cams[i].fx).epsilon(1e-15));
    CHECK(back[i].fy == doctest::Approx(cams[i].fy).epsilon(1e-15));
    CHECK((back[i].position - cams[i].position).norm() < 1e-15);
    CHECK((back[i].rotation - cams[i].rotation).norm() < 1e-12);
  }

}

TEST_CASE("write o read is idempotent on exactly representable cameras") {
  // Entries of 0 and +-1 make the drift exactly zero, so no snapping runs
  // and the second file must match the first byte for byte.
  TempDir dir;
  Camera cam = splat_test::basic_camera(1, 100, 80, 120.0);
  cam.rotation << 0, -1, 0, 1, 0, 0, 0, 0, 1;
  Camera cam2 = splat_test::basic_camera(2, 100, 80, 120.5,
                                         Eigen::Vector3d(0.25, -0.5, 1.75));
  const std::string path = dir.file("exact.json");
  const std::string again = dir.file("exact2.json");
  splat::write_cameras({cam, cam2}, path);
  splat::write_cameras(splat::read_cameras(path), again);
  CHECK(splat_test::read_file_bytes(path) == splat_test::read_file_bytes(again));
}

TEST_CASE("small orthonormality drift is snapped back to a rotation") {
  TempDir dir;
  std::string rows = "[[1.0001, 0, 0], [0, 1, 0], [0, 0, 1]]";
  const std::string path = dir.file("drift.json");
  write_file_bytes(path, "[" + entry_json(0, rows) + "]\n");
  const std::vector<Camera> cams = splat::read_cameras(path);
  REQUIRE(cams.size() == 1);
  CHECK(splat::rotation_drift(cams[0].rotation) < 1e-12);
  CHECK((cams[0].rotation - Eigen::Matrix3d::Identity()).norm() < 1e-12);
}

TEST_CASE("drift beyond the tolerance is an error, not a repair") {
  TempDir dir;
  std::string rows = "[[1.1, 0, 0], [0, 1, 0], [0, 0, 1]]";
  const std::string path = dir.file("bad_rot.json");
  write_file_bytes(path, "[" + entry_json(0, rows) + "]\n");
  CHECK_THROWS_WITH_AS(splat::read_cameras(path),
                       doctest::Contains("deviates from orthonormal"), Error);
}

TEST_CASE("reflections are rejected even though they pass the drift check") {
  TempDir dir;
  std::string rows = "[[-1, 0, 0], [0, 1, 0], [0, 0, 1]]";
  const std::string path = dir.file("mirror.json");
  write_file_bytes(path, "[" + entry_json(0, rows) + "]\n");
  CHECK_THROWS_WITH_AS(splat::read_cameras(path),
                       doctest::Contains("determinant"), Error);
}

TEST_CASE("duplicate camera ids are rejected") {
  TempDir dir;
  const std::string path = dir.file("dupe.json");
  write_file_bytes(path, "[" + entry_json(3, kIdentityRows) + ", " +
                             entry_json(3, kIdentityRows) + "]\n");
  CHECK_THROWS_WITH_AS(splat::read_cameras(path),
                       doctest::Contains("duplicate camera id 3"), Error);
}

TEST_CASE("missing fields name the entry and the field") {
  TempDir dir;
  std::string entry = entry_json(0, kIdentityRows);
  const std::string needle = "\"fx\": 100.0, ";
  entry.replace(entry.find(needle), needle.size(), "");
  const std::string path = dir.file("nofx.json");
  write_file_bytes(path, "[" + entry_json(1, kIdentityRows) + ", " + entry +
                             "]\n");
  CHECK_THROWS_WITH_AS(
      splat::read_cameras(path),
      doctest::Contains("camera entry 1 is missing field 'fx'"), Error);
}

TEST_CASE("malformed values are rejected with their location") {
  TempDir dir;
  auto expect_error = [&](const std::string& body, const char* fragment) {
    const std::string path = dir.file("case.json");
    write_file_bytes(path, body);
    CHECK_THROWS_WITH_AS(splat::read_cameras(path), doctest::Contains(fragment),
                         Error);
  };

  expect_error("{}\n", "must be an array");
  expect_error("[[1, 2]]\n", "is not an object");
  expect_error("[" + entry_json(0, "[[1, 0], [0, 1]]") + "]\n",
               "3 rows of 3 numbers");
  std::string neg_width = entry_json(0, kIdentityRows);
  neg_width.replace(neg_width.find("\"width\": 64"),
                    std::string("\"width\": 64").size(), "\"width\": -4");
  expect_error("[" + neg_width + "]\n", "non-positive image dimensions");
  std::string bad_focal = entry_json(0, kIdentityRows);
  bad_focal.replace(bad_focal.find("\"fx\": 100.0"),
                    std::string("\"fx\": 100.0").size(), "\"fx\": 0");
  expect_error("[" + bad_focal + "]\n", "non-positive focal length");
  expect_error("[{\"id\": 1.5}]\n", "not an integer");
  expect_error("this is not json\n", "parse");

  CHECK_THROWS_WITH_AS(splat::read_cameras(dir.file("absent.json")),
                       doctest::Contains("cannot open"), Error);
}

TEST_CASE("orthonormalize_rotation projects noisy matrices") {
  splat::Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Matrix3d clean = rot_z(rng.next_uniform(-180.0, 180.0));
    Eigen::Matrix3d noisy = clean;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) noisy(r, c) += rng.next_uniform(-1e-5, 1e-5);
    const Eigen::Matrix3d snapped = splat::orthonormalize_rotation(noisy);
    CHECK(splat::rotation_drift(snapped) < 1e-12);
    CHECK((snapped - clean).norm() < 1e-4);
  }
  CHECK_THROWS_WITH_AS(
      splat::orthonormalize_rotation(Eigen::Vector3d(1, 1, -1).asDiagonal()),
      doctest::Contains("reflection"), Error);
}
