// Copyright 2026 The igs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "igs/camera.hpp"

#include <fstream>
#include <sstream>

namespace igs {

void Camera::validate() const {
  require(intrinsics(0, 0) > 0.0 && intrinsics(1, 1) > 0.0,
          "camera: focal entries must be positive");
  require(intrinsics.allFinite() && extrinsics.allFinite(), "camera: non-finite entries");
  const Mat3 r = extrinsics.topLeftCorner<3, 3>();
  require((r * r.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-6,
          "camera: extrinsic rotation block is not orthonormal");
  require(std::abs(extrinsics(3, 0)) + std::abs(extrinsics(3, 1)) + std::abs(extrinsics(3, 2)) <
                  1e-12 &&
              std::abs(extrinsics(3, 3) - 1.0) < 1e-12,
          "camera: extrinsic bottom row must be [0 0 0 1]");
}

Eigen::VectorXd Camera::flatten25() const {
  Eigen::VectorXd v(25);
  int k = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) v(k++) = extrinsics(i, j);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) v(k++) = intrinsics(i, j);
  return v;
}

Camera Camera::look_at(const Vec3& eye, const Vec3& target, const Vec3& up, double focal_px,
                       int width, int height) {
  // Camera frame: +z forward (into the scene), +x right, +y down.
  const Vec3 fwd = (target - eye).normalized();
  Vec3 right = fwd.cross(-up).normalized();
  const Vec3 down = fwd.cross(right).normalized();
  Mat3 r;
  r.row(0) = right.transpose();
  r.row(1) = down.transpose();
  r.row(2) = fwd.transpose();
  Camera cam;
  cam.extrinsics = Mat4::Identity();
  cam.extrinsics.topLeftCorner<3, 3>() = r;
  cam.extrinsics.topRightCorner<3, 1>() = -r * eye;
  cam.intrinsics = Mat3::Identity();
  cam.intrinsics(0, 0) = focal_px;
  cam.intrinsics(1, 1) = focal_px;
  cam.intrinsics(0, 2) = 0.5 * width;
  cam.intrinsics(1, 2) = 0.5 * height;
  cam.validate();
  return cam;
}

void write_camera(const std::string& path, const Camera& cam) {
  std::ofstream f(path);
  require(f.good(), "camera: cannot open " + path);
  f.precision(17);
  f << "camera_version 1\n";
  f << "intrinsics";
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) f << " " << cam.intrinsics(i, j);
  f << "\nextrinsics";
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) f << " " << cam.extrinsics(i, j);
  f << "\n";
}

Camera read_camera(const std::string& path) {
  std::ifstream f(path);
  require(f.good(), "camera: cannot open " + path);
  std::string key;
  Camera cam;
  bool version_ok = false, got_k = false, got_e = false;
  while (f >> key) {
    if (key == "camera_version") {
      int v = 0;
      f >> v;
      require(v == 1, "camera: unknown camera_version " + std::to_string(v));
      version_ok = true;
    } else if (key == "intrinsics") {
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) f >> cam.intrinsics(i, j);
      got_k = true;
    } else if (key == "extrinsics") {
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) f >> cam.extrinsics(i, j);
      got_e = true;
    } else {
      fail("camera: unknown key '" + key + "' in " + path);
    }
  }
  require(version_ok && got_k && got_e, "camera: incomplete file " + path);
  cam.validate();
  return cam;
}

}  // namespace igs
