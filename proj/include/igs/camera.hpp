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

#pragma once

#include <string>

#include "igs/util.hpp"

namespace igs {

struct Camera {
  Mat3 intrinsics = Mat3::Identity();   // pixels
  Mat4 extrinsics = Mat4::Identity();   // world-to-camera

  void validate() const;

  /// Flattened concatenation of the extrinsic (16) and intrinsic (9)
  /// matrices, row-major: the 25-vector fed to the pose encoder.
  Eigen::VectorXd flatten25() const;

  static Camera look_at(const Vec3& eye, const Vec3& target, const Vec3& up, double focal_px,
                        int width, int height);
};

void write_camera(const std::string& path, const Camera& cam);
Camera read_camera(const std::string& path);

}  // namespace igs
