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

#include "igs/camera.hpp"
#include "igs/rig.hpp"

namespace igs {

struct SceneFrame {
  PoseParams pose;
  Camera cam;
  std::string image_path;  // may be empty (e.g. animation scripts)
  std::string mask_path;   // may be empty
  bool interacting = false;
};

/// Human-readable scene description; bulk data (images) stays in files.
struct SceneFile {
  std::string rig_path;  // resolved to an absolute/openable path on read
  int subject = 0;
  std::vector<SceneFrame> frames;
};

SceneFile read_scene(const std::string& path);
/// Paths inside the scene are written as given (callers pass relative ones).
void write_scene(const std::string& path, const SceneFile& scene);

void write_pose(const std::string& path, const PoseParams& pose);
PoseParams read_pose(const std::string& path);

}  // namespace igs
