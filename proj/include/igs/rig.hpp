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

#include <array>
#include <string>
#include <vector>

#include "igs/util.hpp"

namespace igs {

inline constexpr int kLeft = 0;
inline constexpr int kRight = 1;

/// Canonical separation guarantee: the two hands of a freshly built rig keep
/// at least this Euclidean gap, so the canonical mesh is interaction-free.
inline constexpr double kInteractionRadius = 0.1;

/// Parsed, validated rig description (tube-and-cap two-hand skeleton).
struct RigSpec {
  struct JointDesc {
    std::string name;
    std::string parent;  // empty for the per-hand root
    int finger = -1;     // -1 = none; 0..4 index used by shape coefficients
    Vec3 offset = Vec3::Zero();
    double radius = 0.0;
  };
  struct TipDesc {
    std::string parent;
    Vec3 offset = Vec3::Zero();
    double radius = 0.0;
  };
  struct HandDesc {
    int side = kLeft;
    Vec3 center = Vec3::Zero();
    std::vector<JointDesc> joints;
    std::vector<TipDesc> tips;
  };
  int version = 1;
  int rings = 8;          // angular tube segments
  int uv_cols = 4;
  int uv_rows = 5;
  std::array<HandDesc, 2> hands;
};

RigSpec parse_rig_spec(const std::string& text);
RigSpec load_rig_spec(const std::string& path);

/// The default two-hand rig: 16 joints per hand (wrist + 5 fingers x 3),
/// flat open hands, palms down, wrists 0.3 m apart.
std::string default_rig_spec_text();

/// A deliberately tiny rig (one bone per hand) for gradient-check scenes.
std::string tiny_rig_spec_text();

struct SkeletonRig {
  struct Joint {
    std::string name;
    int parent = -1;        // index into joints; -1 for per-hand roots
    int side = kLeft;
    int finger = -1;
    Vec3 rest_offset = Vec3::Zero();  // from parent (roots: world position)
    Vec3 rest_pos = Vec3::Zero();     // absolute rest position
    Vec3 scale_axis = Vec3::UnitZ();  // owned-bone direction for radial shape scaling
  };
  std::vector<Joint> joints;
  int joints_per_hand = 0;

  int joint_count() const { return static_cast<int>(joints.size()); }
};

struct PoseParams {
  std::array<Eigen::VectorXd, 2> theta;  // 48 per hand (16 joints x 3, axis-angle)
  std::array<Eigen::VectorXd, 2> beta;   // 10 per hand, in [-3, 3]
  std::array<Vec3, 2> root_rot;          // axis-angle
  std::array<Vec3, 2> root_trans;

  static PoseParams rest(const SkeletonRig& rig);
  /// theta for both hands concatenated (left then right).
  Eigen::VectorXd theta_flat() const;
};

/// World transform of every joint under the pose (bind composed with the
/// parent chain); beta scales bone lengths per finger.
std::vector<Mat4> joint_world_transforms(const SkeletonRig& rig, const PoseParams& pose);

/// Per-joint skinning matrices G_j = world_j * radial_shape_j * bind_j^{-1}.
std::vector<Mat4> skinning_transforms(const SkeletonRig& rig, const PoseParams& pose);

}  // namespace igs
