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
#include <vector>

#include "igs/rig.hpp"

namespace igs {

struct HandMesh {
  ArrayX3 vertices;                       // meters
  std::vector<std::array<int, 3>> faces;
  ArrayX2 uv;                             // in [0,1]^2; left hand u < 0.5
  Array weights;                          // V x J rows on the probability simplex
  std::vector<int> side;                  // kLeft / kRight per vertex
  std::vector<int> label_parent;          // index into the detection-level vertex list

  Index vertex_count() const { return vertices.rows(); }
  int face_count() const { return static_cast<int>(faces.size()); }
};

/// Builds the skeleton and the canonical two-hand tube mesh from a spec.
/// Throws (naming the offending joint) on cycles or nonpositive bone lengths.
void build_canonical_rig(const RigSpec& spec, SkeletonRig& rig, HandMesh& mesh);

/// Linear blend skinning: v' = sum_j w_vj G_j v. Connectivity and UVs pass
/// through unchanged.
HandMesh pose_mesh(const HandMesh& mesh, const SkeletonRig& rig, const PoseParams& pose);

/// Midpoint subdivision: each level replaces every triangle by four; midpoint
/// vertices average positions, UVs and skinning weights of the edge endpoints.
HandMesh upsample_mesh(const HandMesh& mesh, int levels);

/// Re-bases label parents so this mesh becomes the detection-level point set.
void reset_label_parents(HandMesh& mesh);

struct PointSet {
  ArrayX3 positions;
  ArrayX2 uv;
  std::vector<int> side;
  std::vector<int> source_vertex;

  Index count() const { return positions.rows(); }
};

/// One point per vertex carrying (position, uv, side, source-vertex index).
PointSet vertices_to_points(const HandMesh& mesh);

struct TwoHandScene {
  HandMesh canonical;
  HandMesh posed;
  PoseParams pose;
  int subject = 0;
};

/// Checks connectivity equality and the canonical interaction-free gap.
void validate_scene(const TwoHandScene& scene);

double total_surface_area(const HandMesh& mesh);
double min_inter_hand_distance(const HandMesh& mesh);
int unique_edge_count(const HandMesh& mesh);

/// ASCII OBJ-compatible dump (v/vt/f records) for inspection only. Optional
/// per-vertex colors extend the v records.
void write_obj(const std::string& path, const HandMesh& mesh,
               const std::vector<Vec3>* vertex_colors = nullptr);

}  // namespace igs
