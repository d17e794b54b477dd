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

#include <doctest.h>

#include "helpers.hpp"
#include "igs/mesh.hpp"

using namespace igs;

namespace {

void build_default(SkeletonRig& rig, HandMesh& mesh) {
  build_canonical_rig(parse_rig_spec(default_rig_spec_text()), rig, mesh);
}

}  // namespace

TEST_CASE("default rig: 32 joints, interaction-free canonical pose") {
  SkeletonRig rig;
  HandMesh mesh;
  build_default(rig, mesh);
  CHECK(rig.joint_count() == 32);
  CHECK(rig.joints_per_hand == 16);
  // Exhaustive pairwise gap between the two hands.
  CHECK(min_inter_hand_distance(mesh) > kInteractionRadius);
  // Parents precede children.
  for (int j = 0; j < rig.joint_count(); ++j)
    if (rig.joints[j].parent >= 0) CHECK(rig.joints[j].parent < j);
}

TEST_CASE("rig spec errors name the offending joint") {
  // Parenting cycle a -> b -> a.
  std::string bad =
      "rig_version 1\nrings 4\nuv_grid 2 2\n"
      "hand left\ncenter -0.15 0 0\n"
      "joint wrist parent - finger -1 offset 0 0 0 radius 0.01\n"
      "joint a parent b finger 0 offset 0 0 0.05 radius 0.01\n"
      "joint b parent a finger 0 offset 0 0 0.05 radius 0.01\n"
      "hand right\ncenter 0.15 0 0\n"
      "joint wrist parent - finger -1 offset 0 0 0 radius 0.01\n"
      "joint a parent wrist finger 0 offset 0 0 0.05 radius 0.01\n"
      "joint b parent a finger 0 offset 0 0 0.05 radius 0.01\n";
  SkeletonRig rig;
  HandMesh mesh;
  CHECK_THROWS_WITH_AS(build_canonical_rig(parse_rig_spec(bad), rig, mesh),
                       doctest::Contains("cycle"), std::runtime_error);

  // Nonpositive bone length.
  std::string zero_bone =
      "rig_version 1\nrings 4\nuv_grid 2 2\n"
      "hand left\ncenter -0.15 0 0\n"
      "joint wrist parent - finger -1 offset 0 0 0 radius 0.01\n"
      "joint stub parent wrist finger 0 offset 0 0 0 radius 0.01\n"
      "hand right\ncenter 0.15 0 0\n"
      "joint wrist parent - finger -1 offset 0 0 0 radius 0.01\n"
      "joint stub parent wrist finger 0 offset 0 0 0.05 radius 0.01\n";
  CHECK_THROWS_WITH_AS(build_canonical_rig(parse_rig_spec(zero_bone), rig, mesh),
                       doctest::Contains("stub"), std::runtime_error);
}

TEST_CASE("uv: unit square, hands in disjoint halves, weights on the simplex") {
  SkeletonRig rig;
  HandMesh mesh;
  build_default(rig, mesh);
  for (Index i = 0; i < mesh.vertex_count(); ++i) {
    CHECK(mesh.uv(i, 0) >= 0.0);
    CHECK(mesh.uv(i, 0) <= 1.0);
    CHECK(mesh.uv(i, 1) >= 0.0);
    CHECK(mesh.uv(i, 1) <= 1.0);
    if (mesh.side[i] == kLeft)
      CHECK(mesh.uv(i, 0) < 0.5);
    else
      CHECK(mesh.uv(i, 0) >= 0.5);
    CHECK(std::abs(mesh.weights.row(i).sum() - 1.0) < 1e-6);
    CHECK(mesh.weights.row(i).minCoeff() >= 0.0);
  }
}

TEST_CASE("LBS: identity pose, rigid roots, single-weight joint") {
  SkeletonRig rig;
  HandMesh mesh;
  build_default(rig, mesh);
  PoseParams rest = PoseParams::rest(rig);

  // Zero pose, identity root: exact identity.
  HandMesh posed = pose_mesh(mesh, rig, rest);
  CHECK((posed.vertices - mesh.vertices).abs().maxCoeff() <= 1e-9);

  // Rigid rotation + translation on both roots: every vertex moves rigidly.
  PoseParams rigid = rest;
  const Vec3 aa(0.3, -0.2, 0.5);
  const Vec3 t(0.05, -0.1, 0.2);
  rigid.root_rot = {aa, aa};
  rigid.root_trans = {t, t};
  posed = pose_mesh(mesh, rig, rigid);
  const Mat3 R = Eigen::AngleAxisd(aa.norm(), aa.normalized()).toRotationMatrix();
  for (Index i = 0; i < mesh.vertex_count(); i += 37) {
    const Vec3 expect = R * mesh.vertices.row(i).matrix().transpose() + t;
    CHECK((posed.vertices.row(i).matrix().transpose() - expect).norm() < 1e-12);
  }

  // A vertex fully bound to one joint follows that joint's rigid transform.
  HandMesh single = mesh;
  const int joint = 18;  // some right-hand joint
  single.weights.row(0).setZero();
  single.weights(0, joint) = 1.0;
  PoseParams bent = rest;
  const int local = joint % rig.joints_per_hand;
  bent.theta[rig.joints[joint].side](3 * local + 1) = 0.7;
  const HandMesh bent_mesh = pose_mesh(single, rig, bent);
  const std::vector<Mat4> G = skinning_transforms(rig, bent);
  const Vec3 expect = (G[joint] * mesh.vertices.row(0).matrix().transpose().homogeneous())
                          .topRows<3>();
  CHECK((bent_mesh.vertices.row(0).matrix().transpose() - expect).norm() < 1e-12);
}

TEST_CASE("LBS rejects mismatched weight matrices") {
  SkeletonRig rig;
  HandMesh mesh;
  build_default(rig, mesh);
  HandMesh broken = mesh;
  broken.weights = Array::Zero(mesh.vertex_count(), rig.joint_count() - 1);
  CHECK_THROWS(pose_mesh(broken, rig, PoseParams::rest(rig)));
}

TEST_CASE("subdivision: counts, simplex weights, planar area, level 0") {
  SkeletonRig rig;
  HandMesh mesh;
  build_default(rig, mesh);

  const HandMesh same = upsample_mesh(mesh, 0);
  CHECK(same.vertex_count() == mesh.vertex_count());
  CHECK(same.face_count() == mesh.face_count());

  const int edges = unique_edge_count(mesh);
  const HandMesh up = upsample_mesh(mesh, 1);
  CHECK(up.face_count() == 4 * mesh.face_count());
  CHECK(up.vertex_count() == mesh.vertex_count() + edges);
  for (Index i = 0; i < up.vertex_count(); ++i)
    CHECK(std::abs(up.weights.row(i).sum() - 1.0) < 1e-6);

  // Planar patch: area is exactly preserved by midpoint subdivision.
  HandMesh patch;
  patch.vertices.resize(4, 3);
  patch.vertices << 0, 0, 0, 1, 0, 0, 1, 1, 0, 0, 1, 0;
  patch.faces = {{0, 1, 2}, {0, 2, 3}};
  patch.uv.resize(4, 2);
  patch.uv << 0, 0, 0.4, 0, 0.4, 0.4, 0, 0.4;
  patch.weights = Array::Zero(4, 2);
  patch.weights.col(0) = 1.0;
  patch.side = {0, 0, 0, 0};
  patch.label_parent = {0, 1, 2, 3};
  const double area0 = total_surface_area(patch);
  const double area2 = total_surface_area(upsample_mesh(patch, 2));
  CHECK(std::abs(area2 - area0) / area0 <= 1e-6);
}

TEST_CASE("point extraction is a bit-exact view of the mesh") {
  SkeletonRig rig;
  HandMesh mesh;
  build_default(rig, mesh);
  const PointSet ps = vertices_to_points(mesh);
  CHECK(ps.count() == mesh.vertex_count());
  CHECK((ps.positions == mesh.vertices).all());
  CHECK((ps.uv == mesh.uv).all());
  for (Index i = 0; i < ps.count(); ++i) CHECK(ps.source_vertex[i] == i);
}

TEST_CASE("beta stays within bounds and scales bones continuously") {
  SkeletonRig rig;
  HandMesh mesh;
  build_default(rig, mesh);
  PoseParams p = PoseParams::rest(rig);
  p.beta[kLeft](1) = 4.0;
  CHECK_THROWS(pose_mesh(mesh, rig, p));

  p.beta[kLeft](1) = 2.0;  // lengthen the left index finger
  const HandMesh posed = pose_mesh(mesh, rig, p);
  CHECK(total_surface_area(posed) > 0.0);
  // Finger-1 tip region moved, wrist region did not.
  double moved = 0.0;
  for (Index i = 0; i < mesh.vertex_count(); ++i)
    moved = std::max(moved, (posed.vertices.row(i) - mesh.vertices.row(i)).matrix().norm());
  CHECK(moved > 0.001);
}

TEST_CASE("scene validation catches connectivity and proximity violations") {
  SkeletonRig rig;
  HandMesh mesh;
  build_default(rig, mesh);
  TwoHandScene scene;
  scene.canonical = mesh;
  scene.pose = PoseParams::rest(rig);
  scene.posed = pose_mesh(mesh, rig, scene.pose);
  validate_scene(scene);

  TwoHandScene bad = scene;
  bad.posed.faces.pop_back();
  CHECK_THROWS(validate_scene(bad));
}
