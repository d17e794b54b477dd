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

#include "igs/mesh.hpp"

#include <fstream>
#include <map>
#include <unordered_map>

namespace igs {

namespace {

struct Tube {
  Vec3 a, b;
  double radius;
  int owner;  // joint whose transform this tube follows most
  int side;
};

// Topologically orders one hand's joints, rejecting cycles and zero bones.
std::vector<int> order_hand_joints(const RigSpec::HandDesc& hand) {
  const int n = static_cast<int>(hand.joints.size());
  std::map<std::string, int> by_name;
  for (int i = 0; i < n; ++i) {
    require(!by_name.count(hand.joints[i].name),
            "rig: duplicate joint name " + hand.joints[i].name);
    by_name[hand.joints[i].name] = i;
  }
  int roots = 0;
  std::vector<int> parent(n, -1);
  for (int i = 0; i < n; ++i) {
    const auto& j = hand.joints[i];
    if (j.parent.empty()) {
      ++roots;
      continue;
    }
    auto it = by_name.find(j.parent);
    require(it != by_name.end(), "rig: joint " + j.name + " has unknown parent " + j.parent);
    parent[i] = it->second;
    require(j.offset.norm() > 0.0, "rig: joint " + j.name + " has nonpositive bone length");
  }
  require(roots == 1, "rig: each hand needs exactly one root joint");
  // Walk each parent chain; exceeding n hops means a cycle.
  std::vector<int> depth(n, -1);
  for (int i = 0; i < n; ++i) {
    int hops = 0, cur = i;
    while (parent[cur] >= 0) {
      cur = parent[cur];
      require(++hops <= n, "rig: joint parenting cycle involving " + hand.joints[i].name);
    }
    int d = 0;
    cur = i;
    while (parent[cur] >= 0) {
      cur = parent[cur];
      ++d;
    }
    depth[i] = d;
  }
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return depth[a] < depth[b]; });
  return order;
}

double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 < 1e-18) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

void orthonormal_frame(const Vec3& axis, Vec3& u, Vec3& v) {
  const Vec3 ref = (std::abs(axis.x()) < 0.9) ? Vec3::UnitX() : Vec3::UnitY();
  u = axis.cross(ref).normalized();
  v = axis.cross(u).normalized();
}

}  // namespace

void build_canonical_rig(const RigSpec& spec, SkeletonRig& rig, HandMesh& mesh) {
  rig = SkeletonRig{};
  std::vector<Tube> tubes;
  std::array<int, 2> tubes_per_hand{0, 0};

  const int jph = static_cast<int>(spec.hands[kLeft].joints.size());
  require(static_cast<int>(spec.hands[kRight].joints.size()) == jph,
          "rig: hands must have the same joint count");
  rig.joints_per_hand = jph;

  for (int side : {kLeft, kRight}) {
    const auto& hand = spec.hands[side];
    const std::vector<int> order = order_hand_joints(hand);
    std::map<std::string, int> global_index;  // name -> index into rig.joints
    // Local topological order must match across hands so theta aligns.
    for (int k = 0; k < jph; ++k) {
      const auto& jd = hand.joints[order[k]];
      SkeletonRig::Joint j;
      j.name = jd.name;
      j.side = side;
      j.finger = jd.finger;
      if (jd.parent.empty()) {
        j.parent = -1;
        j.rest_offset = hand.center + jd.offset;
        j.rest_pos = j.rest_offset;
      } else {
        j.parent = global_index.at(jd.parent);
        j.rest_offset = jd.offset;
        j.rest_pos = rig.joints[j.parent].rest_pos + jd.offset;
      }
      require(j.rest_pos.allFinite(), "rig: joint " + jd.name + " has non-finite rest position");
      global_index[jd.name] = static_cast<int>(rig.joints.size());
      rig.joints.push_back(std::move(j));
    }
    // Tubes: one per bone (owned by the parent joint) and one per fingertip.
    for (int k = 0; k < jph; ++k) {
      const auto& jd = hand.joints[order[k]];
      if (jd.parent.empty()) continue;
      const int child = global_index.at(jd.name);
      const int parent = rig.joints[child].parent;
      tubes.push_back({rig.joints[parent].rest_pos, rig.joints[child].rest_pos, jd.radius,
                       parent, side});
      ++tubes_per_hand[side];
    }
    for (const auto& tip : hand.tips) {
      auto it = global_index.find(tip.parent);
      require(it != global_index.end(), "rig: fingertip has unknown parent " + tip.parent);
      const Vec3 a = rig.joints[it->second].rest_pos;
      tubes.push_back({a, a + tip.offset, tip.radius, it->second, side});
      ++tubes_per_hand[side];
    }
  }

  // Owned-bone axis per joint, used for radial shape scaling.
  for (const auto& t : tubes) {
    auto& j = rig.joints[t.owner];
    if (j.scale_axis == Vec3::UnitZ() && (t.b - t.a).norm() > 0)
      j.scale_axis = (t.b - t.a).normalized();
  }

  require(spec.uv_cols * spec.uv_rows >= std::max(tubes_per_hand[0], tubes_per_hand[1]),
          "rig: uv_grid too small for the tube count");

  // Tube-and-cap mesh; the angular seam duplicates one ring vertex so UV
  // interpolation never wraps.
  const int nseg = spec.rings;
  std::vector<Vec3> verts;
  std::vector<Vec2> uvs;
  std::vector<int> vside;
  std::vector<std::array<int, 3>> faces;
  std::vector<int> tube_of_vertex;

  std::array<int, 2> tube_counter{0, 0};
  const double pad = 0.06;
  for (size_t ti = 0; ti < tubes.size(); ++ti) {
    const Tube& t = tubes[ti];
    const int slot = tube_counter[t.side]++;
    const int col = slot % spec.uv_cols;
    const int row = slot / spec.uv_cols;
    auto uv_of = [&](double ul, double vl) {
      const double uu = (col + pad + ul * (1.0 - 2.0 * pad)) / spec.uv_cols;
      const double vv = (row + pad + vl * (1.0 - 2.0 * pad)) / spec.uv_rows;
      return Vec2(t.side == kLeft ? 0.5 * uu : 0.5 + 0.5 * uu, vv);
    };
    const Vec3 axis = (t.b - t.a).normalized();
    Vec3 u, v;
    orthonormal_frame(axis, u, v);
    const int base = static_cast<int>(verts.size());
    // Two rings of nseg+1 vertices (seam duplicated), then two cap poles.
    for (int ring = 0; ring < 2; ++ring) {
      const Vec3 center = ring == 0 ? t.a : t.b;
      const double vl = ring == 0 ? 0.18 : 0.82;
      for (int k = 0; k <= nseg; ++k) {
        const double phi = 2.0 * M_PI * (k % nseg) / nseg;
        verts.push_back(center + t.radius * (std::cos(phi) * u + std::sin(phi) * v));
        uvs.push_back(uv_of(static_cast<double>(k) / nseg, vl));
        vside.push_back(t.side);
        tube_of_vertex.push_back(static_cast<int>(ti));
      }
    }
    const int pole_a = static_cast<int>(verts.size());
    verts.push_back(t.a - t.radius * axis);
    uvs.push_back(uv_of(0.5, 0.0));
    vside.push_back(t.side);
    tube_of_vertex.push_back(static_cast<int>(ti));
    const int pole_b = static_cast<int>(verts.size());
    verts.push_back(t.b + t.radius * axis);
    uvs.push_back(uv_of(0.5, 1.0));
    vside.push_back(t.side);
    tube_of_vertex.push_back(static_cast<int>(ti));

    const int ra = base, rb = base + nseg + 1;
    for (int k = 0; k < nseg; ++k) {
      faces.push_back({ra + k, rb + k, rb + k + 1});
      faces.push_back({ra + k, rb + k + 1, ra + k + 1});
      faces.push_back({pole_a, ra + k + 1, ra + k});
      faces.push_back({pole_b, rb + k, rb + k + 1});
    }
  }

  mesh = HandMesh{};
  const Index nv = static_cast<Index>(verts.size());
  mesh.vertices.resize(nv, 3);
  mesh.uv.resize(nv, 2);
  mesh.side.resize(nv);
  mesh.label_parent.resize(nv);
  for (Index i = 0; i < nv; ++i) {
    mesh.vertices.row(i) = verts[i].transpose().array();
    mesh.uv.row(i) = uvs[i].transpose().array();
    mesh.side[i] = vside[i];
    mesh.label_parent[i] = static_cast<int>(i);
  }
  mesh.faces = std::move(faces);

  // Skinning weights: Gaussian falloff of distance to same-hand bone
  // segments, pooled per owning joint and normalized.
  mesh.weights = Array::Zero(nv, rig.joint_count());
  for (Index i = 0; i < nv; ++i) {
    const Vec3 p = mesh.vertices.row(i).matrix().transpose();
    for (const Tube& t : tubes) {
      if (t.side != mesh.side[i]) continue;
      const double d = point_segment_distance(p, t.a, t.b);
      const double sigma = std::max(0.010, 1.2 * t.radius);
      mesh.weights(i, t.owner) += std::exp(-(d * d) / (sigma * sigma));
    }
    const double sum = mesh.weights.row(i).sum();
    require(sum > 0.0, "rig: vertex with no bone influence");
    mesh.weights.row(i) /= sum;
  }
}

HandMesh pose_mesh(const HandMesh& mesh, const SkeletonRig& rig, const PoseParams& pose) {
  require(mesh.weights.cols() == rig.joint_count(),
          "pose_mesh: weight columns do not match rig joints");
  require(mesh.weights.rows() == mesh.vertex_count(), "pose_mesh: weight rows != vertices");
  const std::vector<Mat4> G = skinning_transforms(rig, pose);
  HandMesh out = mesh;
  out.vertices.setZero();
  for (int j = 0; j < rig.joint_count(); ++j) {
    const Mat3 R = G[j].topLeftCorner<3, 3>();
    const Vec3 t = G[j].topRightCorner<3, 1>();
    ArrayX3 moved = (mesh.vertices.matrix() * R.transpose()).array();
    moved.rowwise() += t.transpose().array();
    out.vertices += moved.colwise() * mesh.weights.col(j);
  }
  return out;
}

HandMesh upsample_mesh(const HandMesh& mesh, int levels) {
  require(levels >= 0, "upsample_mesh: levels must be >= 0");
  HandMesh cur = mesh;
  for (int lv = 0; lv < levels; ++lv) {
    const Index nv = cur.vertex_count();
    std::unordered_map<uint64_t, int> edge_mid;
    edge_mid.reserve(cur.faces.size() * 2);
    std::vector<Vec3> new_pos;
    std::vector<Vec2> new_uv;
    std::vector<Eigen::RowVectorXd> new_w;
    std::vector<int> new_side, new_parent;

    auto midpoint = [&](int a, int b) -> int {
      const uint64_t key = (static_cast<uint64_t>(std::min(a, b)) << 32) |
                           static_cast<uint32_t>(std::max(a, b));
      auto it = edge_mid.find(key);
      if (it != edge_mid.end()) return it->second;
      const int id = static_cast<int>(nv + new_pos.size());
      new_pos.push_back(0.5 * (cur.vertices.row(a) + cur.vertices.row(b)).matrix().transpose());
      new_uv.push_back(0.5 * (cur.uv.row(a) + cur.uv.row(b)).matrix().transpose());
      Eigen::RowVectorXd w = 0.5 * (cur.weights.row(a) + cur.weights.row(b)).matrix();
      const double s = w.sum();
      if (s > 0) w /= s;
      new_w.push_back(w);
      require(cur.side[a] == cur.side[b], "upsample_mesh: edge crosses hands");
      new_side.push_back(cur.side[a]);
      // Children inherit the label parent of the nearer endpoint; midpoints
      // are equidistant so ties fall to the smaller vertex index.
      const double da = (new_pos.back().transpose().array() - cur.vertices.row(a)).matrix().norm();
      const double db = (new_pos.back().transpose().array() - cur.vertices.row(b)).matrix().norm();
      int donor;
      if (da < db)
        donor = a;
      else if (db < da)
        donor = b;
      else
        donor = std::min(a, b);
      new_parent.push_back(cur.label_parent[donor]);
      edge_mid[key] = id;
      return id;
    };

    std::vector<std::array<int, 3>> new_faces;
    new_faces.reserve(cur.faces.size() * 4);
    for (const auto& f : cur.faces) {
      const int m01 = midpoint(f[0], f[1]);
      const int m12 = midpoint(f[1], f[2]);
      const int m20 = midpoint(f[2], f[0]);
      new_faces.push_back({f[0], m01, m20});
      new_faces.push_back({f[1], m12, m01});
      new_faces.push_back({f[2], m20, m12});
      new_faces.push_back({m01, m12, m20});
    }

    HandMesh next;
    const Index total = nv + static_cast<Index>(new_pos.size());
    next.vertices.resize(total, 3);
    next.uv.resize(total, 2);
    next.weights.resize(total, cur.weights.cols());
    next.side.resize(total);
    next.label_parent.resize(total);
    next.vertices.topRows(nv) = cur.vertices;
    next.uv.topRows(nv) = cur.uv;
    next.weights.topRows(nv) = cur.weights;
    std::copy(cur.side.begin(), cur.side.end(), next.side.begin());
    std::copy(cur.label_parent.begin(), cur.label_parent.end(), next.label_parent.begin());
    for (size_t k = 0; k < new_pos.size(); ++k) {
      const Index i = nv + static_cast<Index>(k);
      next.vertices.row(i) = new_pos[k].transpose().array();
      next.uv.row(i) = new_uv[k].transpose().array();
      next.weights.row(i) = new_w[k].array();
      next.side[i] = new_side[k];
      next.label_parent[i] = new_parent[k];
    }
    next.faces = std::move(new_faces);
    cur = std::move(next);
  }
  return cur;
}

void reset_label_parents(HandMesh& mesh) {
  for (Index i = 0; i < mesh.vertex_count(); ++i) mesh.label_parent[i] = static_cast<int>(i);
}

PointSet vertices_to_points(const HandMesh& mesh) {
  PointSet ps;
  ps.positions = mesh.vertices;
  ps.uv = mesh.uv;
  ps.side = mesh.side;
  ps.source_vertex.resize(mesh.vertex_count());
  for (Index i = 0; i < mesh.vertex_count(); ++i) ps.source_vertex[i] = static_cast<int>(i);
  return ps;
}

void validate_scene(const TwoHandScene& scene) {
  require(scene.canonical.vertex_count() == scene.posed.vertex_count() &&
              scene.canonical.faces == scene.posed.faces,
          "scene: canonical and posed meshes must share connectivity");
  require(min_inter_hand_distance(scene.canonical) > kInteractionRadius,
          "scene: canonical mesh hands are too close to be interaction-free");
}

double total_surface_area(const HandMesh& mesh) {
  double area = 0.0;
  for (const auto& f : mesh.faces) {
    const Vec3 a = mesh.vertices.row(f[0]).matrix().transpose();
    const Vec3 b = mesh.vertices.row(f[1]).matrix().transpose();
    const Vec3 c = mesh.vertices.row(f[2]).matrix().transpose();
    area += 0.5 * (b - a).cross(c - a).norm();
  }
  return area;
}

double min_inter_hand_distance(const HandMesh& mesh) {
  std::vector<Index> left, right;
  for (Index i = 0; i < mesh.vertex_count(); ++i)
    (mesh.side[i] == kLeft ? left : right).push_back(i);
  double best = std::numeric_limits<double>::infinity();
  for (Index i : left)
    for (Index j : right)
      best = std::min(best,
                      (mesh.vertices.row(i) - mesh.vertices.row(j)).matrix().norm());
  return best;
}

int unique_edge_count(const HandMesh& mesh) {
  std::unordered_map<uint64_t, int> seen;
  for (const auto& f : mesh.faces)
    for (int e = 0; e < 3; ++e) {
      const int a = f[e], b = f[(e + 1) % 3];
      const uint64_t key = (static_cast<uint64_t>(std::min(a, b)) << 32) |
                           static_cast<uint32_t>(std::max(a, b));
      seen[key] = 1;
    }
  return static_cast<int>(seen.size());
}

void write_obj(const std::string& path, const HandMesh& mesh,
               const std::vector<Vec3>* vertex_colors) {
  std::ofstream f(path);
  require(f.good(), "write_obj: cannot open " + path);
  f.precision(9);
  for (Index i = 0; i < mesh.vertex_count(); ++i) {
    f << "v " << mesh.vertices(i, 0) << " " << mesh.vertices(i, 1) << " " << mesh.vertices(i, 2);
    if (vertex_colors) {
      const Vec3& c = (*vertex_colors)[i];
      f << " " << c.x() << " " << c.y() << " " << c.z();
    }
    f << "\n";
  }
  for (Index i = 0; i < mesh.vertex_count(); ++i)
    f << "vt " << mesh.uv(i, 0) << " " << mesh.uv(i, 1) << "\n";
  for (const auto& face : mesh.faces)
    f << "f " << face[0] + 1 << "/" << face[0] + 1 << " " << face[1] + 1 << "/" << face[1] + 1
      << " " << face[2] + 1 << "/" << face[2] + 1 << "\n";
}

}  // namespace igs
