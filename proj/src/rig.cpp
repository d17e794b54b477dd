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

#include "igs/rig.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace igs {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> toks;
  std::string t;
  while (ss >> t) toks.push_back(t);
  return toks;
}

double to_num(const std::string& s, const std::string& ctx) {
  try {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    require(pos == s.size(), "rig spec: bad number in " + ctx);
    return v;
  } catch (const std::invalid_argument&) {
    fail("rig spec: bad number '" + s + "' in " + ctx);
  }
}

}  // namespace

RigSpec parse_rig_spec(const std::string& text) {
  RigSpec spec;
  spec.hands[kLeft].side = kLeft;
  spec.hands[kRight].side = kRight;
  std::array<bool, 2> seen{false, false};
  int current = -1;
  bool version_seen = false;

  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    auto toks = tokenize(line);
    if (toks.empty()) continue;
    const std::string& key = toks[0];
    if (key == "rig_version") {
      require(toks.size() == 2, "rig spec: rig_version needs one value");
      spec.version = static_cast<int>(to_num(toks[1], "rig_version"));
      require(spec.version == 1, "rig spec: unknown rig_version " + toks[1]);
      version_seen = true;
    } else if (key == "rings") {
      spec.rings = static_cast<int>(to_num(toks.at(1), "rings"));
      require(spec.rings >= 3, "rig spec: rings must be >= 3");
    } else if (key == "uv_grid") {
      require(toks.size() == 3, "rig spec: uv_grid needs cols rows");
      spec.uv_cols = static_cast<int>(to_num(toks[1], "uv_grid"));
      spec.uv_rows = static_cast<int>(to_num(toks[2], "uv_grid"));
      require(spec.uv_cols >= 1 && spec.uv_rows >= 1, "rig spec: uv_grid must be positive");
    } else if (key == "hand") {
      require(toks.size() == 2 && (toks[1] == "left" || toks[1] == "right"),
              "rig spec: hand must be left or right");
      current = (toks[1] == "left") ? kLeft : kRight;
      seen[current] = true;
    } else if (key == "center") {
      require(current >= 0, "rig spec: center outside a hand block");
      require(toks.size() == 4, "rig spec: center needs 3 values");
      spec.hands[current].center =
          Vec3(to_num(toks[1], "center"), to_num(toks[2], "center"), to_num(toks[3], "center"));
    } else if (key == "joint") {
      require(current >= 0, "rig spec: joint outside a hand block");
      // joint NAME parent P finger F offset X Y Z radius R
      require(toks.size() == 12 && toks[2] == "parent" && toks[4] == "finger" &&
                  toks[6] == "offset" && toks[10] == "radius",
              "rig spec: malformed joint line");
      RigSpec::JointDesc j;
      j.name = toks[1];
      j.parent = (toks[3] == "-") ? std::string() : toks[3];
      j.finger = static_cast<int>(to_num(toks[5], "joint " + j.name));
      j.offset = Vec3(to_num(toks[7], "joint " + j.name), to_num(toks[8], "joint " + j.name),
                      to_num(toks[9], "joint " + j.name));
      j.radius = to_num(toks[11], "joint " + j.name);
      require(j.radius > 0.0, "rig spec: joint " + j.name + " has nonpositive radius");
      spec.hands[current].joints.push_back(std::move(j));
    } else if (key == "fingertip") {
      require(current >= 0, "rig spec: fingertip outside a hand block");
      require(toks.size() == 9 && toks[1] == "parent" && toks[3] == "offset" && toks[7] == "radius",
              "rig spec: malformed fingertip line");
      RigSpec::TipDesc t;
      t.parent = toks[2];
      t.offset = Vec3(to_num(toks[4], "fingertip"), to_num(toks[5], "fingertip"),
                      to_num(toks[6], "fingertip"));
      t.radius = to_num(toks[8], "fingertip");
      require(t.radius > 0.0, "rig spec: fingertip of " + t.parent + " has nonpositive radius");
      require(t.offset.norm() > 0.0, "rig spec: fingertip of " + t.parent + " has zero length");
      spec.hands[current].tips.push_back(std::move(t));
    } else {
      fail("rig spec: unknown key '" + key + "'");
    }
  }
  require(version_seen, "rig spec: missing rig_version");
  require(seen[kLeft] && seen[kRight], "rig spec: both hands must be described");
  for (const auto& hd : spec.hands)
    require(!hd.joints.empty(), "rig spec: a hand has no joints");
  return spec;
}

RigSpec load_rig_spec(const std::string& path) {
  std::ifstream f(path);
  require(f.good(), "rig spec: cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_rig_spec(ss.str());
}

namespace {

struct FingerProto {
  const char* name;
  int finger;
  Vec3 dir;          // unit-ish direction in the right-hand frame
  double mcp_dist;   // wrist -> mcp
  double seg1, seg2, tip_len;
  double r_palm, r1, r2, r_tip;
};

std::string hand_block(int side) {
  // Right-hand layout: fingers point +z, spread in x, thumb at +x.
  // The left hand mirrors x.
  const FingerProto fingers[5] = {
      {"thumb", 0, Vec3(0.80, 0.0, 0.60), 0.052, 0.033, 0.028, 0.024, 0.011, 0.010, 0.009, 0.008},
      {"index", 1, Vec3(0.25, 0.0, 0.97), 0.088, 0.036, 0.026, 0.022, 0.011, 0.009, 0.008, 0.007},
      {"middle", 2, Vec3(0.00, 0.0, 1.00), 0.090, 0.040, 0.028, 0.023, 0.011, 0.009, 0.008, 0.007},
      {"ring", 3, Vec3(-0.24, 0.0, 0.97), 0.086, 0.036, 0.026, 0.022, 0.011, 0.009, 0.008, 0.007},
      {"pinky", 4, Vec3(-0.45, 0.0, 0.89), 0.078, 0.028, 0.021, 0.018, 0.010, 0.008, 0.007, 0.006},
  };
  const double mirror = (side == kLeft) ? -1.0 : 1.0;
  const double cx = (side == kLeft) ? -0.15 : 0.15;
  std::ostringstream os;
  os << "hand " << (side == kLeft ? "left" : "right") << "\n";
  os << "center " << cx << " 0 0\n";
  os << "joint wrist parent - finger -1 offset 0 0 0 radius 0.012\n";
  for (const auto& f : fingers) {
    const Vec3 d = Vec3(mirror * f.dir.x(), f.dir.y(), f.dir.z()).normalized();
    const Vec3 mcp = d * f.mcp_dist;
    const Vec3 s1 = d * f.seg1;
    const Vec3 s2 = d * f.seg2;
    const Vec3 tp = d * f.tip_len;
    os << "joint " << f.name << "_mcp parent wrist finger " << f.finger << " offset " << mcp.x()
       << " " << mcp.y() << " " << mcp.z() << " radius " << f.r_palm << "\n";
    os << "joint " << f.name << "_pip parent " << f.name << "_mcp finger " << f.finger
       << " offset " << s1.x() << " " << s1.y() << " " << s1.z() << " radius " << f.r1 << "\n";
    os << "joint " << f.name << "_dip parent " << f.name << "_pip finger " << f.finger
       << " offset " << s2.x() << " " << s2.y() << " " << s2.z() << " radius " << f.r2 << "\n";
    os << "fingertip parent " << f.name << "_dip offset " << tp.x() << " " << tp.y() << " "
       << tp.z() << " radius " << f.r_tip << "\n";
  }
  return os.str();
}

}  // namespace

std::string default_rig_spec_text() {
  std::ostringstream os;
  os << "rig_version 1\n"
     << "rings 8\n"
     << "uv_grid 4 5\n"
     << hand_block(kLeft) << hand_block(kRight);
  return os.str();
}

std::string tiny_rig_spec_text() {
  std::ostringstream os;
  os << "rig_version 1\nrings 4\nuv_grid 1 1\n";
  for (int side : {kLeft, kRight}) {
    const double cx = (side == kLeft) ? -0.15 : 0.15;
    os << "hand " << (side == kLeft ? "left" : "right") << "\n"
       << "center " << cx << " 0 0\n"
       << "joint wrist parent - finger -1 offset 0 0 0 radius 0.012\n"
       << "joint stub parent wrist finger 0 offset 0 0 0.08 radius 0.012\n";
  }
  return os.str();
}

PoseParams PoseParams::rest(const SkeletonRig& rig) {
  PoseParams p;
  for (int s : {kLeft, kRight}) {
    p.theta[s] = Eigen::VectorXd::Zero(3 * rig.joints_per_hand);
    p.beta[s] = Eigen::VectorXd::Zero(10);
    p.root_rot[s] = Vec3::Zero();
    p.root_trans[s] = Vec3::Zero();
  }
  return p;
}

Eigen::VectorXd PoseParams::theta_flat() const {
  Eigen::VectorXd out(theta[kLeft].size() + theta[kRight].size());
  out << theta[kLeft], theta[kRight];
  return out;
}

namespace {

Mat4 make_transform(const Mat3& rot, const Vec3& t) {
  Mat4 m = Mat4::Identity();
  m.topLeftCorner<3, 3>() = rot;
  m.topRightCorner<3, 1>() = t;
  return m;
}

Mat3 axis_angle_rotation(const Vec3& aa) {
  const double angle = aa.norm();
  if (angle < 1e-14) return Mat3::Identity();
  return Eigen::AngleAxisd(angle, aa / angle).toRotationMatrix();
}

double shape_multiplier(double coeff) { return 1.0 + 0.05 * coeff; }

void check_beta(const PoseParams& pose) {
  for (int s : {kLeft, kRight}) {
    require(pose.beta[s].size() == 10, "pose: beta must have 10 entries per hand");
    require((pose.beta[s].array().abs() <= 3.0 + 1e-12).all(),
            "pose: beta outside [-3, 3]");
    require(pose.beta[s].allFinite() && pose.theta[s].allFinite(), "pose: non-finite params");
  }
}

}  // namespace

std::vector<Mat4> joint_world_transforms(const SkeletonRig& rig, const PoseParams& pose) {
  check_beta(pose);
  std::vector<Mat4> world(rig.joints.size());
  for (size_t j = 0; j < rig.joints.size(); ++j) {
    const auto& joint = rig.joints[j];
    require(pose.theta[joint.side].size() >= 3 * rig.joints_per_hand,
            "pose: theta dimension mismatch with rig");
    const int local = static_cast<int>(j) % rig.joints_per_hand;
    const Vec3 aa = pose.theta[joint.side].segment<3>(3 * local);
    const double lenmul =
        joint.finger >= 0 ? shape_multiplier(pose.beta[joint.side](joint.finger)) : 1.0;
    const Mat4 local_tf = make_transform(axis_angle_rotation(aa), joint.rest_offset * lenmul);
    if (joint.parent < 0) {
      const Mat4 root =
          make_transform(axis_angle_rotation(pose.root_rot[joint.side]), pose.root_trans[joint.side]);
      world[j] = root * local_tf;
    } else {
      world[j] = world[joint.parent] * local_tf;
    }
  }
  return world;
}

std::vector<Mat4> skinning_transforms(const SkeletonRig& rig, const PoseParams& pose) {
  const std::vector<Mat4> world = joint_world_transforms(rig, pose);
  std::vector<Mat4> out(world.size());
  for (size_t j = 0; j < world.size(); ++j) {
    const auto& joint = rig.joints[j];
    // Bind inverse: the rest chain (theta = 0, beta = 0, identity root) is a
    // pure translation to the joint's rest position.
    const Mat4 bind_inv = make_transform(Mat3::Identity(), -joint.rest_pos);
    Mat4 radial = Mat4::Identity();
    if (joint.finger >= 0) {
      const double m = shape_multiplier(pose.beta[joint.side](5 + joint.finger));
      if (std::abs(m - 1.0) > 0.0) {
        // Scale perpendicular to the owned bone axis, about the joint's rest
        // position; points on the bone line are unaffected.
        const Vec3 a = joint.scale_axis;
        Mat3 s = m * Mat3::Identity() + (1.0 - m) * (a * a.transpose());
        radial = make_transform(Mat3::Identity(), joint.rest_pos) *
                 make_transform(s, Vec3::Zero()) *
                 make_transform(Mat3::Identity(), -joint.rest_pos);
      }
    }
    out[j] = world[j] * radial * bind_inv;
  }
  return out;
}

}  // namespace igs
