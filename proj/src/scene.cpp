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

#include "igs/scene.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace igs {

namespace {

void write_vector(std::ostream& os, const char* key, const Eigen::VectorXd& v) {
  os << key;
  for (Index i = 0; i < v.size(); ++i) os << " " << v(i);
  os << "\n";
}

Eigen::VectorXd read_vector(std::istringstream& ss, const std::string& key) {
  std::vector<double> vals;
  double x;
  while (ss >> x) vals.push_back(x);
  require(!vals.empty(), "scene: empty vector for " + key);
  Eigen::VectorXd v(static_cast<Index>(vals.size()));
  for (size_t i = 0; i < vals.size(); ++i) v(static_cast<Index>(i)) = vals[i];
  return v;
}

void write_pose_block(std::ostream& os, const PoseParams& pose) {
  write_vector(os, "theta_left", pose.theta[kLeft]);
  write_vector(os, "theta_right", pose.theta[kRight]);
  write_vector(os, "beta_left", pose.beta[kLeft]);
  write_vector(os, "beta_right", pose.beta[kRight]);
  Eigen::VectorXd root(6);
  root << pose.root_rot[kLeft], pose.root_trans[kLeft];
  write_vector(os, "root_left", root);
  root << pose.root_rot[kRight], pose.root_trans[kRight];
  write_vector(os, "root_right", root);
}

// One key-value line of a pose block; returns false for unrelated keys.
bool apply_pose_line(PoseParams& pose, const std::string& key, std::istringstream& ss) {
  auto root_of = [&](int side) {
    const Eigen::VectorXd v = read_vector(ss, key);
    require(v.size() == 6, "scene: root transform needs 6 values");
    pose.root_rot[side] = v.head<3>();
    pose.root_trans[side] = v.tail<3>();
  };
  if (key == "theta_left") pose.theta[kLeft] = read_vector(ss, key);
  else if (key == "theta_right") pose.theta[kRight] = read_vector(ss, key);
  else if (key == "beta_left") pose.beta[kLeft] = read_vector(ss, key);
  else if (key == "beta_right") pose.beta[kRight] = read_vector(ss, key);
  else if (key == "root_left") root_of(kLeft);
  else if (key == "root_right") root_of(kRight);
  else return false;
  return true;
}

void check_pose_complete(const PoseParams& pose, const std::string& ctx) {
  for (int s : {kLeft, kRight}) {
    require(pose.theta[s].size() > 0 && pose.theta[s].size() % 3 == 0,
            ctx + ": theta missing or not a multiple of 3");
    require(pose.beta[s].size() == 10, ctx + ": beta must have 10 entries");
  }
}

}  // namespace

void write_pose(const std::string& path, const PoseParams& pose) {
  std::ofstream f(path);
  require(f.good(), "pose: cannot open " + path);
  f.precision(17);
  f << "pose_version 1\n";
  write_pose_block(f, pose);
}

PoseParams read_pose(const std::string& path) {
  std::ifstream f(path);
  require(f.good(), "pose: cannot open " + path);
  PoseParams pose;
  pose.beta[kLeft] = Eigen::VectorXd::Zero(10);
  pose.beta[kRight] = Eigen::VectorXd::Zero(10);
  pose.root_rot = {Vec3::Zero(), Vec3::Zero()};
  pose.root_trans = {Vec3::Zero(), Vec3::Zero()};
  std::string line;
  bool version_ok = false;
  while (std::getline(f, line)) {
    std::istringstream ss(line);
    std::string key;
    if (!(ss >> key)) continue;
    if (key == "pose_version") {
      int v;
      ss >> v;
      require(v == 1, "pose: unknown pose_version");
      version_ok = true;
    } else {
      require(apply_pose_line(pose, key, ss), "pose: unknown key '" + key + "'");
    }
  }
  require(version_ok, "pose: missing pose_version in " + path);
  check_pose_complete(pose, "pose file " + path);
  return pose;
}

void write_scene(const std::string& path, const SceneFile& scene) {
  std::ofstream f(path);
  require(f.good(), "scene: cannot open " + path);
  f.precision(17);
  f << "scene_version 1\n";
  f << "rig " << scene.rig_path << "\n";
  f << "subject " << scene.subject << "\n";
  f << "frame_count " << scene.frames.size() << "\n";
  for (size_t i = 0; i < scene.frames.size(); ++i) {
    const SceneFrame& fr = scene.frames[i];
    f << "frame " << i << "\n";
    f << "interacting " << (fr.interacting ? 1 : 0) << "\n";
    if (!fr.image_path.empty()) f << "image " << fr.image_path << "\n";
    if (!fr.mask_path.empty()) f << "mask " << fr.mask_path << "\n";
    f << "intrinsics";
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) f << " " << fr.cam.intrinsics(r, c);
    f << "\nextrinsics";
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) f << " " << fr.cam.extrinsics(r, c);
    f << "\n";
    write_pose_block(f, fr.pose);
    f << "end_frame\n";
  }
}

SceneFile read_scene(const std::string& path) {
  std::ifstream f(path);
  require(f.good(), "scene: cannot open " + path);
  const std::filesystem::path dir = std::filesystem::path(path).parent_path();
  auto resolve = [&](const std::string& rel) {
    if (rel.empty() || rel.front() == '/') return rel;
    return (dir / rel).string();
  };

  SceneFile scene;
  int declared_frames = -1;
  bool version_ok = false;
  SceneFrame cur;
  bool in_frame = false;
  std::string line;
  while (std::getline(f, line)) {
    std::istringstream ss(line);
    std::string key;
    if (!(ss >> key)) continue;
    if (key == "scene_version") {
      int v;
      ss >> v;
      require(v == 1, "scene: unknown scene_version in " + path);
      version_ok = true;
    } else if (key == "rig") {
      std::string p;
      ss >> p;
      scene.rig_path = resolve(p);
    } else if (key == "subject") {
      ss >> scene.subject;
    } else if (key == "frame_count") {
      ss >> declared_frames;
    } else if (key == "frame") {
      require(!in_frame, "scene: nested frame block in " + path);
      in_frame = true;
      cur = SceneFrame{};
      cur.pose.beta[kLeft] = Eigen::VectorXd::Zero(10);
      cur.pose.beta[kRight] = Eigen::VectorXd::Zero(10);
      cur.pose.root_rot = {Vec3::Zero(), Vec3::Zero()};
      cur.pose.root_trans = {Vec3::Zero(), Vec3::Zero()};
    } else if (key == "end_frame") {
      require(in_frame, "scene: end_frame outside a frame block");
      check_pose_complete(cur.pose, "scene frame");
      cur.cam.validate();
      scene.frames.push_back(cur);
      in_frame = false;
    } else if (key == "interacting") {
      int v;
      ss >> v;
      cur.interacting = v != 0;
    } else if (key == "image") {
      std::string p;
      ss >> p;
      cur.image_path = resolve(p);
    } else if (key == "mask") {
      std::string p;
      ss >> p;
      cur.mask_path = resolve(p);
    } else if (key == "intrinsics") {
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) ss >> cur.cam.intrinsics(r, c);
    } else if (key == "extrinsics") {
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) ss >> cur.cam.extrinsics(r, c);
    } else {
      require(in_frame && apply_pose_line(cur.pose, key, ss),
              "scene: unknown key '" + key + "' in " + path);
    }
  }
  require(version_ok, "scene: missing scene_version in " + path);
  require(!in_frame, "scene: unterminated frame block in " + path);
  require(declared_frames < 0 ||
              declared_frames == static_cast<int>(scene.frames.size()),
          "scene: frame_count does not match the frames present");
  return scene;
}

}  // namespace igs
