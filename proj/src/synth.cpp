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

#include "igs/synth.hpp"

#include <filesystem>
#include <fstream>

#include "igs/image_io.hpp"

namespace igs {

namespace fs = std::filesystem;

PoseParams synth_pose(const SkeletonRig& rig, DetRng& rng, bool interacting) {
  PoseParams pose = PoseParams::rest(rig);
  // Finger curls: rotate mcp/pip/dip around the local x axis. Joint layout
  // per hand is [wrist, 5x mcp, 5x pip, 5x dip] (depth order).
  for (int s : {kLeft, kRight}) {
    for (int f = 0; f < 5; ++f) {
      const double curl = 0.15 + 0.55 * rng.uniform();
      pose.theta[s](3 * (1 + f) + 0) = curl * (0.6 + 0.4 * rng.uniform());
      pose.theta[s](3 * (6 + f) + 0) = curl * (0.5 + 0.5 * rng.uniform());
      pose.theta[s](3 * (11 + f) + 0) = 0.5 * curl * rng.uniform();
    }
    for (int k = 0; k < 10; ++k) pose.beta[s](k) = 0.6 * rng.normal();
    pose.beta[s] = pose.beta[s].cwiseMax(-3.0).cwiseMin(3.0);
  }
  if (interacting) {
    // Slide the right hand onto the left, offset by a fraction of the finger
    // pitch so the fingers interleave closely.
    pose.root_trans[kRight] =
        Vec3(-0.30 + 0.008 + 0.006 * rng.uniform(), 0.006 + 0.010 * rng.uniform(),
             0.004 * rng.normal());
    pose.root_rot[kRight] = Vec3(0.05 * rng.normal(), 0.05 * rng.normal(), 0.05 * rng.normal());
  } else {
    pose.root_trans[kRight] = Vec3(0.01 * rng.normal(), 0.01 * rng.normal(), 0.01 * rng.normal());
    pose.root_rot[kRight] = Vec3(0.08 * rng.normal(), 0.08 * rng.normal(), 0.08 * rng.normal());
    pose.root_trans[kLeft] = Vec3(0.01 * rng.normal(), 0.01 * rng.normal(), 0.01 * rng.normal());
    pose.root_rot[kLeft] = Vec3(0.08 * rng.normal(), 0.08 * rng.normal(), 0.08 * rng.normal());
  }
  return pose;
}

std::vector<Camera> synth_cameras(int width, int height) {
  const Vec3 target(0.0, 0.0, 0.08);
  const double focal = 1.1 * width;
  return {
      Camera::look_at(Vec3(0.0, -0.55, 0.08), target, Vec3(0, 0, 1), focal, width, height),
      Camera::look_at(Vec3(0.30, -0.45, 0.12), target, Vec3(0, 0, 1), focal, width, height),
      Camera::look_at(Vec3(-0.30, -0.45, 0.12), target, Vec3(0, 0, 1), focal, width, height),
      Camera::look_at(Vec3(0.05, -0.48, 0.30), target, Vec3(0, 0, 1), focal, width, height),
  };
}

Array random_identity_map(const FeatureConfig& cfg, DetRng& rng, double amplitude) {
  const int coarse = 8;
  Array low(coarse * coarse, cfg.identity_channels());
  for (Index i = 0; i < low.rows(); ++i)
    for (Index j = 0; j < low.cols(); ++j) low(i, j) = amplitude * rng.normal();
  // Bilinear upsample to the full resolution.
  Array out(cfg.map_texels(), cfg.identity_channels());
  for (int y = 0; y < cfg.map_h; ++y) {
    for (int x = 0; x < cfg.map_w; ++x) {
      const double u = (x + 0.5) / cfg.map_w * coarse - 0.5;
      const double v = (y + 0.5) / cfg.map_h * coarse - 0.5;
      const int x0 = std::clamp(static_cast<int>(std::floor(u)), 0, coarse - 1);
      const int y0 = std::clamp(static_cast<int>(std::floor(v)), 0, coarse - 1);
      const int x1 = std::min(x0 + 1, coarse - 1);
      const int y1 = std::min(y0 + 1, coarse - 1);
      const double fx = std::clamp(u - x0, 0.0, 1.0);
      const double fy = std::clamp(v - y0, 0.0, 1.0);
      out.row(static_cast<Index>(y) * cfg.map_w + x) =
          (1 - fx) * (1 - fy) * low.row(y0 * coarse + x0) +
          fx * (1 - fy) * low.row(y0 * coarse + x1) +
          (1 - fx) * fy * low.row(y1 * coarse + x0) + fx * fy * low.row(y1 * coarse + x1);
    }
  }
  return out;
}

DatasetSummary gen_synthetic_dataset(const ExperimentConfig& cfg, const std::string& dir,
                                     int n_subjects, int n_poses, uint64_t seed) {
  require(n_subjects >= 1, "gen-data: need at least one subject");
  require(n_poses >= 1, "gen-data: need at least one pose");
  std::error_code ec;
  fs::create_directories(dir, ec);
  require(!ec && fs::is_directory(dir), "gen-data: cannot create directory " + dir);

  // Shared assets.
  {
    std::ofstream rf(fs::path(dir) / "rig.txt");
    require(rf.good(), "gen-data: unwritable directory " + dir);
    rf << default_rig_spec_text();
  }
  save_config((fs::path(dir) / "config.txt").string(), cfg);

  const RigSpec spec = parse_rig_spec(default_rig_spec_text());
  AvatarModel model(cfg, spec);
  DetRng rng(seed);

  // Generator network + one hidden identity map per subject.
  ParamStore gen = init_weights(model, rng.fork(1).bits());
  DetRng map_rng = rng.fork(2);
  for (int s = 1; s <= n_subjects; ++s)
    gen.add("identity/s" + std::to_string(s),
            random_identity_map(cfg.feature(), map_rng));
  gen.add("config/values", config_to_array(cfg));
  write_checkpoint((fs::path(dir) / "generator.igsn").string(), gen);

  const std::vector<Camera> cams = synth_cameras(cfg.image_w, cfg.image_h);
  DatasetSummary summary;
  summary.subjects = n_subjects;

  for (int s = 1; s <= n_subjects; ++s) {
    const fs::path sdir = fs::path(dir) / "subjects" / ("s" + std::to_string(s));
    fs::create_directories(sdir / "frames");
    fs::create_directories(sdir / "masks");
    DetRng pose_rng = rng.fork(100 + s);

    SceneFile scene;
    scene.rig_path = "../../rig.txt";
    scene.subject = s;
    int frame_id = 0;
    for (int p = 0; p < n_poses; ++p) {
      const bool interacting = (p % 2 == 1);  // alternate free and contact poses
      const PoseParams pose = synth_pose(model.rig(), pose_rng, interacting);
      const InteractionLabels labels = model.detect_labels(pose);
      for (size_t c = 0; c < cams.size(); ++c) {
        const RenderedImage img = render_with(
            model, gen, gen.at("identity/s" + std::to_string(s)), Array(), Vec3::Ones(),
            Vec3::Zero(), pose, cams[c], cfg.coarse_level, cfg.attention, cfg.threads);
        char name[32];
        std::snprintf(name, sizeof(name), "f%03d.ppm", frame_id);
        write_ppm((sdir / "frames" / name).string(), img.rgb, cfg.image_w, cfg.image_h);
        write_ppm_gray((sdir / "masks" / name).string(), img.silhouette, cfg.image_w,
                       cfg.image_h);

        SceneFrame fr;
        fr.pose = pose;
        fr.cam = cams[c];
        fr.image_path = std::string("frames/") + name;
        fr.mask_path = std::string("masks/") + name;
        fr.interacting = interacting;
        scene.frames.push_back(fr);

        ++summary.frames;
        if (interacting) {
          ++summary.interacting_frames;
          if (labels.flagged_total() > 0) ++summary.interacting_frames_with_contact;
        }
        ++frame_id;
      }
    }
    write_scene((sdir / "scene.txt").string(), scene);
  }
  return summary;
}

}  // namespace igs
