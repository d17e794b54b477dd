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

#include "igs/features.hpp"
#include "igs/gaussians.hpp"
#include "igs/losses.hpp"

namespace igs {

/// Every tunable in one place. describe() documents per-field provenance
/// (literature-given vs. chosen here); load/save use a flat key-value file.
struct ExperimentConfig {
  // feature widths
  int channels = 32;
  int pose_dim = 64;
  int gamma_bands = 6;
  int map_h = 64, map_w = 64;
  int hidden = 64;
  int tex_hidden = 96;
  int head_hidden = 32;
  double offset_clamp = 0.005;
  double base_log_scale = -5.8;

  // interaction detection
  int n_canonical = 100;
  int n_posed = 100;
  int threshold = 90;

  // refinement
  double prune_threshold = 0.1;
  double split_threshold = 0.9;
  double max_split_fraction = 0.10;

  // losses and optimization
  double w_rgb = 10.0;
  double w_perceptual = 0.1;
  double w_mask = 1.0;
  double w_reg = 0.01;
  double lr_stage1 = 1e-4;
  double lr_fit = 1e-2;
  int fit_steps = 50;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;

  // images and meshes
  int image_w = 64, image_h = 64;
  double bg_r = 0.0, bg_g = 0.0, bg_b = 0.0;
  int detect_level = 1;       // subdivision level interaction labels live on
  int coarse_level = 1;       // first part of training
  int fine_level = 2;         // after coarse_fraction of the epochs
  double coarse_fraction = 0.625;  // 5/8, mirroring the coarse-to-fine split

  // run control
  uint64_t seed = 1;
  uint64_t perceptual_seed = 101;  // fixed filter bank; independent of run seed
  int threads = 2;
  bool attention = true;

  FeatureConfig feature() const;
  DetectionConfig detection() const;
  RefinementConfig refinement() const;
  LossWeights loss_weights() const;
  AdamConfig adam() const;
  Vec3 background() const { return Vec3(bg_r, bg_g, bg_b); }

  void validate() const;
  std::string describe() const;
};

ExperimentConfig load_config(const std::string& path);
void save_config(const std::string& path, const ExperimentConfig& cfg);

/// Flat numeric view of the config (fixed field order), so checkpoints can
/// carry their configuration as an ordinary parameter block.
Array config_to_array(const ExperimentConfig& cfg);
ExperimentConfig config_from_array(const Array& values);

}  // namespace igs
