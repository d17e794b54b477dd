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

#include "igs/pipeline.hpp"

namespace igs {

/// Hand pose families used by the synthetic data generator.
PoseParams synth_pose(const SkeletonRig& rig, DetRng& rng, bool interacting);

/// Four cameras around the canonical hands.
std::vector<Camera> synth_cameras(int width, int height);

/// Smooth random identity map: a low-resolution grid bilinearly upsampled.
Array random_identity_map(const FeatureConfig& cfg, DetRng& rng, double amplitude = 4.0);

struct DatasetSummary {
  int subjects = 0;
  int frames = 0;
  int interacting_frames = 0;
  int interacting_frames_with_contact = 0;  // at least one d=1 point
};

/// Self-consistent synthetic dataset: a seeded generator network plus one
/// hidden identity map per subject renders every frame. Layout:
///   dir/rig.txt, dir/config.txt, dir/generator.igsn,
///   dir/subjects/s<N>/scene.txt, frames/f###.ppm, masks/f###.ppm
DatasetSummary gen_synthetic_dataset(const ExperimentConfig& cfg, const std::string& dir,
                                     int n_subjects, int n_poses, uint64_t seed);

}  // namespace igs
