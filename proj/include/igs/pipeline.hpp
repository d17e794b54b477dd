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

#include "igs/config.hpp"
#include "igs/mesh.hpp"
#include "igs/render_op.hpp"
#include "igs/scene.hpp"

namespace igs {

/// Persistent point-cloud topology of one subject: where each Gaussian sits
/// in canonical space and which render-mesh vertex it descends from.
/// Refinement rewrites this; the per-frame offsets stay network-predicted.
struct CloudLayout {
  std::vector<int> source_vertex;  // into the render-level mesh
  ArrayX3 canonical_pos;

  Index count() const { return canonical_pos.rows(); }
};

/// Shared immutable context: rig, canonical meshes per level, vertex rings.
class AvatarModel {
 public:
  AvatarModel(ExperimentConfig cfg, const RigSpec& spec);

  const ExperimentConfig& config() const { return cfg_; }
  const SkeletonRig& rig() const { return rig_; }
  /// Detection-level canonical mesh (labels index its vertices).
  const HandMesh& detect_mesh() const { return detect_; }
  const HandMesh& render_mesh(int level) const;
  int theta_dim() const { return 6 * rig_.joints_per_hand; }

  CloudLayout base_layout(int level) const;

  /// Interaction labels for a pose, on the detection-level point set.
  InteractionLabels detect_labels(const PoseParams& pose) const;

  /// LBS of arbitrary canonical points that borrow their source vertex's
  /// skinning weights.
  ArrayX3 pose_layout_points(const CloudLayout& layout, int level,
                             const PoseParams& pose) const;

  struct ForwardSpec {
    PoseParams pose;
    Camera cam;
    int level = 1;
    const CloudLayout* layout = nullptr;  // null = base layout of `level`
    const InteractionLabels* labels = nullptr;  // precomputed detection labels
    bool attention = true;
    int delta_t = -1;     // optional (map_h*map_w) x C node (one-shot bias)
    int calib_log_gain = -1;  // optional 1x3 node
    int calib_bias = -1;      // optional 1x3 node
    int threads = 1;
  };

  struct ForwardOut {
    int rgb = -1;        // (h*w) x 3 node (calibrated when calib nodes given)
    int silhouette = -1; // (h*w) x 1 node
    int pose_emb = -1;
    AttributeNodes attrs;
    InteractionLabels mesh_labels;   // detection-level
    InteractionLabels cloud_labels;  // inherited per point
    ArrayX2 uv;
    std::vector<int> side;
    std::vector<int> parent_vertex;
  };

  /// Full differentiable pipeline for one frame: pose -> labels -> encoders
  /// -> texture -> fusion -> attention -> attributes -> splatting.
  ForwardOut forward(Graph& g, ParamLeaves& leaves, int identity_node,
                     const ForwardSpec& spec) const;

  GaussianCloud extract_cloud(Graph& g, const ForwardOut& out) const;

 private:
  ExperimentConfig cfg_;
  SkeletonRig rig_;
  HandMesh base_;
  HandMesh detect_;
  std::map<int, HandMesh> render_;
  std::map<int, std::vector<std::vector<int>>> rings_;  // one-ring (incl. self) per level
};

/// Fresh training weights for this model (identity maps excluded).
ParamStore init_weights(const AvatarModel& model, uint64_t seed);

struct TrainSample {
  PoseParams pose;
  Camera cam;
  Array target;  // (h*w) x 3
  int subject = 1;
  InteractionLabels labels;  // empty = detect inside the step
};

struct StepStats {
  double total = 0, l1 = 0, perceptual = 0;
  std::vector<std::string> skipped_blocks;
};

struct Stage1Options {
  int level = 1;
  double lr = 1e-4;
  bool attention = true;
  int threads = 1;
  const std::map<int, CloudLayout>* layouts = nullptr;  // per subject, optional
};

/// One optimizer step over a batch: forward/backward per sample, averaged
/// gradients, Adam update of the network weights and the touched identity
/// maps ("identity/s<N>" blocks).
StepStats stage1_step(const AvatarModel& model, const std::vector<TrainSample>& batch,
                      ParamStore& params, AdamState& state, const PerceptualBank& bank,
                      const Stage1Options& opt);

/// Canonical-pose refinement pass: predicts validity with the current
/// weights and rewrites the layout (prune/split).
CloudLayout refine_layout(const AvatarModel& model, const ParamStore& params,
                          const std::string& identity_block, const CloudLayout& layout,
                          int level, int threads = 1);

struct FitInputs {
  Array reference;  // (h*w) x 3
  Array mask;       // (h*w) x 1; size 0 means missing (silhouette fallback)
  PoseParams pose;
  Camera cam;
  int steps = 50;
  double lr = 1e-2;
  int level = 1;
  int threads = 1;
};

struct FitTraceRow {
  int step = 0;
  double l1 = 0, perceptual = 0, mask = 0, reg = 0, total = 0;
};

struct FitResult {
  Array identity;   // m*, (map_h*map_w) x 2C
  Array delta_t;    // (map_h*map_w) x C
  Vec3 gain = Vec3::Ones();
  Vec3 bias = Vec3::Zero();
  std::vector<FitTraceRow> trace;
  double final_psnr = 0.0;
  double wall_ms = 0.0;
  int steps_run = 0;
};

/// One-shot fitting: optimizes a fresh identity map, the
/// shared texture bias and the color calibration against a single reference
/// view; the network weights stay frozen (checksum-asserted).
FitResult fit_one_shot(const AvatarModel& model, const ParamStore& frozen, const FitInputs& in,
                       const PerceptualBank& bank, const LossWeights& lw);

/// Renders a frame with fixed parameters (no gradients). The FitResult
/// fields may be empty (zero-size arrays) to render the prior alone.
RenderedImage render_with(const AvatarModel& model, const ParamStore& params,
                          const Array& identity, const Array& delta_t, const Vec3& gain,
                          const Vec3& bias, const PoseParams& pose, const Camera& cam, int level,
                          bool attention, int threads);

void write_fit_trace_csv(const std::string& path, const std::vector<FitTraceRow>& trace);

}  // namespace igs
