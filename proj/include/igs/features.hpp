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

#include "igs/graph.hpp"
#include "igs/interaction.hpp"
#include "igs/nn.hpp"

namespace igs {

/// Widths of the learned pieces. C is the per-hand feature channel count;
/// identity and texture maps carry 2C channels (left and right halves).
struct FeatureConfig {
  int channels = 32;        // C
  int pose_dim = 64;        // E
  int gamma_bands = 6;      // L
  int map_h = 64, map_w = 64;
  int hidden = 64;          // encoder hidden width
  int tex_hidden = 96;      // texture decoder hidden width
  int head_hidden = 32;     // attribute head hidden width
  double offset_clamp = 0.005;       // meters
  double base_log_scale = -5.8;      // ~3 mm gaussians at zero output

  Index map_texels() const { return static_cast<Index>(map_h) * map_w; }
  Index identity_channels() const { return 2 * channels; }
};

/// Plain (non-graph) frequency encoding, column layout matching the graph op.
Array gamma_encode(const Array& x, int bands);

/// Registers every learned block for the given pose-input width.
/// theta_dim is both hands' theta length (e.g. 96 for 16 joints/hand).
void init_feature_weights(ParamStore& store, const FeatureConfig& cfg, int theta_dim,
                          uint64_t seed);

/// Fresh zero identity map block ((map_h*map_w) x 2C).
Array zero_identity_map(const FeatureConfig& cfg);

/// Pose embedding: MLP over [theta | camera 25 | per-hand flagged fractions].
/// Shape (beta) deliberately does not enter. Returns a 1 x E node.
int encode_pose(Graph& g, ParamLeaves& leaves, const FeatureConfig& cfg,
                const Eigen::VectorXd& theta_flat, const Eigen::VectorXd& camera25,
                const Vec2& interaction_summary);

/// Per-point geometric features: per-point MLP over gamma-encoded positions,
/// mean-pooled over each point's neighborhood, fused with the broadcast pose
/// embedding. positions_node is |P| x 3; result |P| x C.
int encode_geometry(Graph& g, ParamLeaves& leaves, const FeatureConfig& cfg, int positions_node,
                    const std::vector<std::vector<int>>& neighborhoods, int pose_emb);

/// Decodes the neural texture map from an identity slice:
/// sample identity at vertex uv (+gamma(uv)), concat the pose embedding,
/// scatter to nearest texel (ascending vertex id, last write wins), then a
/// per-texel MLP. Returns a (map_h*map_w) x 2C node.
int decode_texture(Graph& g, ParamLeaves& leaves, const FeatureConfig& cfg, int identity_node,
                   const ArrayX2& vertex_uv, int pose_emb);

/// Per-point textural features: bilinear-sample the texture map at each
/// point's uv and keep the hand-side channel half. Returns |P| x C.
int sample_texture_features(Graph& g, const FeatureConfig& cfg, int texture_node,
                            const ArrayX2& point_uv, const std::vector<int>& point_side);

/// Element-wise feature fusion (f = geometric + textural).
int fuse_features(Graph& g, int geometric, int textural);

/// Single-head scaled dot-product self-attention over the flagged rows only
/// (residual added); non-flagged rows pass through bitwise unchanged.
int interaction_attention(Graph& g, ParamLeaves& leaves, const FeatureConfig& cfg, int features,
                          const InteractionLabels& labels);

}  // namespace igs
