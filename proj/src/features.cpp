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

#include "igs/features.hpp"

namespace igs {

Array gamma_encode(const Array& x, int bands) {
  require(bands >= 1, "gamma_encode: bands must be >= 1");
  Array out(x.rows(), x.cols() * 2 * bands);
  for (Index j = 0; j < x.cols(); ++j) {
    double freq = M_PI;
    for (int l = 0; l < bands; ++l) {
      out.col(j * 2 * bands + 2 * l) = (freq * x.col(j)).sin();
      out.col(j * 2 * bands + 2 * l + 1) = (freq * x.col(j)).cos();
      freq *= 2.0;
    }
  }
  return out;
}

void init_feature_weights(ParamStore& store, const FeatureConfig& cfg, int theta_dim,
                          uint64_t seed) {
  DetRng rng(seed);
  const int c = cfg.channels;
  const int pose_in = theta_dim + 25 + 2;
  init_mlp3(store, "pose_enc", pose_in, cfg.hidden, cfg.pose_dim, rng);
  // Geometry: point MLP over gamma(xyz), then fusion of [h | pooled | pose].
  const int gdim = 3 * 2 * cfg.gamma_bands;
  init_mlp3(store, "point_enc", gdim, cfg.hidden, c, rng);
  init_mlp3(store, "fuse_enc", 2 * c + cfg.pose_dim, cfg.hidden, c, rng);
  // Texture decoder: per-texel MLP over the scattered condition map.
  const int cond = 2 * c + 2 * 2 * cfg.gamma_bands + cfg.pose_dim;
  init_mlp3(store, "tex_dec", cond, cfg.tex_hidden, 2 * c, rng);
  // Attention projections (no biases).
  DetRng arng = rng.fork(7);
  auto proj = [&](const char* name) {
    Array w(c, c);
    for (Index i = 0; i < c; ++i)
      for (Index j = 0; j < c; ++j) w(i, j) = arng.normal() / std::sqrt(static_cast<double>(c));
    store.add(name, std::move(w));
  };
  proj("attn/Wq");
  proj("attn/Wk");
  proj("attn/Wv");
  // Attribute heads: shared hidden layer, one linear head per attribute group.
  DetRng hrng = rng.fork(11);
  init_linear(store, "heads/shared", c, cfg.head_hidden, hrng);
  init_linear(store, "heads/offset", cfg.head_hidden, 3, hrng);
  init_linear(store, "heads/scale", cfg.head_hidden, 3, hrng);
  init_linear(store, "heads/quat", cfg.head_hidden, 4, hrng);
  init_linear(store, "heads/opacity", cfg.head_hidden, 1, hrng);
  init_linear(store, "heads/color", cfg.head_hidden, 3, hrng);
  init_linear(store, "heads/validity", cfg.head_hidden, 1, hrng);
}

Array zero_identity_map(const FeatureConfig& cfg) {
  return Array::Zero(cfg.map_texels(), cfg.identity_channels());
}

int encode_pose(Graph& g, ParamLeaves& leaves, const FeatureConfig& cfg,
                const Eigen::VectorXd& theta_flat, const Eigen::VectorXd& camera25,
                const Vec2& interaction_summary) {
  require(camera25.size() == 25, "encode_pose: camera vector must have 25 entries");
  Array in(1, theta_flat.size() + 27);
  in.row(0).segment(0, theta_flat.size()) = theta_flat.array();
  in.row(0).segment(theta_flat.size(), 25) = camera25.array();
  in(0, theta_flat.size() + 25) = interaction_summary(0);
  in(0, theta_flat.size() + 26) = interaction_summary(1);
  const int x = g.constant(std::move(in));
  const int out = mlp3_forward(g, leaves, "pose_enc", x);
  require(g.cols(out) == cfg.pose_dim, "encode_pose: unexpected output width");
  return out;
}

int encode_geometry(Graph& g, ParamLeaves& leaves, const FeatureConfig& cfg, int positions_node,
                    const std::vector<std::vector<int>>& neighborhoods, int pose_emb) {
  require(g.cols(positions_node) == 3, "encode_geometry: positions must be |P| x 3");
  require(static_cast<Index>(neighborhoods.size()) == g.rows(positions_node),
          "encode_geometry: one neighborhood per point required");
  const int enc = gamma_encode_op(g, positions_node, cfg.gamma_bands);
  const int h = mlp3_forward(g, leaves, "point_enc", enc);
  const int pooled = mean_rows_groups(g, h, neighborhoods);
  const int pose_b = broadcast_row(g, pose_emb, g.rows(h));
  const int cat = concat_cols(g, concat_cols(g, h, pooled), pose_b);
  return mlp3_forward(g, leaves, "fuse_enc", cat);
}

int decode_texture(Graph& g, ParamLeaves& leaves, const FeatureConfig& cfg, int identity_node,
                   const ArrayX2& vertex_uv, int pose_emb) {
  require(g.rows(identity_node) == cfg.map_texels() &&
              g.cols(identity_node) == cfg.identity_channels(),
          "decode_texture: identity map shape mismatch");
  const int sampled = bilinear_sample(g, identity_node, vertex_uv, cfg.map_h, cfg.map_w);
  const int uv_enc = g.constant(gamma_encode(vertex_uv, cfg.gamma_bands));
  const int pose_b = broadcast_row(g, pose_emb, vertex_uv.rows());
  const int embed = concat_cols(g, concat_cols(g, sampled, uv_enc), pose_b);
  const int cond = scatter_to_texels(g, embed, vertex_uv, cfg.map_h, cfg.map_w);
  return mlp3_forward(g, leaves, "tex_dec", cond);
}

int sample_texture_features(Graph& g, const FeatureConfig& cfg, int texture_node,
                            const ArrayX2& point_uv, const std::vector<int>& point_side) {
  const int per_point = bilinear_sample(g, texture_node, point_uv, cfg.map_h, cfg.map_w);
  return select_side_cols(g, per_point, point_side, cfg.channels);
}

int fuse_features(Graph& g, int geometric, int textural) { return add(g, geometric, textural); }

int interaction_attention(Graph& g, ParamLeaves& leaves, const FeatureConfig& cfg, int features,
                          const InteractionLabels& labels) {
  require(labels.count() == g.rows(features), "attention: labels misaligned with features");
  std::vector<Index> flagged;
  for (Index i = 0; i < g.rows(features); ++i)
    if (labels.flags[i]) flagged.push_back(i);
  if (flagged.empty()) return features;

  const int f = gather_rows(g, features, flagged);
  const int q = matmul(g, f, leaves.id("attn/Wq"));
  const int k = matmul(g, f, leaves.id("attn/Wk"));
  const int v = matmul(g, f, leaves.id("attn/Wv"));
  const int scores = scale(g, matmul(g, q, transpose(g, k)),
                           1.0 / std::sqrt(static_cast<double>(cfg.channels)));
  const int attn = matmul(g, softmax_rows(g, scores), v);
  const int updated = add(g, attn, f);  // residual
  return scatter_rows(g, features, flagged, updated);
}

}  // namespace igs
