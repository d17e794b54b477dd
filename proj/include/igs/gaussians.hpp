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
#include "igs/rasterize.hpp"

namespace igs {

struct GaussianCloud {
  ArrayX3 means;                 // meters
  ArrayX3 log_scales;
  Array quats;                   // N x 4, unit rows
  Eigen::ArrayXd opacities;      // (0,1)
  ArrayX3 colors;                // [0,1]
  Eigen::ArrayXd validity;       // [0,1]
  ArrayX2 uv;
  std::vector<int> side;
  std::vector<int> parent_vertex;  // detection-level vertex each point descends from

  Index count() const { return means.rows(); }
  SplatArrays<double> splats() const;
  void validate() const;
};

struct RefinementConfig {
  double prune_threshold = 0.1;   // T_d
  double split_threshold = 0.9;   // T_s
  double max_split_fraction = 0.10;  // per refine pass, share of the cloud
  double offset_clamp = 0.005;    // meters; mirrors FeatureConfig::offset_clamp

  void validate() const {
    require(0.0 <= prune_threshold && prune_threshold < split_threshold &&
                split_threshold <= 1.0,
            "refine: need 0 <= T_d < T_s <= 1");
  }
};

/// Graph nodes for the predicted attribute tensors of one cloud.
struct AttributeNodes {
  int means = -1;       // |P| x 3 (base + clamped offset)
  int log_scales = -1;  // |P| x 3
  int quats = -1;       // |P| x 4, normalized
  int opacities = -1;   // |P| x 1, sigmoid
  int colors = -1;      // |P| x 3, sigmoid
  int validity = -1;    // |P| x 1, sigmoid
};

/// Attribute heads over fused features. base_positions_node is a |P| x 3
/// node (usually constant); the offset head is norm-clamped before adding.
AttributeNodes predict_attributes(Graph& g, ParamLeaves& leaves, const FeatureConfig& cfg,
                                  int features, int base_positions_node);

/// Snapshot of predicted values plus the per-point static payload.
GaussianCloud extract_cloud(Graph& g, const AttributeNodes& nodes, const ArrayX2& uv,
                            const std::vector<int>& side, const std::vector<int>& parent_vertex);

/// Validity-gated prune/split. Survivors keep their original order, children
/// follow in parent order; if pruning would empty the cloud the single
/// highest-validity point survives. When `source_of` is given it receives,
/// per output point, the input index it came from.
GaussianCloud refine(const GaussianCloud& cloud, const RefinementConfig& cfg,
                     std::vector<Index>* source_of = nullptr);

/// Each point's flag copies its detection-level parent vertex's flag.
InteractionLabels inherit_labels(const GaussianCloud& cloud, const InteractionLabels& parent);

/// Cloud snapshot format: magic GCLD, u32 version, u32 count, then 19 f32
/// fields per point in declaration order.
void write_cloud(const std::string& path, const GaussianCloud& cloud);
GaussianCloud read_cloud(const std::string& path);

}  // namespace igs
