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

namespace igs {

struct LossWeights {
  double rgb = 10.0;
  double perceptual = 0.1;  // fixed-filter feature pyramid
  double mask = 1.0;
  double reg = 0.01;
};

/// Mean absolute error (subgradient 0 at exact ties).
int l1_loss_node(Graph& g, int a, int b);

/// Mean squared error.
int mse_loss_node(Graph& g, int a, int b);

/// Sum of squares (the Delta-t regularizer).
int sum_squares_node(Graph& g, int a);

/// Fixed, seeded two-level bank of 3x3 filters with 2x downsampling between
/// levels. Both images run through the same bank; the loss is the mean
/// squared distance between the feature stacks.
struct PerceptualBank {
  Array level1;  // feats x (3*9)
  Array level2;  // feats x (feats*9)
  int feats = 8;

  static PerceptualBank make(uint64_t seed, int feats = 8);
};

/// imgs are (h*w) x 3 nodes; requires h, w >= 16 and even.
int perceptual_loss_node(Graph& g, int img_a, int img_b, const PerceptualBank& bank, int h,
                         int w);

/// 10 log10(1 / mse) for unit-range images.
double psnr(const Array& a, const Array& b);

}  // namespace igs
