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

#include <functional>
#include <vector>

#include "igs/util.hpp"

namespace igs {

/// Reverse-mode tape over dense double arrays. Nodes are created in
/// topological order (inputs before outputs) by construction; backward walks
/// the arena in reverse creation order and visits each reached node once.
/// Gradients of nodes the loss does not reach stay zero.
class Graph {
 public:
  /// backward fn receives the graph and the node's own id; it reads
  /// grad(self) and accumulates into the node's inputs.
  using BackwardFn = std::function<void(Graph&, int)>;

  Graph() = default;
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  /// Differentiable leaf (parameter or input we want gradients for).
  int leaf(Array value);

  /// Non-differentiable constant.
  int constant(Array value);

  /// Interior op node. `needs_grad` is inferred from the inputs.
  int add_op(Array value, std::vector<int> inputs, BackwardFn back);

  const Array& val(int id) const { return nodes_[id].value; }
  Index rows(int id) const { return nodes_[id].value.rows(); }
  Index cols(int id) const { return nodes_[id].value.cols(); }

  /// Gradient buffer (zeros if never reached by backward).
  const Array& grad(int id);

  bool needs_grad(int id) const { return nodes_[id].needs_grad; }

  /// Accumulates g into node id's gradient (no-op for constant subgraphs).
  void accumulate(int id, const Array& g);

  /// Seeds d(loss)/d(loss) = 1 (loss must be 1x1) and propagates.
  void backward(int loss_id);

  int size() const { return static_cast<int>(nodes_.size()); }

 private:
  struct Node {
    Array value;
    Array grad;  // lazily sized
    std::vector<int> inputs;
    BackwardFn back;
    bool needs_grad = false;
    bool reached = false;
  };
  std::vector<Node> nodes_;
};

// --- primitive ops (free functions returning the new node id) ---

int add(Graph& g, int a, int b);
int sub(Graph& g, int a, int b);
int mul(Graph& g, int a, int b);                // elementwise
int matmul(Graph& g, int a, int b);
int transpose(Graph& g, int a);
int scale(Graph& g, int a, double c);
int add_rowvec(Graph& g, int a, int v);         // v is 1xN, added to each row
int mul_rowvec(Graph& g, int a, int v);
int broadcast_row(Graph& g, int v, Index rows); // 1xN -> rows x N
int tanh_op(Graph& g, int a);
int sigmoid_op(Graph& g, int a);
int exp_op(Graph& g, int a);
int abs_op(Graph& g, int a);                    // subgradient 0 at ties
int square_op(Graph& g, int a);
int sum_all(Graph& g, int a);                   // -> 1x1
int softmax_rows(Graph& g, int a);
int concat_cols(Graph& g, int a, int b);
int slice_cols(Graph& g, int a, Index start, Index n);
int gather_rows(Graph& g, int a, std::vector<Index> idx);
/// out = base with rows[k] written at idx[k]; overwritten base rows get no
/// gradient from the base path.
int scatter_rows(Graph& g, int base, std::vector<Index> idx, int rows);
/// out.row(i) = mean over a.row(j), j in groups[i].
int mean_rows_groups(Graph& g, int a, std::vector<std::vector<int>> groups);

/// NeRF-style frequency encoding: per coordinate x emits
/// [sin(2^0 pi x), cos(2^0 pi x), ..., sin(2^{L-1} pi x), cos(2^{L-1} pi x)].
int gamma_encode_op(Graph& g, int a, int bands);

/// Bilinear map sampling with half-texel border clamp. map is (h*w) x ch
/// (row t = y*w + x); uv is a constant list in [0,1]^2. Differentiable in
/// the map entries only; gradients scatter bilinearly to the 4 source texels.
int bilinear_sample(Graph& g, int map, const ArrayX2& uv, int h, int w);

/// Scatters per-row features to their nearest texel; where several rows land
/// on one texel the highest row index wins (ascending-order writes).
/// Unwritten texels are zero.
int scatter_to_texels(Graph& g, int feats, const ArrayX2& uv, int h, int w);

/// Per-row half selection: out.row(i) = a.row(i).segment(side[i]*half, half).
int select_side_cols(Graph& g, int a, const std::vector<int>& side, Index half);

/// out = t with dt added to both column halves (t is Nx2C, dt is NxC).
int add_tiled_cols(Graph& g, int t, int dt);

/// Row-wise L2 normalization (rows must be away from zero).
int normalize_rows(Graph& g, int a);

/// Smooth norm clamp: row x -> x * radius*tanh(|x|)/|x|; output norm < radius.
int soft_clamp_rows(Graph& g, int a, double radius);

/// 3x3 convolution with fixed (non-learned) kernels, zero padding.
/// img is (h*w) x ch_in; kernels is ch_out x (ch_in*9), tap order
/// (dy,dx) in row-major over {-1,0,1}^2 per input channel.
int conv3x3_fixed(Graph& g, int img, int h, int w, const Array& kernels);

/// 2x2 mean pooling; h and w must be even.
int avgpool2(Graph& g, int img, int h, int w);

}  // namespace igs
