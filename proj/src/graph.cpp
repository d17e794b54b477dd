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

#include "igs/graph.hpp"

#include <cmath>

namespace igs {

int Graph::leaf(Array value) {
  Node n;
  n.value = std::move(value);
  n.needs_grad = true;
  nodes_.push_back(std::move(n));
  return static_cast<int>(nodes_.size()) - 1;
}

int Graph::constant(Array value) {
  Node n;
  n.value = std::move(value);
  n.needs_grad = false;
  nodes_.push_back(std::move(n));
  return static_cast<int>(nodes_.size()) - 1;
}

int Graph::add_op(Array value, std::vector<int> inputs, BackwardFn back) {
  Node n;
  n.value = std::move(value);
  n.inputs = std::move(inputs);
  for (int in : n.inputs) {
    require(in >= 0 && in < size(), "graph: op input id out of range");
    if (nodes_[in].needs_grad) n.needs_grad = true;
  }
  if (n.needs_grad) n.back = std::move(back);
  nodes_.push_back(std::move(n));
  return static_cast<int>(nodes_.size()) - 1;
}

const Array& Graph::grad(int id) {
  Node& n = nodes_[id];
  if (n.grad.size() == 0) n.grad = Array::Zero(n.value.rows(), n.value.cols());
  return n.grad;
}

void Graph::accumulate(int id, const Array& g) {
  Node& n = nodes_[id];
  if (!n.needs_grad) return;
  require(g.rows() == n.value.rows() && g.cols() == n.value.cols(),
          "graph: gradient shape mismatch");
  if (n.grad.size() == 0)
    n.grad = g;
  else
    n.grad += g;
  n.reached = true;
}

void Graph::backward(int loss_id) {
  require(loss_id >= 0 && loss_id < size(), "graph: bad loss id");
  require(nodes_[loss_id].value.size() == 1, "graph: backward needs a scalar loss");
  accumulate(loss_id, Array::Constant(1, 1, 1.0));
  for (int i = loss_id; i >= 0; --i) {
    Node& n = nodes_[i];
    if (n.reached && n.back) n.back(*this, i);
  }
}

namespace {

void check_same_shape(const Graph& g, int a, int b, const char* op) {
  require(g.val(a).rows() == g.val(b).rows() && g.val(a).cols() == g.val(b).cols(),
          std::string(op) + ": shape mismatch");
}

}  // namespace

int add(Graph& g, int a, int b) {
  check_same_shape(g, a, b, "add");
  return g.add_op(g.val(a) + g.val(b), {a, b}, [a, b](Graph& g, int self) {
    g.accumulate(a, g.grad(self));
    g.accumulate(b, g.grad(self));
  });
}

int sub(Graph& g, int a, int b) {
  check_same_shape(g, a, b, "sub");
  return g.add_op(g.val(a) - g.val(b), {a, b}, [a, b](Graph& g, int self) {
    g.accumulate(a, g.grad(self));
    g.accumulate(b, -g.grad(self));
  });
}

int mul(Graph& g, int a, int b) {
  check_same_shape(g, a, b, "mul");
  return g.add_op(g.val(a) * g.val(b), {a, b}, [a, b](Graph& g, int self) {
    g.accumulate(a, g.grad(self) * g.val(b));
    g.accumulate(b, g.grad(self) * g.val(a));
  });
}

int matmul(Graph& g, int a, int b) {
  require(g.cols(a) == g.rows(b), "matmul: inner dimension mismatch");
  Array out = (g.val(a).matrix() * g.val(b).matrix()).array();
  return g.add_op(std::move(out), {a, b}, [a, b](Graph& g, int self) {
    const auto& G = g.grad(self).matrix();
    g.accumulate(a, (G * g.val(b).matrix().transpose()).array());
    g.accumulate(b, (g.val(a).matrix().transpose() * G).array());
  });
}

int transpose(Graph& g, int a) {
  return g.add_op(g.val(a).transpose(), {a}, [a](Graph& g, int self) {
    g.accumulate(a, g.grad(self).transpose());
  });
}

int scale(Graph& g, int a, double c) {
  return g.add_op(g.val(a) * c, {a}, [a, c](Graph& g, int self) {
    g.accumulate(a, g.grad(self) * c);
  });
}

int add_rowvec(Graph& g, int a, int v) {
  require(g.rows(v) == 1 && g.cols(v) == g.cols(a), "add_rowvec: v must be 1 x cols(a)");
  Array out = g.val(a);
  out.rowwise() += g.val(v).row(0);
  return g.add_op(std::move(out), {a, v}, [a, v](Graph& g, int self) {
    g.accumulate(a, g.grad(self));
    g.accumulate(v, g.grad(self).colwise().sum());
  });
}

int mul_rowvec(Graph& g, int a, int v) {
  require(g.rows(v) == 1 && g.cols(v) == g.cols(a), "mul_rowvec: v must be 1 x cols(a)");
  Array out = g.val(a);
  out.rowwise() *= g.val(v).row(0);
  return g.add_op(std::move(out), {a, v}, [a, v](Graph& g, int self) {
    Array ga = g.grad(self);
    ga.rowwise() *= g.val(v).row(0);
    g.accumulate(a, ga);
    g.accumulate(v, (g.grad(self) * g.val(a)).colwise().sum());
  });
}

int broadcast_row(Graph& g, int v, Index rows) {
  require(g.rows(v) == 1, "broadcast_row: input must be a row vector");
  Array out(rows, g.cols(v));
  out.rowwise() = g.val(v).row(0);
  return g.add_op(std::move(out), {v}, [v](Graph& g, int self) {
    g.accumulate(v, g.grad(self).colwise().sum());
  });
}

int tanh_op(Graph& g, int a) {
  return g.add_op(g.val(a).tanh(), {a}, [a](Graph& g, int self) {
    g.accumulate(a, g.grad(self) * (1.0 - g.val(self).square()));
  });
}

int sigmoid_op(Graph& g, int a) {
  Array out = 1.0 / (1.0 + (-g.val(a)).exp());
  return g.add_op(std::move(out), {a}, [a](Graph& g, int self) {
    const Array& y = g.val(self);
    g.accumulate(a, g.grad(self) * y * (1.0 - y));
  });
}

int exp_op(Graph& g, int a) {
  return g.add_op(g.val(a).exp(), {a}, [a](Graph& g, int self) {
    g.accumulate(a, g.grad(self) * g.val(self));
  });
}

int abs_op(Graph& g, int a) {
  return g.add_op(g.val(a).abs(), {a}, [a](Graph& g, int self) {
    g.accumulate(a, g.grad(self) * g.val(a).sign());
  });
}

int square_op(Graph& g, int a) {
  return g.add_op(g.val(a).square(), {a}, [a](Graph& g, int self) {
    g.accumulate(a, g.grad(self) * 2.0 * g.val(a));
  });
}

int sum_all(Graph& g, int a) {
  Array out(1, 1);
  out(0, 0) = g.val(a).sum();
  return g.add_op(std::move(out), {a}, [a](Graph& g, int self) {
    g.accumulate(a, Array::Constant(g.rows(a), g.cols(a), g.grad(self)(0, 0)));
  });
}

int softmax_rows(Graph& g, int a) {
  Array out = g.val(a);
  for (Index r = 0; r < out.rows(); ++r) {
    Eigen::ArrayXd row = out.row(r);
    row -= row.maxCoeff();
    row = row.exp();
    out.row(r) = row / row.sum();
  }
  return g.add_op(std::move(out), {a}, [a](Graph& g, int self) {
    const Array& y = g.val(self);
    const Array& G = g.grad(self);
    Array da(y.rows(), y.cols());
    for (Index r = 0; r < y.rows(); ++r) {
      const double dot = (G.row(r) * y.row(r)).sum();
      da.row(r) = (G.row(r) - dot) * y.row(r);
    }
    g.accumulate(a, da);
  });
}

int concat_cols(Graph& g, int a, int b) {
  require(g.rows(a) == g.rows(b), "concat_cols: row count mismatch");
  Array out(g.rows(a), g.cols(a) + g.cols(b));
  out.leftCols(g.cols(a)) = g.val(a);
  out.rightCols(g.cols(b)) = g.val(b);
  const Index ca = g.cols(a);
  return g.add_op(std::move(out), {a, b}, [a, b, ca](Graph& g, int self) {
    const Array& G = g.grad(self);
    g.accumulate(a, G.leftCols(ca));
    g.accumulate(b, G.rightCols(G.cols() - ca));
  });
}

int slice_cols(Graph& g, int a, Index start, Index n) {
  require(start >= 0 && start + n <= g.cols(a), "slice_cols: out of range");
  return g.add_op(g.val(a).middleCols(start, n), {a}, [a, start, n](Graph& g, int self) {
    Array da = Array::Zero(g.rows(a), g.cols(a));
    da.middleCols(start, n) = g.grad(self);
    g.accumulate(a, da);
  });
}

int gather_rows(Graph& g, int a, std::vector<Index> idx) {
  Array out(static_cast<Index>(idx.size()), g.cols(a));
  for (size_t k = 0; k < idx.size(); ++k) {
    require(idx[k] >= 0 && idx[k] < g.rows(a), "gather_rows: index out of range");
    out.row(static_cast<Index>(k)) = g.val(a).row(idx[k]);
  }
  return g.add_op(std::move(out), {a},
                  [a, idx = std::move(idx)](Graph& g, int self) {
                    Array da = Array::Zero(g.rows(a), g.cols(a));
                    const Array& G = g.grad(self);
                    for (size_t k = 0; k < idx.size(); ++k)
                      da.row(idx[k]) += G.row(static_cast<Index>(k));
                    g.accumulate(a, da);
                  });
}

int scatter_rows(Graph& g, int base, std::vector<Index> idx, int rows) {
  require(g.cols(base) == g.cols(rows), "scatter_rows: column mismatch");
  require(static_cast<Index>(idx.size()) == g.rows(rows), "scatter_rows: index count mismatch");
  Array out = g.val(base);
  for (size_t k = 0; k < idx.size(); ++k) {
    require(idx[k] >= 0 && idx[k] < out.rows(), "scatter_rows: index out of range");
    out.row(idx[k]) = g.val(rows).row(static_cast<Index>(k));
  }
  return g.add_op(std::move(out), {base, rows},
                  [base, rows, idx = std::move(idx)](Graph& g, int self) {
                    Array gb = g.grad(self);
                    Array gr(static_cast<Index>(idx.size()), gb.cols());
                    for (size_t k = 0; k < idx.size(); ++k) {
                      gr.row(static_cast<Index>(k)) = gb.row(idx[k]);
                      gb.row(idx[k]).setZero();
                    }
                    g.accumulate(base, gb);
                    g.accumulate(rows, gr);
                  });
}

int mean_rows_groups(Graph& g, int a, std::vector<std::vector<int>> groups) {
  require(static_cast<Index>(groups.size()) == g.rows(a),
          "mean_rows_groups: one group per row required");
  Array out = Array::Zero(g.rows(a), g.cols(a));
  for (size_t i = 0; i < groups.size(); ++i) {
    require(!groups[i].empty(), "mean_rows_groups: empty group");
    for (int j : groups[i]) out.row(static_cast<Index>(i)) += g.val(a).row(j);
    out.row(static_cast<Index>(i)) /= static_cast<double>(groups[i].size());
  }
  return g.add_op(std::move(out), {a},
                  [a, groups = std::move(groups)](Graph& g, int self) {
                    Array da = Array::Zero(g.rows(a), g.cols(a));
                    const Array& G = g.grad(self);
                    for (size_t i = 0; i < groups.size(); ++i) {
                      const double inv = 1.0 / static_cast<double>(groups[i].size());
                      for (int j : groups[i]) da.row(j) += G.row(static_cast<Index>(i)) * inv;
                    }
                    g.accumulate(a, da);
                  });
}

int gamma_encode_op(Graph& g, int a, int bands) {
  require(bands >= 1, "gamma_encode: bands must be >= 1");
  const Array& x = g.val(a);
  Array out(x.rows(), x.cols() * 2 * bands);
  for (Index j = 0; j < x.cols(); ++j) {
    double freq = M_PI;
    for (int l = 0; l < bands; ++l) {
      out.col(j * 2 * bands + 2 * l) = (freq * x.col(j)).sin();
      out.col(j * 2 * bands + 2 * l + 1) = (freq * x.col(j)).cos();
      freq *= 2.0;
    }
  }
  return g.add_op(std::move(out), {a}, [a, bands](Graph& g, int self) {
    const Array& x = g.val(a);
    const Array& G = g.grad(self);
    Array da = Array::Zero(x.rows(), x.cols());
    for (Index j = 0; j < x.cols(); ++j) {
      double freq = M_PI;
      for (int l = 0; l < bands; ++l) {
        da.col(j) += freq * ((freq * x.col(j)).cos() * G.col(j * 2 * bands + 2 * l) -
                             (freq * x.col(j)).sin() * G.col(j * 2 * bands + 2 * l + 1));
        freq *= 2.0;
      }
    }
    g.accumulate(a, da);
  });
}

namespace {

// Shared bilinear footprint: texel pair + fraction per axis, half-texel clamp.
struct BilinearAxis {
  Index i0, i1;
  double f;  // weight of i1
};

BilinearAxis bilinear_axis(double coord01, int extent) {
  double x = coord01 * extent - 0.5;
  if (x < 0.0) x = 0.0;
  const double maxc = static_cast<double>(extent - 1);
  if (x > maxc) x = maxc;
  BilinearAxis r;
  r.i0 = static_cast<Index>(std::floor(x));
  if (r.i0 > extent - 1) r.i0 = extent - 1;
  r.i1 = std::min<Index>(r.i0 + 1, extent - 1);
  r.f = x - static_cast<double>(r.i0);
  return r;
}

}  // namespace

int bilinear_sample(Graph& g, int map, const ArrayX2& uv, int h, int w) {
  require(g.rows(map) == static_cast<Index>(h) * w, "bilinear_sample: map rows != h*w");
  for (Index i = 0; i < uv.rows(); ++i)
    require(uv(i, 0) >= 0.0 && uv(i, 0) <= 1.0 && uv(i, 1) >= 0.0 && uv(i, 1) <= 1.0,
            "bilinear_sample: uv outside the unit square");
  const Array& m = g.val(map);
  Array out(uv.rows(), m.cols());
  for (Index i = 0; i < uv.rows(); ++i) {
    const BilinearAxis ax = bilinear_axis(uv(i, 0), w);
    const BilinearAxis ay = bilinear_axis(uv(i, 1), h);
    out.row(i) = (1 - ax.f) * (1 - ay.f) * m.row(ay.i0 * w + ax.i0) +
                 ax.f * (1 - ay.f) * m.row(ay.i0 * w + ax.i1) +
                 (1 - ax.f) * ay.f * m.row(ay.i1 * w + ax.i0) +
                 ax.f * ay.f * m.row(ay.i1 * w + ax.i1);
  }
  return g.add_op(std::move(out), {map}, [map, uv, h, w](Graph& g, int self) {
    Array dm = Array::Zero(g.rows(map), g.cols(map));
    const Array& G = g.grad(self);
    for (Index i = 0; i < uv.rows(); ++i) {
      const BilinearAxis ax = bilinear_axis(uv(i, 0), w);
      const BilinearAxis ay = bilinear_axis(uv(i, 1), h);
      dm.row(ay.i0 * w + ax.i0) += (1 - ax.f) * (1 - ay.f) * G.row(i);
      dm.row(ay.i0 * w + ax.i1) += ax.f * (1 - ay.f) * G.row(i);
      dm.row(ay.i1 * w + ax.i0) += (1 - ax.f) * ay.f * G.row(i);
      dm.row(ay.i1 * w + ax.i1) += ax.f * ay.f * G.row(i);
    }
    g.accumulate(map, dm);
  });
}

namespace {

Index nearest_texel(double u, double v, int h, int w) {
  Index ix = static_cast<Index>(std::floor(u * w));
  Index iy = static_cast<Index>(std::floor(v * h));
  ix = std::min<Index>(std::max<Index>(ix, 0), w - 1);
  iy = std::min<Index>(std::max<Index>(iy, 0), h - 1);
  return iy * w + ix;
}

}  // namespace

int scatter_to_texels(Graph& g, int feats, const ArrayX2& uv, int h, int w) {
  require(g.rows(feats) == uv.rows(), "scatter_to_texels: feature/uv count mismatch");
  const Index texels = static_cast<Index>(h) * w;
  // Winner per texel: highest row id (ascending writes, later wins).
  std::vector<Index> winner(texels, -1);
  for (Index i = 0; i < uv.rows(); ++i) winner[nearest_texel(uv(i, 0), uv(i, 1), h, w)] = i;
  Array out = Array::Zero(texels, g.cols(feats));
  for (Index t = 0; t < texels; ++t)
    if (winner[t] >= 0) out.row(t) = g.val(feats).row(winner[t]);
  return g.add_op(std::move(out), {feats},
                  [feats, winner = std::move(winner)](Graph& g, int self) {
                    Array df = Array::Zero(g.rows(feats), g.cols(feats));
                    const Array& G = g.grad(self);
                    for (Index t = 0; t < G.rows(); ++t)
                      if (winner[t] >= 0) df.row(winner[t]) += G.row(t);
                    g.accumulate(feats, df);
                  });
}

int select_side_cols(Graph& g, int a, const std::vector<int>& side, Index half) {
  require(static_cast<Index>(side.size()) == g.rows(a), "select_side_cols: side per row required");
  require(g.cols(a) == 2 * half, "select_side_cols: expected 2*half columns");
  Array out(g.rows(a), half);
  for (Index i = 0; i < out.rows(); ++i)
    out.row(i) = g.val(a).row(i).segment(side[i] * half, half);
  return g.add_op(std::move(out), {a}, [a, side, half](Graph& g, int self) {
    Array da = Array::Zero(g.rows(a), g.cols(a));
    const Array& G = g.grad(self);
    for (Index i = 0; i < G.rows(); ++i)
      da.row(i).segment(side[i] * half, half) = G.row(i);
    g.accumulate(a, da);
  });
}

int add_tiled_cols(Graph& g, int t, int dt) {
  require(g.rows(t) == g.rows(dt) && g.cols(t) == 2 * g.cols(dt),
          "add_tiled_cols: t must be N x 2C and dt N x C");
  const Index c = g.cols(dt);
  Array out = g.val(t);
  out.leftCols(c) += g.val(dt);
  out.rightCols(c) += g.val(dt);
  return g.add_op(std::move(out), {t, dt}, [t, dt, c](Graph& g, int self) {
    const Array& G = g.grad(self);
    g.accumulate(t, G);
    g.accumulate(dt, G.leftCols(c) + G.rightCols(c));
  });
}

int normalize_rows(Graph& g, int a) {
  const Array& x = g.val(a);
  Array out(x.rows(), x.cols());
  for (Index i = 0; i < x.rows(); ++i) {
    const double n = x.matrix().row(i).norm();
    require(n > 1e-12, "normalize_rows: row norm too small");
    out.row(i) = x.row(i) / n;
  }
  return g.add_op(std::move(out), {a}, [a](Graph& g, int self) {
    const Array& x = g.val(a);
    const Array& y = g.val(self);
    const Array& G = g.grad(self);
    Array da(x.rows(), x.cols());
    for (Index i = 0; i < x.rows(); ++i) {
      const double n = x.matrix().row(i).norm();
      const double dot = (G.row(i) * y.row(i)).sum();
      da.row(i) = (G.row(i) - dot * y.row(i)) / n;
    }
    g.accumulate(a, da);
  });
}

int soft_clamp_rows(Graph& g, int a, double radius) {
  require(radius > 0.0, "soft_clamp_rows: radius must be positive");
  const Array& x = g.val(a);
  Array out(x.rows(), x.cols());
  for (Index i = 0; i < x.rows(); ++i) {
    const double n = x.matrix().row(i).norm();
    // s(n) = radius * tanh(n) / n, with the n->0 limit s = radius.
    const double s = (n < 1e-12) ? radius : radius * std::tanh(n) / n;
    out.row(i) = s * x.row(i);
  }
  return g.add_op(std::move(out), {a}, [a, radius](Graph& g, int self) {
    const Array& x = g.val(a);
    const Array& G = g.grad(self);
    Array da(x.rows(), x.cols());
    for (Index i = 0; i < x.rows(); ++i) {
      const double n = x.matrix().row(i).norm();
      if (n < 1e-12) {
        da.row(i) = radius * G.row(i);
        continue;
      }
      const double t = std::tanh(n);
      const double s = radius * t / n;
      // d(out)/dx = s*I + radius*(sech^2(n)*n - tanh(n))/n^2 * (x x^T)/n
      const double c = radius * ((1.0 - t * t) * n - t) / (n * n * n);
      const double xg = (x.row(i) * G.row(i)).sum();
      da.row(i) = s * G.row(i) + c * xg * x.row(i);
    }
    g.accumulate(a, da);
  });
}

int conv3x3_fixed(Graph& g, int img, int h, int w, const Array& kernels) {
  const Index ch_in = g.cols(img);
  require(g.rows(img) == static_cast<Index>(h) * w, "conv3x3: image rows != h*w");
  require(kernels.cols() == ch_in * 9, "conv3x3: kernel bank shape mismatch");
  const Index ch_out = kernels.rows();
  const Array& src = g.val(img);
  Array out = Array::Zero(static_cast<Index>(h) * w, ch_out);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const Index p = static_cast<Index>(y) * w + x;
      for (int dy = -1; dy <= 1; ++dy) {
        const int yy = y + dy;
        if (yy < 0 || yy >= h) continue;
        for (int dx = -1; dx <= 1; ++dx) {
          const int xx = x + dx;
          if (xx < 0 || xx >= w) continue;
          const Index q = static_cast<Index>(yy) * w + xx;
          const Index tap = static_cast<Index>((dy + 1) * 3 + (dx + 1));
          for (Index co = 0; co < ch_out; ++co)
            for (Index ci = 0; ci < ch_in; ++ci)
              out(p, co) += kernels(co, ci * 9 + tap) * src(q, ci);
        }
      }
    }
  }
  return g.add_op(std::move(out), {img}, [img, h, w, kernels](Graph& g, int self) {
    const Index ch_in = g.cols(img);
    const Index ch_out = kernels.rows();
    const Array& G = g.grad(self);
    Array da = Array::Zero(g.rows(img), ch_in);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const Index p = static_cast<Index>(y) * w + x;
        for (int dy = -1; dy <= 1; ++dy) {
          const int yy = y + dy;
          if (yy < 0 || yy >= h) continue;
          for (int dx = -1; dx <= 1; ++dx) {
            const int xx = x + dx;
            if (xx < 0 || xx >= w) continue;
            const Index q = static_cast<Index>(yy) * w + xx;
            const Index tap = static_cast<Index>((dy + 1) * 3 + (dx + 1));
            for (Index co = 0; co < ch_out; ++co)
              for (Index ci = 0; ci < ch_in; ++ci)
                da(q, ci) += kernels(co, ci * 9 + tap) * G(p, co);
          }
        }
      }
    }
    g.accumulate(img, da);
  });
}

int avgpool2(Graph& g, int img, int h, int w) {
  require(h % 2 == 0 && w % 2 == 0, "avgpool2: h and w must be even");
  require(g.rows(img) == static_cast<Index>(h) * w, "avgpool2: image rows != h*w");
  const int oh = h / 2, ow = w / 2;
  const Array& src = g.val(img);
  Array out(static_cast<Index>(oh) * ow, g.cols(img));
  for (int y = 0; y < oh; ++y)
    for (int x = 0; x < ow; ++x)
      out.row(static_cast<Index>(y) * ow + x) =
          0.25 * (src.row(static_cast<Index>(2 * y) * w + 2 * x) +
                  src.row(static_cast<Index>(2 * y) * w + 2 * x + 1) +
                  src.row(static_cast<Index>(2 * y + 1) * w + 2 * x) +
                  src.row(static_cast<Index>(2 * y + 1) * w + 2 * x + 1));
  return g.add_op(std::move(out), {img}, [img, h, w](Graph& g, int self) {
    const int oh = h / 2, ow = w / 2;
    const Array& G = g.grad(self);
    Array da(g.rows(img), g.cols(img));
    for (int y = 0; y < oh; ++y)
      for (int x = 0; x < ow; ++x) {
        const auto row = 0.25 * G.row(static_cast<Index>(y) * ow + x);
        da.row(static_cast<Index>(2 * y) * w + 2 * x) = row;
        da.row(static_cast<Index>(2 * y) * w + 2 * x + 1) = row;
        da.row(static_cast<Index>(2 * y + 1) * w + 2 * x) = row;
        da.row(static_cast<Index>(2 * y + 1) * w + 2 * x + 1) = row;
      }
    g.accumulate(img, da);
  });
}

}  // namespace igs
