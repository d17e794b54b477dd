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

#include "igs/graph.hpp"

namespace igs::testing {

/// Relative error with a floor so near-zero gradient pairs compare absolutely.
inline double rel_err(double a, double b, double floor = 1e-6) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

/// Central finite differences of a scalar function of several leaf arrays.
/// build() must construct a fresh graph from the current leaf values and
/// return the scalar loss node. Returns the max relative error between the
/// analytic gradient and the FD estimate over every leaf entry.
inline double fd_check_max_rel_err(std::vector<Array>& leaves,
                                   const std::function<int(Graph&, const std::vector<int>&)>& build,
                                   double step = 1e-5, double floor = 1e-6) {
  // Analytic pass.
  Graph g;
  std::vector<int> ids;
  ids.reserve(leaves.size());
  for (auto& a : leaves) ids.push_back(g.leaf(a));
  const int loss = build(g, ids);
  g.backward(loss);
  std::vector<Array> analytic;
  analytic.reserve(ids.size());
  for (int id : ids) analytic.push_back(g.grad(id));

  auto eval = [&]() {
    Graph h;
    std::vector<int> hid;
    for (auto& a : leaves) hid.push_back(h.leaf(a));
    return h.val(build(h, hid))(0, 0);
  };

  double worst = 0.0;
  for (size_t l = 0; l < leaves.size(); ++l) {
    for (Index i = 0; i < leaves[l].rows(); ++i) {
      for (Index j = 0; j < leaves[l].cols(); ++j) {
        const double orig = leaves[l](i, j);
        leaves[l](i, j) = orig + step;
        const double up = eval();
        leaves[l](i, j) = orig - step;
        const double dn = eval();
        leaves[l](i, j) = orig;
        const double fd = (up - dn) / (2.0 * step);
        worst = std::max(worst, rel_err(analytic[l](i, j), fd, floor));
      }
    }
  }
  return worst;
}

/// Same check but probing only a deterministic subset of entries per leaf,
/// for expensive pipelines.
inline double fd_check_sampled(std::vector<Array>& leaves,
                               const std::function<int(Graph&, const std::vector<int>&)>& build,
                               int samples_per_leaf, uint64_t seed, double step = 1e-5,
                               double floor = 1e-6) {
  Graph g;
  std::vector<int> ids;
  for (auto& a : leaves) ids.push_back(g.leaf(a));
  const int loss = build(g, ids);
  g.backward(loss);
  std::vector<Array> analytic;
  for (int id : ids) analytic.push_back(g.grad(id));

  auto eval = [&]() {
    Graph h;
    std::vector<int> hid;
    for (auto& a : leaves) hid.push_back(h.leaf(a));
    return h.val(build(h, hid))(0, 0);
  };

  DetRng rng(seed);
  double worst = 0.0;
  for (size_t l = 0; l < leaves.size(); ++l) {
    const Index n = leaves[l].size();
    const int probes = std::min<Index>(samples_per_leaf, n);
    for (int p = 0; p < probes; ++p) {
      const Index flat = static_cast<Index>(rng.uniform_int(0, static_cast<int>(n - 1)));
      const Index i = flat % leaves[l].rows();
      const Index j = flat / leaves[l].rows();
      const double orig = leaves[l](i, j);
      leaves[l](i, j) = orig + step;
      const double up = eval();
      leaves[l](i, j) = orig - step;
      const double dn = eval();
      leaves[l](i, j) = orig;
      const double fd = (up - dn) / (2.0 * step);
      worst = std::max(worst, rel_err(analytic[l](i, j), fd, floor));
    }
  }
  return worst;
}

inline Array random_array(Index rows, Index cols, DetRng& rng, double scale = 1.0) {
  Array a(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) a(i, j) = scale * rng.normal();
  return a;
}

}  // namespace igs::testing
