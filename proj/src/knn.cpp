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

#include "igs/knn.hpp"

#include <algorithm>
#include <queue>

namespace igs {

namespace {

using Key = std::pair<double, int>;  // (squared distance, index)

inline double sq_dist(const ArrayX3& pts, int i, const Vec3& q) {
  const double dx = pts(i, 0) - q.x();
  const double dy = pts(i, 1) - q.y();
  const double dz = pts(i, 2) - q.z();
  return dx * dx + dy * dy + dz * dz;
}

}  // namespace

NeighborIndex::NeighborIndex(const ArrayX3& points) : points_(points) {
  require(points_.rows() >= 1, "neighbor index: empty point set");
  require(points_.allFinite(), "neighbor index: non-finite coordinates");
  const Vec3 lo = points_.colwise().minCoeff().matrix().transpose();
  const Vec3 hi = points_.colwise().maxCoeff().matrix().transpose();
  origin_ = lo;
  const Vec3 extent = (hi - lo).cwiseMax(1e-9);
  // Aim for a handful of points per cell, capped to keep the grid small.
  const double target = std::cbrt(extent.prod() / static_cast<double>(points_.rows()));
  cell_ = std::max(target, 1e-9);
  for (int a = 0; a < 3; ++a)
    dims_[a] = std::clamp(static_cast<int>(std::ceil(extent[a] / cell_)), 1, 96);
  // Recompute the cell edge as the largest per-axis pitch so every cell
  // covers its slab; ring bounds below use this single edge length.
  double edge = 0.0;
  for (int a = 0; a < 3; ++a) edge = std::max(edge, extent[a] / dims_[a]);
  cell_ = std::max(edge, 1e-9);
  cells_.assign(static_cast<size_t>(dims_[0]) * dims_[1] * dims_[2], {});
  for (Index i = 0; i < points_.rows(); ++i)
    cells_[cell_of(points_.row(i).matrix().transpose())].push_back(static_cast<int>(i));
}

int NeighborIndex::cell_of(const Vec3& p) const {
  int c[3];
  for (int a = 0; a < 3; ++a) {
    c[a] = static_cast<int>(std::floor((p[a] - origin_[a]) / cell_));
    c[a] = std::clamp(c[a], 0, dims_[a] - 1);
  }
  return (c[2] * dims_[1] + c[1]) * dims_[0] + c[0];
}

std::vector<int> NeighborIndex::neighbors(const Vec3& q, int k) const {
  require(k >= 1, "neighbor query: k must be >= 1");
  require(k <= points_.rows(), "neighbor query: k exceeds point count");

  int home[3];
  for (int a = 0; a < 3; ++a) {
    home[a] = static_cast<int>(std::floor((q[a] - origin_[a]) / cell_));
    home[a] = std::clamp(home[a], 0, dims_[a] - 1);
  }
  const int max_ring = std::max({dims_[0], dims_[1], dims_[2]});

  // Max-heap of the best k (d^2, index) keys.
  std::priority_queue<Key> heap;
  auto offer = [&](int i) {
    const Key key{sq_dist(points_, i, q), i};
    if (static_cast<int>(heap.size()) < k)
      heap.push(key);
    else if (key < heap.top()) {
      heap.pop();
      heap.push(key);
    }
  };

  for (int ring = 0; ring <= max_ring; ++ring) {
    // Cells at Chebyshev ring r are at least (r-1) cell edges away. Once the
    // heap is full and the kth distance is strictly below that bound, no
    // farther ring can improve the set (equal distance still gets scanned so
    // index tie-breaks stay exact).
    if (static_cast<int>(heap.size()) == k) {
      const double bound = (static_cast<double>(ring) - 1.0) * cell_;
      if (bound > 0.0 && heap.top().first < bound * bound) break;
    }
    const int x0 = std::max(home[0] - ring, 0), x1 = std::min(home[0] + ring, dims_[0] - 1);
    const int y0 = std::max(home[1] - ring, 0), y1 = std::min(home[1] + ring, dims_[1] - 1);
    const int z0 = std::max(home[2] - ring, 0), z1 = std::min(home[2] + ring, dims_[2] - 1);
    for (int z = z0; z <= z1; ++z)
      for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) {
          const int cheb = std::max({std::abs(x - home[0]), std::abs(y - home[1]),
                                     std::abs(z - home[2])});
          if (cheb != ring) continue;  // shell only
          for (int i : cells_[(static_cast<size_t>(z) * dims_[1] + y) * dims_[0] + x]) offer(i);
        }
  }

  std::vector<int> out;
  out.reserve(k);
  while (!heap.empty()) {
    out.push_back(heap.top().second);
    heap.pop();
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> brute_force_neighbors(const ArrayX3& points, const Vec3& q, int k) {
  require(points.rows() >= 1, "brute force: empty point set");
  require(k >= 1 && k <= points.rows(), "brute force: bad k");
  std::vector<Key> keys(points.rows());
  for (Index i = 0; i < points.rows(); ++i)
    keys[i] = {sq_dist(points, static_cast<int>(i), q), static_cast<int>(i)};
  std::nth_element(keys.begin(), keys.begin() + (k - 1), keys.end());
  std::vector<int> out(k);
  for (int i = 0; i < k; ++i) out[i] = keys[i].second;
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace igs
