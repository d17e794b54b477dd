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

#include <string>
#include <vector>

#include "igs/util.hpp"

namespace igs {

/// Exact k-nearest-neighbor index over a snapshot of points (uniform grid
/// with expanding-ring search). Ties in distance break by ascending point
/// index, so results match the brute-force scan exactly.
class NeighborIndex {
 public:
  explicit NeighborIndex(const ArrayX3& points);

  /// The k smallest-(distance, index) points to q. Result sorted by index.
  std::vector<int> neighbors(const Vec3& q, int k) const;

  Index size() const { return points_.rows(); }
  const ArrayX3& points() const { return points_; }
  static const char* tie_break_rule() { return "ascending-index"; }

 private:
  ArrayX3 points_;
  Vec3 origin_;
  double cell_ = 1.0;
  int dims_[3] = {1, 1, 1};
  std::vector<std::vector<int>> cells_;

  int cell_of(const Vec3& p) const;
};

/// Brute-force oracle with the identical contract.
std::vector<int> brute_force_neighbors(const ArrayX3& points, const Vec3& q, int k);

}  // namespace igs
