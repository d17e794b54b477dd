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

#include "igs/knn.hpp"

namespace igs {

struct DetectionConfig {
  int n_canonical = 100;  // neighbors on the canonical point set
  int n_posed = 100;      // neighbors on the posed point set
  int threshold = 90;     // symmetric-difference trip level
};

struct InteractionLabels {
  std::vector<uint8_t> flags;  // 1 = interacting
  int flagged_left = 0;
  int flagged_right = 0;
  int flagged_cross = 0;  // flagged points whose posed neighbors span both hands

  int count() const { return static_cast<int>(flags.size()); }
  int flagged_total() const { return flagged_left + flagged_right; }
};

/// Flags point q when its canonical and posed neighbor sets differ in more
/// than `threshold` members:
///   d(q) = 1  iff  |Wc u Wp| - |Wc n Wp| > T.
/// Canonical neighbors are queried at q's canonical position, posed neighbors
/// at its posed position; both sets index the concatenated two-hand list.
/// `sides` supplies the per-hand flag tallies; `threads` only parallelizes.
InteractionLabels detect_interactions(const ArrayX3& canonical, const ArrayX3& posed,
                                      const std::vector<int>& sides, const DetectionConfig& cfg,
                                      int threads = 1);

/// O(N^2) oracle with the identical contract (no spatial index).
InteractionLabels brute_force_detect(const ArrayX3& canonical, const ArrayX3& posed,
                                     const std::vector<int>& sides, const DetectionConfig& cfg);

/// Flat binary label format: magic "IHLB", u32 count, one byte per point.
void write_labels(const std::string& path, const InteractionLabels& labels);
InteractionLabels read_labels(const std::string& path);

}  // namespace igs
