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

/// Central finite-difference audit of every analytic gradient path: the
/// splatting adjoint, the losses, the encoders, map sampling and the full
/// pipeline chain down to identity-map texels.
struct GradCheckReport {
  struct Entry {
    std::string name;
    int checks = 0;
    double max_rel_err = 0.0;
    double budget = 0.0;

    bool ok() const { return max_rel_err < budget; }
  };
  std::vector<Entry> entries;
  double wall_ms = 0.0;

  bool ok() const {
    for (const auto& e : entries)
      if (!e.ok()) return false;
    return !entries.empty();
  }
  double worst() const {
    double w = 0;
    for (const auto& e : entries) w = std::max(w, e.max_rel_err);
    return w;
  }
};

/// `scenes` random tiny splat scenes (<= 50 gaussians, 32x32 px) plus one
/// pass over each other category. Deterministic in `seed`.
GradCheckReport run_gradient_checks(uint64_t seed, int scenes);

}  // namespace igs
