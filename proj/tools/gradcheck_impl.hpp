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

#include <cstdio>

#include "igs/gradcheck.hpp"

namespace {

int cmd_gradcheck(uint64_t seed, int scenes) {
  const igs::GradCheckReport report = igs::run_gradient_checks(seed, scenes);
  for (const auto& e : report.entries)
    std::printf("%-22s checks=%5d  max_rel_err=%.3e  budget=%.0e  %s\n", e.name.c_str(),
                e.checks, e.max_rel_err, e.budget, e.ok() ? "ok" : "FAIL");
  std::printf("gradcheck: max rel err %.3e over all categories, %.0f ms\n", report.worst(),
              report.wall_ms);
  return report.ok() ? 0 : 1;
}

}  // namespace
