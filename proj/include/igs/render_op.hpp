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

#include "igs/gaussians.hpp"
#include "igs/graph.hpp"

namespace igs {

/// Rasterization as a graph node: forward runs the tile renderer, backward
/// the analytic adjoint. Output is (h*w) x 4 with columns [r, g, b, M].
int render_node(Graph& g, const AttributeNodes& attrs, const Camera& cam, int width, int height,
                const Vec3& background, int threads = 1);

}  // namespace igs
