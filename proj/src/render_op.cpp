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

#include "igs/render_op.hpp"

namespace igs {

int render_node(Graph& g, const AttributeNodes& attrs, const Camera& cam, int width, int height,
                const Vec3& background, int threads) {
  const Index n = g.rows(attrs.means);
  require(g.cols(attrs.means) == 3 && g.cols(attrs.log_scales) == 3 && g.cols(attrs.quats) == 4 &&
              g.cols(attrs.opacities) == 1 && g.cols(attrs.colors) == 3,
          "render_node: attribute shape mismatch");
  require(g.rows(attrs.log_scales) == n && g.rows(attrs.quats) == n &&
              g.rows(attrs.opacities) == n && g.rows(attrs.colors) == n,
          "render_node: attribute row mismatch");

  auto gather = [attrs](Graph& graph) {
    SplatArrays<double> s;
    s.means = graph.val(attrs.means);
    s.log_scales = graph.val(attrs.log_scales);
    s.quats = graph.val(attrs.quats);
    s.opacities = graph.val(attrs.opacities).col(0);
    s.colors = graph.val(attrs.colors);
    return s;
  };

  RenderParams<double> params;
  params.width = width;
  params.height = height;
  params.background = background;
  params.threads = threads;

  const RenderedImage img = render<double>(gather(g), cam, params);
  Array out(static_cast<Index>(width) * height, 4);
  out.leftCols(3) = img.rgb;
  out.col(3) = img.silhouette;

  const std::vector<int> inputs{attrs.means, attrs.log_scales, attrs.quats, attrs.opacities,
                                attrs.colors};
  return g.add_op(std::move(out), inputs,
                  [attrs, cam, params, gather](Graph& g, int self) {
                    const Array& G = g.grad(self);
                    const Eigen::Array<double, Eigen::Dynamic, 3> d_rgb = G.leftCols(3);
                    const Eigen::Array<double, Eigen::Dynamic, 1> d_sil = G.col(3);
                    const RenderGradients grads =
                        render_backward<double>(gather(g), cam, params, d_rgb, d_sil);
                    g.accumulate(attrs.means, grads.means);
                    g.accumulate(attrs.log_scales, grads.log_scales);
                    g.accumulate(attrs.quats, grads.quats);
                    g.accumulate(attrs.opacities, grads.opacities);
                    g.accumulate(attrs.colors, grads.colors);
                  });
}

}  // namespace igs
