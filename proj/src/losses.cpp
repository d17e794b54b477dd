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

#include "igs/losses.hpp"

namespace igs {

int l1_loss_node(Graph& g, int a, int b) {
  require(g.rows(a) == g.rows(b) && g.cols(a) == g.cols(b), "l1 loss: shape mismatch");
  const double inv = 1.0 / static_cast<double>(g.val(a).size());
  return scale(g, sum_all(g, abs_op(g, sub(g, a, b))), inv);
}

int mse_loss_node(Graph& g, int a, int b) {
  require(g.rows(a) == g.rows(b) && g.cols(a) == g.cols(b), "mse loss: shape mismatch");
  const double inv = 1.0 / static_cast<double>(g.val(a).size());
  return scale(g, sum_all(g, square_op(g, sub(g, a, b))), inv);
}

int sum_squares_node(Graph& g, int a) { return sum_all(g, square_op(g, a)); }

PerceptualBank PerceptualBank::make(uint64_t seed, int feats) {
  DetRng rng(seed);
  PerceptualBank bank;
  bank.feats = feats;
  auto fill = [&](Index rows, Index cols, double scale) {
    Array k(rows, cols);
    for (Index i = 0; i < rows; ++i)
      for (Index j = 0; j < cols; ++j) k(i, j) = scale * rng.normal();
    return k;
  };
  bank.level1 = fill(feats, 3 * 9, 1.0 / std::sqrt(27.0));
  bank.level2 = fill(feats, static_cast<Index>(feats) * 9, 1.0 / std::sqrt(9.0 * feats));
  return bank;
}

int perceptual_loss_node(Graph& g, int img_a, int img_b, const PerceptualBank& bank, int h,
                         int w) {
  require(h >= 16 && w >= 16, "perceptual loss: images must be at least 16x16");
  require(h % 2 == 0 && w % 2 == 0, "perceptual loss: even image sides required");
  require(g.rows(img_a) == static_cast<Index>(h) * w && g.cols(img_a) == 3,
          "perceptual loss: image shape mismatch");
  require(g.rows(img_b) == g.rows(img_a) && g.cols(img_b) == 3,
          "perceptual loss: image shape mismatch");
  auto features = [&](int img, int& f1, int& f2) {
    f1 = conv3x3_fixed(g, img, h, w, bank.level1);
    const int down = avgpool2(g, f1, h, w);
    f2 = conv3x3_fixed(g, down, h / 2, w / 2, bank.level2);
  };
  int a1, a2, b1, b2;
  features(img_a, a1, a2);
  features(img_b, b1, b2);
  return add(g, mse_loss_node(g, a1, b1), mse_loss_node(g, a2, b2));
}

double psnr(const Array& a, const Array& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "psnr: shape mismatch");
  const double mse = (a - b).square().mean();
  if (mse <= 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(1.0 / mse);
}

}  // namespace igs
