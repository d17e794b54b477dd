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

#include <doctest.h>

#include <fstream>

#include "helpers.hpp"
#include "igs/features.hpp"

using namespace igs;
using igs::testing::fd_check_max_rel_err;
using igs::testing::random_array;

namespace {

FeatureConfig small_cfg() {
  FeatureConfig cfg;
  cfg.channels = 8;
  cfg.pose_dim = 12;
  cfg.gamma_bands = 3;
  cfg.map_h = cfg.map_w = 8;
  cfg.hidden = 16;
  cfg.tex_hidden = 16;
  cfg.head_hidden = 8;
  return cfg;
}

ParamStore small_weights(const FeatureConfig& cfg, int theta_dim = 12, uint64_t seed = 5) {
  ParamStore ps;
  init_feature_weights(ps, cfg, theta_dim, seed);
  return ps;
}

}  // namespace

TEST_CASE("pose encoder: shape, determinism, input gradient") {
  const FeatureConfig cfg = small_cfg();
  ParamStore ps = small_weights(cfg);
  const Eigen::VectorXd theta = Eigen::VectorXd::LinSpaced(12, -0.5, 0.5);
  const Eigen::VectorXd cam25 = Eigen::VectorXd::LinSpaced(25, 0.0, 1.0);

  Graph g1;
  ParamLeaves l1(g1, ps, true);
  const int e1 = encode_pose(g1, l1, cfg, theta, cam25, Vec2(0.1, 0.2));
  CHECK(g1.rows(e1) == 1);
  CHECK(g1.cols(e1) == cfg.pose_dim);

  Graph g2;
  ParamLeaves l2(g2, ps, true);
  const int e2 = encode_pose(g2, l2, cfg, theta, cam25, Vec2(0.1, 0.2));
  CHECK((g1.val(e1) == g2.val(e2)).all());  // bitwise determinism

  // Jacobian of the encoder vs finite differences for 5 random inputs.
  DetRng rng(31);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<Array> leaves{random_array(1, 39, rng, 0.5)};
    const double err = fd_check_max_rel_err(leaves, [&](Graph& g, const std::vector<int>& id) {
      ParamLeaves pl(g, ps, false);
      DetRng wr(64 + trial);
      const int w = g.constant(igs::testing::random_array(cfg.pose_dim, 1, wr));
      return sum_all(g, matmul(g, mlp3_forward(g, pl, "pose_enc", id[0]), w));
    });
    CHECK(err < 1e-4);
  }
}

TEST_CASE("geometry encoder: equivariance, duplicates, position gradient") {
  const FeatureConfig cfg = small_cfg();
  ParamStore ps = small_weights(cfg);
  DetRng rng(32);
  const Index n = 6;
  Array pos = random_array(n, 3, rng, 0.1);
  pos.row(3) = pos.row(1);  // exact duplicate point
  std::vector<std::vector<int>> hood{{0, 1}, {1, 0, 2}, {2, 1}, {3, 0, 2}, {4, 5}, {5, 4}};
  std::vector<std::vector<int>> hood_dup = hood;
  hood_dup[3] = hood[1];  // same neighborhood context as point 1

  auto run = [&](const Array& positions, const std::vector<std::vector<int>>& groups) {
    Graph g;
    ParamLeaves pl(g, ps, false);
    const int p = g.constant(positions);
    const int pe = g.constant(Array::Zero(1, cfg.pose_dim));
    return Array(g.val(encode_geometry(g, pl, cfg, p, groups, pe)));
  };

  const Array base = run(pos, hood_dup);
  // Identical position + identical neighborhood + same pose context -> identical rows.
  CHECK((base.row(1) == base.row(3)).all());

  // Permuting the points permutes the rows identically.
  const std::vector<int> perm{2, 0, 1, 5, 3, 4};
  Array pos_p(n, 3);
  std::vector<std::vector<int>> hood_p(n);
  std::vector<int> inv(n);
  for (Index i = 0; i < n; ++i) inv[perm[i]] = static_cast<int>(i);
  for (Index i = 0; i < n; ++i) {
    pos_p.row(i) = pos.row(perm[i]);
    for (int j : hood_dup[perm[i]]) hood_p[i].push_back(inv[j]);
  }
  const Array permuted = run(pos_p, hood_p);
  for (Index i = 0; i < n; ++i)
    CHECK((permuted.row(i) - base.row(perm[i])).abs().maxCoeff() < 1e-13);

  // Gradient w.r.t. input coordinates.
  std::vector<Array> leaves{pos};
  const double err = fd_check_max_rel_err(leaves, [&](Graph& g, const std::vector<int>& id) {
    ParamLeaves pl(g, ps, false);
    const int pe = g.constant(Array::Zero(1, cfg.pose_dim));
    return sum_all(g, square_op(g, encode_geometry(g, pl, cfg, id[0], hood, pe)));
  });
  CHECK(err < 1e-4);
}

TEST_CASE("texture decoder: zero net bias case, determinism, identity gradient") {
  const FeatureConfig cfg = small_cfg();
  ParamStore ps = small_weights(cfg);
  DetRng rng(33);
  const Index nv = 10;
  ArrayX2 uv(nv, 2);
  for (Index i = 0; i < nv; ++i) {
    uv(i, 0) = rng.uniform();
    uv(i, 1) = rng.uniform();
  }

  // Zero identity + zero final layer -> t equals the final bias everywhere.
  ParamStore zeroed = ps;
  zeroed.at("tex_dec/W3").setZero();
  Array b3 = random_array(1, cfg.identity_channels(), rng);
  zeroed.at("tex_dec/b3") = b3;
  {
    Graph g;
    ParamLeaves pl(g, zeroed, false);
    const int ident = g.constant(zero_identity_map(cfg));
    const int pe = g.constant(Array::Zero(1, cfg.pose_dim));
    const Array t = g.val(decode_texture(g, pl, cfg, ident, uv, pe));
    for (Index r = 0; r < t.rows(); ++r)
      CHECK((t.row(r) == b3.row(0)).all());
  }

  // Bitwise determinism across runs.
  auto run = [&]() {
    Graph g;
    ParamLeaves pl(g, ps, false);
    DetRng ir(9);
    const int ident = g.constant(random_array(cfg.map_texels(), cfg.identity_channels(), ir));
    const int pe = g.constant(Array::Constant(1, cfg.pose_dim, 0.1));
    return Array(g.val(decode_texture(g, pl, cfg, ident, uv, pe)));
  };
  CHECK((run() == run()).all());

  // d(texture)/d(identity texel) by finite differences.
  DetRng ir(9);
  std::vector<Array> leaves{random_array(cfg.map_texels(), cfg.identity_channels(), ir)};
  const double err = fd_check_max_rel_err(
      leaves,
      [&](Graph& g, const std::vector<int>& id) {
        ParamLeaves pl(g, ps, false);
        const int pe = g.constant(Array::Constant(1, cfg.pose_dim, 0.1));
        DetRng wr(77);
        const int w = g.constant(igs::testing::random_array(cfg.identity_channels(), 1, wr));
        return sum_all(g, matmul(g, decode_texture(g, pl, cfg, id[0], uv, pe), w));
      },
      1e-5, 1e-6);
  CHECK(err < 1e-4);
}

TEST_CASE("fusion: zero texture passthrough, commutativity, unit gradients") {
  DetRng rng(34);
  Array a = random_array(7, 4, rng), b = random_array(7, 4, rng);
  Graph g;
  const int na = g.leaf(a), nb = g.leaf(b), zero = g.constant(Array::Zero(7, 4));
  CHECK((g.val(fuse_features(g, na, zero)) == a).all());
  CHECK((g.val(fuse_features(g, na, nb)) == g.val(fuse_features(g, nb, na))).all());

  const int loss = sum_all(g, fuse_features(g, na, nb));
  g.backward(loss);
  CHECK((g.grad(na) == 1.0).all());
  CHECK((g.grad(nb) == 1.0).all());
}

TEST_CASE("attention: empty set no-op, singleton closed form, equivariance") {
  const FeatureConfig cfg = small_cfg();
  ParamStore ps = small_weights(cfg);
  DetRng rng(35);
  const Index n = 9;
  const Array f = random_array(n, cfg.channels, rng);

  // All labels 0: identical node, bitwise.
  {
    Graph g;
    ParamLeaves pl(g, ps, false);
    const int nf = g.constant(f);
    InteractionLabels labels;
    labels.flags.assign(n, 0);
    const int out = interaction_attention(g, pl, cfg, nf, labels);
    CHECK(out == nf);
  }

  // Exactly one flagged point: softmax over one element is 1, so the row
  // becomes its own value projection plus the residual.
  {
    Graph g;
    ParamLeaves pl(g, ps, false);
    const int nf = g.constant(f);
    InteractionLabels labels;
    labels.flags.assign(n, 0);
    labels.flags[4] = 1;
    const int out = interaction_attention(g, pl, cfg, nf, labels);
    const Eigen::RowVectorXd expect =
        f.row(4).matrix() * ps.at("attn/Wv").matrix() + f.row(4).matrix();
    CHECK((g.val(out).row(4).matrix() - expect).cwiseAbs().maxCoeff() < 1e-13);
    // Non-flagged rows pass through bitwise.
    for (Index i = 0; i < n; ++i)
      if (i != 4) CHECK((g.val(out).row(i) == f.row(i)).all());
  }

  // Permuting the flagged points permutes their outputs identically.
  {
    InteractionLabels labels;
    labels.flags.assign(n, 0);
    labels.flags[1] = labels.flags[3] = labels.flags[6] = 1;
    Graph g;
    ParamLeaves pl(g, ps, false);
    const int out = interaction_attention(g, pl, cfg, g.constant(f), labels);

    // Swap rows 1 and 6 in the input; the outputs must swap too.
    Array fp = f;
    fp.row(1) = f.row(6);
    fp.row(6) = f.row(1);
    Graph g2;
    ParamLeaves pl2(g2, ps, false);
    const int out2 = interaction_attention(g2, pl2, cfg, g2.constant(fp), labels);
    CHECK((g2.val(out2).row(1) - g.val(out).row(6)).abs().maxCoeff() < 1e-13);
    CHECK((g2.val(out2).row(6) - g.val(out).row(1)).abs().maxCoeff() < 1e-13);
    CHECK((g2.val(out2).row(3) - g.val(out).row(3)).abs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("attention gradients flow through flagged rows only") {
  const FeatureConfig cfg = small_cfg();
  ParamStore ps = small_weights(cfg);
  DetRng rng(36);
  std::vector<Array> leaves{random_array(5, cfg.channels, rng)};
  InteractionLabels labels;
  labels.flags = {1, 0, 1, 0, 1};
  const double err = fd_check_max_rel_err(leaves, [&](Graph& g, const std::vector<int>& id) {
    ParamLeaves pl(g, ps, false);
    return sum_all(g, square_op(g, interaction_attention(g, pl, cfg, id[0], labels)));
  });
  CHECK(err < 1e-5);
}

TEST_CASE("checkpoint container round-trips and rejects unknown versions") {
  const FeatureConfig cfg = small_cfg();
  ParamStore ps = small_weights(cfg);
  const std::string path = "/tmp/igs_ckpt_test.igsn";
  write_checkpoint(path, ps);
  const ParamStore back = read_checkpoint(path);
  CHECK(back.checksum() == ps.checksum());
  CHECK(back.names() == ps.names());

  // Corrupt the version field.
  std::ofstream f(path, std::ios::binary | std::ios::in | std::ios::out);
  f.seekp(4);
  const uint32_t bad = 77;
  f.write(reinterpret_cast<const char*>(&bad), 4);
  f.close();
  CHECK_THROWS(read_checkpoint(path));
}
