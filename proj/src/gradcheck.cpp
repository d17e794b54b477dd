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

#include "igs/gradcheck.hpp"

#include <chrono>

#include "igs/pipeline.hpp"
#include "igs/synth.hpp"

namespace igs {

namespace {

constexpr double kStep = 1e-5;

double rel_err(double a, double b, double floor = 1e-6) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

Array randn(Index rows, Index cols, DetRng& rng, double scale = 1.0) {
  Array a(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) a(i, j) = scale * rng.normal();
  return a;
}

Camera probe_camera(int w, int h) {
  Camera cam;
  cam.intrinsics = Mat3::Identity();
  cam.intrinsics(0, 0) = cam.intrinsics(1, 1) = w;
  cam.intrinsics(0, 2) = 0.5 * w;
  cam.intrinsics(1, 2) = 0.5 * h;
  return cam;
}

SplatArrays<double> random_scene(Index n, DetRng& rng) {
  SplatArrays<double> s;
  s.means.resize(n, 3);
  s.log_scales.resize(n, 3);
  s.quats.resize(n, 4);
  s.opacities.resize(n);
  s.colors.resize(n, 3);
  for (Index i = 0; i < n; ++i) {
    s.means.row(i) << 0.2 * rng.normal(), 0.2 * rng.normal(), 1.0 + 0.25 * rng.uniform();
    for (int a = 0; a < 3; ++a) s.log_scales(i, a) = std::log(0.02) + 0.4 * rng.normal();
    Eigen::Vector4d q(1.0 + rng.normal(), 0.4 * rng.normal(), 0.4 * rng.normal(),
                      0.4 * rng.normal());
    s.quats.row(i) = (q / q.norm()).transpose().array();
    s.opacities(i) = 0.2 + 0.6 * rng.uniform();
    for (int a = 0; a < 3; ++a) s.colors(i, a) = rng.uniform();
  }
  return s;
}

GradCheckReport::Entry check_render(uint64_t seed, int scenes) {
  GradCheckReport::Entry entry{"render_backward", 0, 0.0, 1e-4};
  DetRng rng(seed);
  const int w = 32, h = 32;
  const Camera cam = probe_camera(w, h);
  for (int sc = 0; sc < scenes; ++sc) {
    const Index n = 8 + rng.uniform_int(0, 42);  // <= 50 gaussians
    SplatArrays<double> s = random_scene(n, rng);
    RenderParams<double> rp;
    rp.width = w;
    rp.height = h;
    rp.background << rng.uniform(), rng.uniform(), rng.uniform();
    const Array w_rgb = randn(w * h, 3, rng);
    const Array w_sil = randn(w * h, 1, rng);
    auto loss = [&]() {
      const auto img = render<double>(s, cam, rp);
      return (img.rgb * w_rgb).sum() + (img.silhouette * w_sil.col(0)).sum();
    };
    const auto grads = render_backward<double>(s, cam, rp, w_rgb, w_sil);
    auto probe = [&](double& slot, double analytic) {
      const double orig = slot;
      slot = orig + kStep;
      const double up = loss();
      slot = orig - kStep;
      const double dn = loss();
      slot = orig;
      entry.max_rel_err =
          std::max(entry.max_rel_err, rel_err(analytic, (up - dn) / (2 * kStep), 1e-5));
      ++entry.checks;
    };
    // Every attribute of a rotating subset of gaussians.
    for (Index i = sc % 3; i < n; i += 3) {
      for (int a = 0; a < 3; ++a) probe(s.means(i, a), grads.means(i, a));
      for (int a = 0; a < 3; ++a) probe(s.log_scales(i, a), grads.log_scales(i, a));
      for (int a = 0; a < 4; ++a) probe(s.quats(i, a), grads.quats(i, a));
      probe(s.opacities(i), grads.opacities(i));
      for (int a = 0; a < 3; ++a) probe(s.colors(i, a), grads.colors(i, a));
    }
  }
  return entry;
}

// Shared FD driver over explicit leaf arrays.
double fd_over_leaves(std::vector<Array>& leaves,
                      const std::function<int(Graph&, const std::vector<int>&)>& build,
                      int samples_per_leaf, DetRng& rng, int* checks) {
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
  double worst = 0.0;
  for (size_t l = 0; l < leaves.size(); ++l) {
    const Index total = leaves[l].size();
    const Index probes = samples_per_leaf > 0 ? std::min<Index>(samples_per_leaf, total) : total;
    for (Index p = 0; p < probes; ++p) {
      const Index flat = samples_per_leaf > 0
                             ? static_cast<Index>(rng.uniform_int(0, static_cast<int>(total - 1)))
                             : p;
      const Index i = flat % leaves[l].rows();
      const Index j = flat / leaves[l].rows();
      const double orig = leaves[l](i, j);
      leaves[l](i, j) = orig + kStep;
      const double up = eval();
      leaves[l](i, j) = orig - kStep;
      const double dn = eval();
      leaves[l](i, j) = orig;
      worst = std::max(worst, rel_err(analytic[l](i, j), (up - dn) / (2 * kStep)));
      if (checks) ++(*checks);
    }
  }
  return worst;
}

GradCheckReport::Entry check_losses(uint64_t seed) {
  GradCheckReport::Entry entry{"losses", 0, 0.0, 1e-4};
  DetRng rng(seed);
  const int h = 16, w = 16;
  const PerceptualBank bank = PerceptualBank::make(2024);
  for (int trial = 0; trial < 3; ++trial) {
    Array other = 0.5 + 0.2 * randn(h * w, 3, rng);
    std::vector<Array> leaves{0.5 + 0.2 * randn(h * w, 3, rng)};
    DetRng probe_rng = rng.fork(trial);
    entry.max_rel_err = std::max(
        entry.max_rel_err,
        fd_over_leaves(
            leaves,
            [&](Graph& g, const std::vector<int>& id) {
              const int tgt = g.constant(other);
              int total = scale(g, l1_loss_node(g, id[0], tgt), 10.0);
              total = add(g, total,
                          scale(g, perceptual_loss_node(g, id[0], tgt, bank, h, w), 0.1));
              return add(g, total, scale(g, mse_loss_node(g, id[0], tgt), 1.0));
            },
            24, probe_rng, &entry.checks));
  }
  return entry;
}

GradCheckReport::Entry check_encoders(uint64_t seed) {
  GradCheckReport::Entry entry{"encoders", 0, 0.0, 1e-4};
  FeatureConfig fc;
  fc.channels = 8;
  fc.pose_dim = 12;
  fc.gamma_bands = 3;
  fc.map_h = fc.map_w = 8;
  fc.hidden = 16;
  fc.tex_hidden = 16;
  fc.head_hidden = 8;
  ParamStore ps;
  init_feature_weights(ps, fc, 12, seed);
  DetRng rng(seed ^ 0xabc);

  // Pose encoder Jacobian w.r.t. its inputs.
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<Array> leaves{randn(1, 39, rng, 0.5)};
    DetRng probe_rng = rng.fork(trial);
    entry.max_rel_err = std::max(
        entry.max_rel_err, fd_over_leaves(
                               leaves,
                               [&](Graph& g, const std::vector<int>& id) {
                                 ParamLeaves pl(g, ps, false);
                                 DetRng wr(7 + trial);
                                 const int w = g.constant(randn(fc.pose_dim, 1, wr));
                                 return sum_all(
                                     g, matmul(g, mlp3_forward(g, pl, "pose_enc", id[0]), w));
                               },
                               0, probe_rng, &entry.checks));
  }

  // Geometry encoder w.r.t. point positions.
  std::vector<std::vector<int>> hood{{0, 1}, {1, 0, 2}, {2, 1, 3}, {3, 2}, {4, 5}, {5, 4}};
  std::vector<Array> leaves{randn(6, 3, rng, 0.1)};
  DetRng probe_rng = rng.fork(99);
  entry.max_rel_err = std::max(
      entry.max_rel_err,
      fd_over_leaves(
          leaves,
          [&](Graph& g, const std::vector<int>& id) {
            ParamLeaves pl(g, ps, false);
            const int pe = g.constant(Array::Constant(1, fc.pose_dim, 0.2));
            return sum_all(g, square_op(g, encode_geometry(g, pl, fc, id[0], hood, pe)));
          },
          0, probe_rng, &entry.checks));
  return entry;
}

GradCheckReport::Entry check_sampling(uint64_t seed) {
  GradCheckReport::Entry entry{"texture_sampling", 0, 0.0, 1e-4};
  DetRng rng(seed ^ 0x51);
  const int h = 8, w = 8;
  ArrayX2 uv(12, 2);
  for (Index i = 0; i < uv.rows(); ++i) {
    uv(i, 0) = rng.uniform();
    uv(i, 1) = rng.uniform();
  }
  std::vector<Array> leaves{randn(h * w, 6, rng)};
  DetRng probe_rng = rng.fork(1);
  entry.max_rel_err = fd_over_leaves(
      leaves,
      [&](Graph& g, const std::vector<int>& id) {
        const int sampled = bilinear_sample(g, id[0], uv, h, w);
        const int scattered = scatter_to_texels(g, sampled, uv, h, w);
        return sum_all(g, square_op(g, scattered));
      },
      0, probe_rng, &entry.checks);
  return entry;
}

GradCheckReport::Entry check_pipeline(uint64_t seed) {
  GradCheckReport::Entry entry{"pipeline_to_identity", 0, 0.0, 1e-3};
  ExperimentConfig cfg;
  cfg.channels = 8;
  cfg.pose_dim = 12;
  cfg.gamma_bands = 2;
  cfg.map_h = cfg.map_w = 8;
  cfg.hidden = 16;
  cfg.tex_hidden = 16;
  cfg.head_hidden = 8;
  cfg.image_w = cfg.image_h = 16;
  cfg.detect_level = 0;
  cfg.coarse_level = 0;
  cfg.fine_level = 0;
  cfg.n_canonical = 8;
  cfg.n_posed = 8;
  cfg.threshold = 7;
  cfg.threads = 1;
  AvatarModel model(cfg, parse_rig_spec(tiny_rig_spec_text()));
  ParamStore ps = init_weights(model, seed ^ 0x77);
  const PerceptualBank bank = PerceptualBank::make(cfg.perceptual_seed);

  PoseParams pose = PoseParams::rest(model.rig());
  pose.theta[kLeft](3) = 0.3;
  pose.root_trans[kRight] = Vec3(-0.28, 0.012, 0.0);
  const Camera cam = Camera::look_at(Vec3(-0.13, -0.30, 0.10), Vec3(-0.13, 0, 0.04),
                                     Vec3(0, 0, 1), 1.4 * cfg.image_w, cfg.image_w, cfg.image_h);
  DetRng rng(seed ^ 0x99);
  Array target = (0.4 + 0.1 * randn(cfg.image_w * cfg.image_h, 3, rng)).min(1.0).max(0.0);

  std::vector<Array> leaves{
      randn(cfg.feature().map_texels(), cfg.feature().identity_channels(), rng, 0.3)};
  DetRng probe_rng = rng.fork(5);
  entry.max_rel_err = fd_over_leaves(
      leaves,
      [&](Graph& g, const std::vector<int>& id) {
        ParamLeaves pl(g, ps, false);
        AvatarModel::ForwardSpec spec;
        spec.pose = pose;
        spec.cam = cam;
        spec.level = 0;
        const auto out = model.forward(g, pl, id[0], spec);
        const int tgt = g.constant(target);
        const int l1 = l1_loss_node(g, out.rgb, tgt);
        const int perc = perceptual_loss_node(g, out.rgb, tgt, bank, cfg.image_h, cfg.image_w);
        return add(g, scale(g, l1, cfg.w_rgb), scale(g, perc, cfg.w_perceptual));
      },
      32, probe_rng, &entry.checks);
  return entry;
}

}  // namespace

GradCheckReport run_gradient_checks(uint64_t seed, int scenes) {
  const auto t0 = std::chrono::steady_clock::now();
  GradCheckReport report;
  report.entries.push_back(check_render(seed, scenes));
  report.entries.push_back(check_losses(seed + 1));
  report.entries.push_back(check_encoders(seed + 2));
  report.entries.push_back(check_sampling(seed + 3));
  report.entries.push_back(check_pipeline(seed + 4));
  report.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

}  // namespace igs
