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

#include "igs/pipeline.hpp"

#include <chrono>
#include <fstream>
#include <iostream>

namespace igs {

namespace {

std::vector<std::vector<int>> vertex_one_rings(const HandMesh& mesh) {
  std::vector<std::vector<int>> rings(mesh.vertex_count());
  for (Index i = 0; i < mesh.vertex_count(); ++i) rings[i].push_back(static_cast<int>(i));
  for (const auto& f : mesh.faces)
    for (int e = 0; e < 3; ++e) {
      const int a = f[e], b = f[(e + 1) % 3];
      rings[a].push_back(b);
      rings[b].push_back(a);
    }
  for (auto& r : rings) {
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
  }
  return rings;
}

}  // namespace

AvatarModel::AvatarModel(ExperimentConfig cfg, const RigSpec& spec) : cfg_(std::move(cfg)) {
  cfg_.validate();
  build_canonical_rig(spec, rig_, base_);
  detect_ = upsample_mesh(base_, cfg_.detect_level);
  reset_label_parents(detect_);
  for (int level : {cfg_.coarse_level, cfg_.fine_level}) {
    if (render_.count(level)) continue;
    HandMesh m = upsample_mesh(detect_, level - cfg_.detect_level);
    rings_[level] = vertex_one_rings(m);
    render_[level] = std::move(m);
  }
}

const HandMesh& AvatarModel::render_mesh(int level) const {
  auto it = render_.find(level);
  require(it != render_.end(), "model: unprepared mesh level " + std::to_string(level));
  return it->second;
}

CloudLayout AvatarModel::base_layout(int level) const {
  const HandMesh& m = render_mesh(level);
  CloudLayout layout;
  layout.canonical_pos = m.vertices;
  layout.source_vertex.resize(m.vertex_count());
  for (Index i = 0; i < m.vertex_count(); ++i) layout.source_vertex[i] = static_cast<int>(i);
  return layout;
}

InteractionLabels AvatarModel::detect_labels(const PoseParams& pose) const {
  const HandMesh posed = pose_mesh(detect_, rig_, pose);
  return detect_interactions(detect_.vertices, posed.vertices, detect_.side, cfg_.detection(),
                             cfg_.threads);
}

ArrayX3 AvatarModel::pose_layout_points(const CloudLayout& layout, int level,
                                        const PoseParams& pose) const {
  const HandMesh& m = render_mesh(level);
  const std::vector<Mat4> G = skinning_transforms(rig_, pose);
  ArrayX3 out(layout.count(), 3);
  for (Index i = 0; i < layout.count(); ++i) {
    const int sv = layout.source_vertex[i];
    require(sv >= 0 && sv < m.vertex_count(), "layout: dangling source vertex");
    const Vec3 p = layout.canonical_pos.row(i).matrix().transpose();
    Vec3 acc = Vec3::Zero();
    for (int j = 0; j < static_cast<int>(G.size()); ++j) {
      const double w = m.weights(sv, j);
      if (w == 0.0) continue;
      acc += w * (G[j].topLeftCorner<3, 3>() * p + G[j].topRightCorner<3, 1>());
    }
    out.row(i) = acc.transpose().array();
  }
  return out;
}

AvatarModel::ForwardOut AvatarModel::forward(Graph& g, ParamLeaves& leaves, int identity_node,
                                             const ForwardSpec& spec) const {
  const FeatureConfig fc = cfg_.feature();
  const HandMesh& rm = render_mesh(spec.level);
  const CloudLayout base = spec.layout ? CloudLayout{} : base_layout(spec.level);
  const CloudLayout& layout = spec.layout ? *spec.layout : base;

  ForwardOut out;
  if (spec.labels) {
    require(spec.labels->count() == detect_mesh().vertex_count(),
            "forward: provided labels do not match the detection point set");
    out.mesh_labels = *spec.labels;
  } else {
    out.mesh_labels = detect_labels(spec.pose);
  }

  // Per-point payload from the layout's source vertices.
  const Index n = layout.count();
  out.uv.resize(n, 2);
  out.side.resize(n);
  out.parent_vertex.resize(n);
  for (Index i = 0; i < n; ++i) {
    const int sv = layout.source_vertex[i];
    out.uv.row(i) = rm.uv.row(sv);
    out.side[i] = rm.side[sv];
    out.parent_vertex[i] = rm.label_parent[sv];
  }
  // Cloud labels inherit from the detection-level parent vertex.
  out.cloud_labels.flags.resize(n);
  for (Index i = 0; i < n; ++i) {
    out.cloud_labels.flags[i] = out.mesh_labels.flags[out.parent_vertex[i]];
    if (out.cloud_labels.flags[i])
      (out.side[i] == kLeft ? out.cloud_labels.flagged_left
                            : out.cloud_labels.flagged_right) += 1;
  }

  // Pose embedding; the interaction summary is the per-hand flagged fraction
  // over the detection point set.
  int left_total = 0, right_total = 0;
  for (Index i = 0; i < detect_.vertex_count(); ++i)
    (detect_.side[i] == kLeft ? left_total : right_total) += 1;
  const Vec2 summary(
      left_total ? double(out.mesh_labels.flagged_left) / left_total : 0.0,
      right_total ? double(out.mesh_labels.flagged_right) / right_total : 0.0);
  out.pose_emb = encode_pose(g, leaves, fc, spec.pose.theta_flat(), spec.cam.flatten25(),
                             summary);

  // Geometry branch over the posed base positions.
  const ArrayX3 posed = pose_layout_points(layout, spec.level, spec.pose);
  const int positions = g.constant(posed);
  const auto& vertex_rings = rings_.at(spec.level);
  // Neighborhood of a point: every point whose source vertex lies in the
  // one-ring of its own source vertex.
  std::vector<std::vector<int>> point_groups(n);
  {
    std::vector<std::vector<int>> points_of_vertex(rm.vertex_count());
    for (Index i = 0; i < n; ++i)
      points_of_vertex[layout.source_vertex[i]].push_back(static_cast<int>(i));
    for (Index i = 0; i < n; ++i) {
      for (int v : vertex_rings[layout.source_vertex[i]])
        for (int p : points_of_vertex[v]) point_groups[i].push_back(p);
      if (point_groups[i].empty()) point_groups[i].push_back(static_cast<int>(i));
    }
  }
  const int geometric = encode_geometry(g, leaves, fc, positions, point_groups, out.pose_emb);

  // Texture branch: decode the map from the identity slice, optionally add
  // the shared one-shot bias to both halves, then sample per point.
  int texture = decode_texture(g, leaves, fc, identity_node, rm.uv, out.pose_emb);
  if (spec.delta_t >= 0) texture = add_tiled_cols(g, texture, spec.delta_t);
  const int textural = sample_texture_features(g, fc, texture, out.uv, out.side);

  int fused = fuse_features(g, geometric, textural);
  if (spec.attention) fused = interaction_attention(g, leaves, fc, fused, out.cloud_labels);

  out.attrs = predict_attributes(g, leaves, fc, fused, positions);

  const int image = render_node(g, out.attrs, spec.cam, cfg_.image_w, cfg_.image_h,
                                cfg_.background(), spec.threads);
  int rgb = slice_cols(g, image, 0, 3);
  if (spec.calib_log_gain >= 0) {
    rgb = mul_rowvec(g, rgb, exp_op(g, spec.calib_log_gain));
    rgb = add_rowvec(g, rgb, spec.calib_bias);
  }
  out.rgb = rgb;
  out.silhouette = slice_cols(g, image, 3, 1);
  return out;
}

GaussianCloud AvatarModel::extract_cloud(Graph& g, const ForwardOut& out) const {
  return igs::extract_cloud(g, out.attrs, out.uv, out.side, out.parent_vertex);
}

ParamStore init_weights(const AvatarModel& model, uint64_t seed) {
  ParamStore ps;
  init_feature_weights(ps, model.config().feature(), model.theta_dim(), seed);
  return ps;
}

StepStats stage1_step(const AvatarModel& model, const std::vector<TrainSample>& batch,
                      ParamStore& params, AdamState& state, const PerceptualBank& bank,
                      const Stage1Options& opt) {
  require(!batch.empty(), "stage1: empty batch");
  const ExperimentConfig& cfg = model.config();
  std::map<std::string, Array> grads;
  StepStats stats;

  for (const TrainSample& sample : batch) {
    const std::string identity_block = "identity/s" + std::to_string(sample.subject);
    require(params.has(identity_block), "stage1: unknown subject id " +
                                            std::to_string(sample.subject));
    Graph g;
    ParamLeaves leaves(g, params, true);
    AvatarModel::ForwardSpec spec;
    spec.pose = sample.pose;
    spec.cam = sample.cam;
    spec.level = opt.level;
    spec.attention = opt.attention;
    spec.threads = opt.threads;
    if (sample.labels.count() > 0) spec.labels = &sample.labels;
    if (opt.layouts && opt.layouts->count(sample.subject))
      spec.layout = &opt.layouts->at(sample.subject);
    const auto out = model.forward(g, leaves, leaves.id(identity_block), spec);

    require(sample.target.rows() == g.rows(out.rgb) && sample.target.cols() == 3,
            "stage1: target image shape mismatch");
    const int target = g.constant(sample.target);
    const int l1 = l1_loss_node(g, out.rgb, target);
    const int perc = perceptual_loss_node(g, out.rgb, target, bank, cfg.image_h, cfg.image_w);
    const int total =
        add(g, scale(g, l1, cfg.w_rgb), scale(g, perc, cfg.w_perceptual));
    g.backward(total);

    stats.l1 += g.val(l1)(0, 0);
    stats.perceptual += g.val(perc)(0, 0);
    stats.total += g.val(total)(0, 0);
    for (auto& [name, grad] : leaves.collect_gradients()) {
      auto it = grads.find(name);
      if (it == grads.end())
        grads.emplace(name, grad);
      else
        it->second += grad;
    }
  }

  const double inv = 1.0 / static_cast<double>(batch.size());
  for (auto& [name, grad] : grads) grad *= inv;
  stats.l1 *= inv;
  stats.perceptual *= inv;
  stats.total *= inv;
  stats.skipped_blocks = adam_apply(params, grads, state, opt.lr);
  for (const auto& name : stats.skipped_blocks)
    std::cerr << "stage1: skipped non-finite gradient for block " << name << "\n";
  return stats;
}

CloudLayout refine_layout(const AvatarModel& model, const ParamStore& params,
                          const std::string& identity_block, const CloudLayout& layout,
                          int level, int threads) {
  // Refinement runs at the canonical (rest) pose, where labels are all zero.
  Graph g;
  ParamLeaves leaves(g, params, false);
  AvatarModel::ForwardSpec spec;
  spec.pose = PoseParams::rest(model.rig());
  spec.cam = Camera::look_at(Vec3(0, -0.5, 0.1), Vec3(0, 0, 0.08), Vec3(0, 0, 1),
                             model.config().image_w, model.config().image_w,
                             model.config().image_h);
  spec.level = level;
  spec.layout = &layout;
  spec.threads = threads;
  const auto out = model.forward(g, leaves, leaves.id(identity_block), spec);
  const GaussianCloud cloud = model.extract_cloud(g, out);

  std::vector<Index> source;
  const GaussianCloud refined = refine(cloud, model.config().refinement(), &source);

  CloudLayout next;
  next.canonical_pos.resize(refined.count(), 3);
  next.source_vertex.resize(refined.count());
  for (Index k = 0; k < refined.count(); ++k) {
    const Index src = source[k];
    next.source_vertex[k] = layout.source_vertex[src];
    // Children keep their split displacement; survivors move by zero. The
    // per-frame predicted offset is not baked in.
    const Vec3 shift = (refined.means.row(k) - cloud.means.row(src)).matrix().transpose();
    next.canonical_pos.row(k) =
        (layout.canonical_pos.row(src).matrix().transpose() + shift).transpose().array();
  }
  return next;
}

FitResult fit_one_shot(const AvatarModel& model, const ParamStore& frozen, const FitInputs& in,
                       const PerceptualBank& bank, const LossWeights& lw) {
  const auto t0 = std::chrono::steady_clock::now();
  const ExperimentConfig& cfg = model.config();
  const FeatureConfig fc = cfg.feature();
  const uint64_t frozen_checksum = frozen.checksum();

  require(in.reference.rows() == static_cast<Index>(cfg.image_w) * cfg.image_h &&
              in.reference.cols() == 3,
          "fit: reference image shape mismatch");

  ParamStore fit_ps;
  fit_ps.add("fit/identity", zero_identity_map(fc));
  fit_ps.add("fit/delta_t", Array::Zero(fc.map_texels(), fc.channels));
  fit_ps.add("fit/log_gain", Array::Zero(1, 3));
  fit_ps.add("fit/bias", Array::Zero(1, 3));
  AdamState state;
  state.cfg = cfg.adam();

  const InteractionLabels frame_labels = model.detect_labels(in.pose);
  auto build_forward = [&](Graph& g, ParamLeaves& theta, ParamLeaves& fit) {
    AvatarModel::ForwardSpec spec;
    spec.pose = in.pose;
    spec.cam = in.cam;
    spec.level = in.level;
    spec.labels = &frame_labels;
    spec.attention = cfg.attention;
    spec.threads = in.threads;
    spec.delta_t = fit.id("fit/delta_t");
    spec.calib_log_gain = fit.id("fit/log_gain");
    spec.calib_bias = fit.id("fit/bias");
    return model.forward(g, theta, fit.id("fit/identity"), spec);
  };

  // Missing mask: fall back to the rendered silhouette of the initial cloud.
  Array mask_ref = in.mask;
  if (mask_ref.size() == 0) {
    std::cerr << "fit: no reference mask given; using the initial rendered silhouette\n";
    Graph g;
    ParamLeaves theta(g, frozen, false);
    ParamLeaves fit(g, fit_ps, false);
    const auto out = build_forward(g, theta, fit);
    mask_ref = g.val(out.silhouette);
  }
  require(mask_ref.rows() == in.reference.rows() && mask_ref.cols() == 1,
          "fit: mask shape mismatch");

  FitResult result;
  // Constant-rate Adam on an l1 objective settles into a bounded oscillation,
  // so the returned point is the tail average of the last quarter of steps
  // (Polyak-Ruppert averaging).
  const int avg_from = in.steps - std::max(1, in.steps / 4);
  ParamStore averaged = fit_ps;
  int averaged_count = 0;
  for (int step = 0; step < in.steps; ++step) {
    Graph g;
    ParamLeaves theta(g, frozen, false);  // frozen weights enter as constants
    ParamLeaves fit(g, fit_ps, true);
    const auto out = build_forward(g, theta, fit);

    const int ref = g.constant(in.reference);
    const int mref = g.constant(mask_ref);
    const int l1 = l1_loss_node(g, out.rgb, ref);
    const int perc = perceptual_loss_node(g, out.rgb, ref, bank, cfg.image_h, cfg.image_w);
    const int mloss = mse_loss_node(g, out.silhouette, mref);
    const int reg = sum_squares_node(g, fit.id("fit/delta_t"));
    int data = add(g, scale(g, l1, lw.rgb), scale(g, perc, lw.perceptual));
    data = add(g, data, scale(g, mloss, lw.mask));
    const int total = add(g, data, scale(g, reg, lw.reg));

    FitTraceRow row;
    row.step = step;
    row.l1 = g.val(l1)(0, 0);
    row.perceptual = g.val(perc)(0, 0);
    row.mask = g.val(mloss)(0, 0);
    row.reg = g.val(reg)(0, 0);
    row.total = g.val(total)(0, 0);
    result.trace.push_back(row);

    // Backward through the full objective; the quadratic bias penalty also
    // applies as its proximal operator afterwards, which stays contractive
    // for arbitrarily large lambda where a gradient step would not.
    g.backward(total);
    const auto skipped = adam_apply(fit_ps, fit.collect_gradients(), state, in.lr);
    for (const auto& name : skipped)
      std::cerr << "fit: skipped non-finite gradient for block " << name << "\n";
    fit_ps.at("fit/delta_t") /= (1.0 + 2.0 * in.lr * lw.reg);

    if (step >= avg_from) {
      if (averaged_count == 0)
        for (const auto& name : fit_ps.names()) averaged.at(name) = fit_ps.at(name);
      else
        for (const auto& name : fit_ps.names()) averaged.at(name) += fit_ps.at(name);
      ++averaged_count;
    }
  }
  if (averaged_count > 0)
    for (const auto& name : averaged.names())
      averaged.at(name) /= static_cast<double>(averaged_count);
  else
    averaged = fit_ps;

  result.identity = averaged.at("fit/identity");
  result.delta_t = averaged.at("fit/delta_t");
  result.gain = averaged.at("fit/log_gain").exp().row(0).matrix().transpose();
  result.bias = averaged.at("fit/bias").row(0).matrix().transpose();
  result.steps_run = in.steps;

  // Final rendering quality against the reference view.
  {
    Graph g;
    ParamLeaves theta(g, frozen, false);
    ParamLeaves fit(g, averaged, false);
    const auto out = build_forward(g, theta, fit);
    result.final_psnr = psnr(g.val(out.rgb), in.reference);
  }
  require(frozen.checksum() == frozen_checksum, "fit: frozen weights were modified");
  result.wall_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
  return result;
}

RenderedImage render_with(const AvatarModel& model, const ParamStore& params,
                          const Array& identity, const Array& delta_t, const Vec3& gain,
                          const Vec3& bias, const PoseParams& pose, const Camera& cam, int level,
                          bool attention, int threads) {
  const ExperimentConfig& cfg = model.config();
  Graph g;
  ParamLeaves leaves(g, params, false);
  AvatarModel::ForwardSpec spec;
  spec.pose = pose;
  spec.cam = cam;
  spec.level = level;
  spec.attention = attention;
  spec.threads = threads;
  const Array ident = identity.size() ? identity : zero_identity_map(cfg.feature());
  if (delta_t.size()) spec.delta_t = g.constant(delta_t);
  Array lg(1, 3), bs(1, 3);
  for (int k = 0; k < 3; ++k) {
    lg(0, k) = std::log(gain(k));
    bs(0, k) = bias(k);
  }
  spec.calib_log_gain = g.constant(lg);
  spec.calib_bias = g.constant(bs);
  const auto out = model.forward(g, leaves, g.constant(ident), spec);

  RenderedImage img;
  img.width = cfg.image_w;
  img.height = cfg.image_h;
  img.rgb = g.val(out.rgb);
  img.silhouette = g.val(out.silhouette).col(0);
  return img;
}

void write_fit_trace_csv(const std::string& path, const std::vector<FitTraceRow>& trace) {
  std::ofstream f(path);
  require(f.good(), "trace: cannot open " + path);
  f.precision(17);
  f << "step,l1,perceptual,mask,reg,total\n";
  for (const auto& r : trace)
    f << r.step << "," << r.l1 << "," << r.perceptual << "," << r.mask << "," << r.reg << ","
      << r.total << "\n";
}

}  // namespace igs
