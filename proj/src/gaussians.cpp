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

#include "igs/gaussians.hpp"

#include <fstream>
#include <numeric>

#include "igs/rig.hpp"

namespace igs {

SplatArrays<double> GaussianCloud::splats() const {
  SplatArrays<double> s;
  s.means = means;
  s.log_scales = log_scales;
  s.quats = quats;
  s.opacities = opacities;
  s.colors = colors;
  return s;
}

void GaussianCloud::validate() const {
  require(count() >= 1, "cloud: must hold at least one point");
  const Index n = count();
  require(log_scales.rows() == n && quats.rows() == n && opacities.rows() == n &&
              colors.rows() == n && validity.rows() == n && uv.rows() == n &&
              static_cast<Index>(side.size()) == n && static_cast<Index>(parent_vertex.size()) == n,
          "cloud: ragged attribute arrays");
  for (Index i = 0; i < n; ++i) {
    require(std::abs(quats.row(i).matrix().norm() - 1.0) < 1e-9, "cloud: non-unit quaternion");
    require(opacities(i) > 0.0 && opacities(i) < 1.0, "cloud: opacity out of range");
    require(validity(i) >= 0.0 && validity(i) <= 1.0, "cloud: validity out of range");
  }
  require(colors.minCoeff() >= 0.0 && colors.maxCoeff() <= 1.0, "cloud: color out of range");
}

AttributeNodes predict_attributes(Graph& g, ParamLeaves& leaves, const FeatureConfig& cfg,
                                  int features, int base_positions_node) {
  require(g.cols(features) == cfg.channels, "predict_attributes: feature width mismatch");
  require(g.rows(features) == g.rows(base_positions_node),
          "predict_attributes: features and base positions misaligned");
  const int h = tanh_op(g, linear_forward(g, leaves, "heads/shared", features));

  AttributeNodes out;
  const int offset = soft_clamp_rows(g, linear_forward(g, leaves, "heads/offset", h),
                                     cfg.offset_clamp);
  out.means = add(g, base_positions_node, offset);
  out.log_scales = add(g, linear_forward(g, leaves, "heads/scale", h),
                       g.constant(Array::Constant(g.rows(h), 3, cfg.base_log_scale)));
  // Raw quaternion = (1,0,0,0) + head output, normalized.
  Array q0 = Array::Zero(g.rows(h), 4);
  q0.col(0) = 1.0;
  out.quats = normalize_rows(g, add(g, g.constant(std::move(q0)),
                                    linear_forward(g, leaves, "heads/quat", h)));
  out.opacities = sigmoid_op(g, linear_forward(g, leaves, "heads/opacity", h));
  out.colors = sigmoid_op(g, linear_forward(g, leaves, "heads/color", h));
  out.validity = sigmoid_op(g, linear_forward(g, leaves, "heads/validity", h));
  return out;
}

GaussianCloud extract_cloud(Graph& g, const AttributeNodes& nodes, const ArrayX2& uv,
                            const std::vector<int>& side, const std::vector<int>& parent_vertex) {
  GaussianCloud c;
  c.means = g.val(nodes.means);
  c.log_scales = g.val(nodes.log_scales);
  c.quats = g.val(nodes.quats);
  c.opacities = g.val(nodes.opacities).col(0);
  c.colors = g.val(nodes.colors);
  c.validity = g.val(nodes.validity).col(0);
  c.uv = uv;
  c.side = side;
  c.parent_vertex = parent_vertex;
  return c;
}

GaussianCloud refine(const GaussianCloud& cloud, const RefinementConfig& cfg,
                     std::vector<Index>* source_of) {
  cfg.validate();
  const Index n = cloud.count();

  std::vector<Index> split_ids;
  std::vector<char> keep(n, 1);
  for (Index i = 0; i < n; ++i) {
    if (cloud.validity(i) < cfg.prune_threshold) keep[i] = 0;
    if (cloud.validity(i) > cfg.split_threshold) split_ids.push_back(i);
  }
  // Cap splits: highest validity first, ties by ascending index. The cap
  // rounds up so a qualifying point in a small cloud still splits.
  const Index max_splits =
      static_cast<Index>(std::ceil(cfg.max_split_fraction * static_cast<double>(n)));
  if (static_cast<Index>(split_ids.size()) > max_splits) {
    std::stable_sort(split_ids.begin(), split_ids.end(), [&](Index a, Index b) {
      if (cloud.validity(a) != cloud.validity(b)) return cloud.validity(a) > cloud.validity(b);
      return a < b;
    });
    split_ids.resize(max_splits);
    std::sort(split_ids.begin(), split_ids.end());
  }
  std::vector<char> split_mark(n, 0);
  for (Index i : split_ids) split_mark[i] = 1;

  std::vector<Index> survivors;
  for (Index i = 0; i < n; ++i)
    if (keep[i] && !split_mark[i]) survivors.push_back(i);

  if (survivors.empty() && split_ids.empty()) {
    // Pruning would empty the cloud: keep the single highest-validity point.
    Index best = 0;
    for (Index i = 1; i < n; ++i)
      if (cloud.validity(i) > cloud.validity(best)) best = i;
    survivors.push_back(best);
  }

  const Index out_n = static_cast<Index>(survivors.size()) + 2 * static_cast<Index>(split_ids.size());
  GaussianCloud out;
  out.means.resize(out_n, 3);
  out.log_scales.resize(out_n, 3);
  out.quats.resize(out_n, 4);
  out.opacities.resize(out_n);
  out.colors.resize(out_n, 3);
  out.validity.resize(out_n);
  out.uv.resize(out_n, 2);
  out.side.resize(out_n);
  out.parent_vertex.resize(out_n);

  auto copy_point = [&](Index dst, Index src) {
    out.means.row(dst) = cloud.means.row(src);
    out.log_scales.row(dst) = cloud.log_scales.row(src);
    out.quats.row(dst) = cloud.quats.row(src);
    out.opacities(dst) = cloud.opacities(src);
    out.colors.row(dst) = cloud.colors.row(src);
    out.validity(dst) = cloud.validity(src);
    out.uv.row(dst) = cloud.uv.row(src);
    out.side[dst] = cloud.side[src];
    out.parent_vertex[dst] = cloud.parent_vertex[src];
  };

  if (source_of) source_of->assign(static_cast<size_t>(out_n), -1);
  Index w = 0;
  for (Index i : survivors) {
    if (source_of) (*source_of)[w] = i;
    copy_point(w++, i);
  }
  for (Index i : split_ids) {
    // Split along the largest-scale principal axis; children sit at
    // mean +- axis * scale/2, that axis' scale shrinks by 1.6.
    int k = 0;
    for (int a = 1; a < 3; ++a)
      if (cloud.log_scales(i, a) > cloud.log_scales(i, k)) k = a;
    const Eigen::Matrix<double, 4, 1> q = cloud.quats.row(i).matrix().transpose();
    const Mat3 rot = detail::quat_to_rot<double>(q);
    const Vec3 axis = rot.col(k);
    const double s = std::exp(cloud.log_scales(i, k));
    for (int child = 0; child < 2; ++child) {
      const Index dst = w++;
      if (source_of) (*source_of)[dst] = i;
      copy_point(dst, i);
      const double sign = (child == 0) ? 1.0 : -1.0;
      out.means.row(dst) =
          (cloud.means.row(i).matrix().transpose() + sign * 0.5 * s * axis).transpose().array();
      out.log_scales(dst, k) = cloud.log_scales(i, k) - std::log(1.6);
      out.validity(dst) = 0.5;  // fresh children do not immediately re-split
    }
  }
  return out;
}

InteractionLabels inherit_labels(const GaussianCloud& cloud, const InteractionLabels& parent) {
  InteractionLabels out;
  out.flags.resize(cloud.count());
  for (Index i = 0; i < cloud.count(); ++i) {
    const int p = cloud.parent_vertex[i];
    require(p >= 0 && p < parent.count(), "inherit_labels: dangling parent vertex id");
    out.flags[i] = parent.flags[p];
    if (out.flags[i]) (cloud.side[i] == kLeft ? out.flagged_left : out.flagged_right) += 1;
  }
  return out;
}

namespace {
constexpr uint32_t kCloudVersion = 1;
}

void write_cloud(const std::string& path, const GaussianCloud& cloud) {
  std::ofstream f(path, std::ios::binary);
  require(f.good(), "cloud: cannot open " + path);
  f.write("GCLD", 4);
  const uint32_t version = kCloudVersion;
  f.write(reinterpret_cast<const char*>(&version), 4);
  const uint32_t count = static_cast<uint32_t>(cloud.count());
  f.write(reinterpret_cast<const char*>(&count), 4);
  for (Index i = 0; i < cloud.count(); ++i) {
    float rec[19];
    int k = 0;
    for (int a = 0; a < 3; ++a) rec[k++] = static_cast<float>(cloud.means(i, a));
    for (int a = 0; a < 3; ++a) rec[k++] = static_cast<float>(cloud.log_scales(i, a));
    for (int a = 0; a < 4; ++a) rec[k++] = static_cast<float>(cloud.quats(i, a));
    rec[k++] = static_cast<float>(cloud.opacities(i));
    for (int a = 0; a < 3; ++a) rec[k++] = static_cast<float>(cloud.colors(i, a));
    rec[k++] = static_cast<float>(cloud.validity(i));
    rec[k++] = static_cast<float>(cloud.uv(i, 0));
    rec[k++] = static_cast<float>(cloud.uv(i, 1));
    rec[k++] = static_cast<float>(cloud.side[i]);
    rec[k++] = static_cast<float>(cloud.parent_vertex[i]);
    f.write(reinterpret_cast<const char*>(rec), sizeof(rec));
  }
  require(f.good(), "cloud: write failed for " + path);
}

GaussianCloud read_cloud(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  require(f.good(), "cloud: cannot open " + path);
  char magic[4];
  f.read(magic, 4);
  require(f.good() && std::string(magic, 4) == "GCLD", "cloud: bad magic in " + path);
  uint32_t version = 0, count = 0;
  f.read(reinterpret_cast<char*>(&version), 4);
  require(version == kCloudVersion, "cloud: unknown format version " + std::to_string(version));
  f.read(reinterpret_cast<char*>(&count), 4);
  GaussianCloud c;
  c.means.resize(count, 3);
  c.log_scales.resize(count, 3);
  c.quats.resize(count, 4);
  c.opacities.resize(count);
  c.colors.resize(count, 3);
  c.validity.resize(count);
  c.uv.resize(count, 2);
  c.side.resize(count);
  c.parent_vertex.resize(count);
  for (uint32_t i = 0; i < count; ++i) {
    float rec[19];
    f.read(reinterpret_cast<char*>(rec), sizeof(rec));
    require(f.good(), "cloud: truncated file " + path);
    int k = 0;
    for (int a = 0; a < 3; ++a) c.means(i, a) = rec[k++];
    for (int a = 0; a < 3; ++a) c.log_scales(i, a) = rec[k++];
    for (int a = 0; a < 4; ++a) c.quats(i, a) = rec[k++];
    c.opacities(i) = rec[k++];
    for (int a = 0; a < 3; ++a) c.colors(i, a) = rec[k++];
    c.validity(i) = rec[k++];
    c.uv(i, 0) = rec[k++];
    c.uv(i, 1) = rec[k++];
    c.side[i] = static_cast<int>(rec[k++]);
    c.parent_vertex[i] = static_cast<int>(rec[k++]);
    // f32 storage: renormalize the quaternion to restore the unit invariant.
    const double n = c.quats.row(i).matrix().norm();
    require(n > 1e-6, "cloud: degenerate quaternion in " + path);
    c.quats.row(i) /= n;
  }
  return c;
}

}  // namespace igs
