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

#include <algorithm>
#include <cmath>
#include <vector>

#include "igs/camera.hpp"
#include "igs/util.hpp"

namespace igs {

/// Splat attribute arrays, templated on scalar so the same code runs in
/// double for gradient checks and float for benchmarks.
template <typename T>
struct SplatArrays {
  using A3 = Eigen::Array<T, Eigen::Dynamic, 3>;
  using A4 = Eigen::Array<T, Eigen::Dynamic, 4>;
  using A1 = Eigen::Array<T, Eigen::Dynamic, 1>;
  A3 means;       // world, meters
  A3 log_scales;
  A4 quats;       // (w,x,y,z); normalized internally
  A1 opacities;   // in (0,1)
  A3 colors;      // in [0,1]

  Index count() const { return means.rows(); }
};

template <typename T>
struct RenderParams {
  int width = 0, height = 0;
  Eigen::Matrix<T, 3, 1> background = Eigen::Matrix<T, 3, 1>::Zero();
  int threads = 1;
  static constexpr int kTile = 16;
  static constexpr T kNear = T(0.01);       // meters
  static constexpr T kLowpass = T(0.3);     // px^2 isotropic
  static constexpr T kAlphaClamp = T(0.99);
  static constexpr T kEarlyExit = T(1e-4);  // transmittance floor
};

template <typename T>
struct RenderedImageT {
  Eigen::Array<T, Eigen::Dynamic, 3> rgb;          // (H*W) x 3, row = y*W + x
  Eigen::Array<T, Eigen::Dynamic, 1> silhouette;   // accumulated alpha
  Eigen::ArrayXi contributors;                     // per-pixel count
  int width = 0, height = 0;
  int culled = 0;
};

using RenderedImage = RenderedImageT<double>;

template <typename T>
struct RenderGradientsT {
  Eigen::Array<T, Eigen::Dynamic, 3> means;
  Eigen::Array<T, Eigen::Dynamic, 3> log_scales;
  Eigen::Array<T, Eigen::Dynamic, 4> quats;
  Eigen::Array<T, Eigen::Dynamic, 1> opacities;
  Eigen::Array<T, Eigen::Dynamic, 3> colors;
};

using RenderGradients = RenderGradientsT<double>;

/// Screen-space footprint of one Gaussian after EWA projection.
template <typename T>
struct ProjectedGaussian {
  bool visible = false;
  Eigen::Matrix<T, 2, 1> mean2d;
  Eigen::Matrix<T, 2, 2> cov2d;      // includes the low-pass term
  Eigen::Matrix<T, 2, 2> inv_cov2d;
  T depth = T(0);
  T radius = T(0);                   // 3 sigma of the major axis, px
  // cached for the adjoint
  Eigen::Matrix<T, 3, 1> p_cam;
  Eigen::Matrix<T, 2, 3> jac;        // perspective Jacobian at p_cam
  Eigen::Matrix<T, 3, 3> rot;        // R(q_hat)
  Eigen::Matrix<T, 3, 1> exp2ls;     // exp(2 * log_scale)
};

namespace detail {

template <typename T>
Eigen::Matrix<T, 3, 3> quat_to_rot(const Eigen::Matrix<T, 4, 1>& q) {
  const T w = q(0), x = q(1), y = q(2), z = q(3);
  Eigen::Matrix<T, 3, 3> r;
  r << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
      2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
      2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
  return r;
}

}  // namespace detail

/// EWA projection: Sigma2D = J W Sigma3D W^T J^T + lowpass. Points behind
/// the near plane are culled (visible = false), not errors.
template <typename T>
ProjectedGaussian<T> project_gaussian(const Eigen::Matrix<T, 3, 1>& mean,
                                      const Eigen::Matrix<T, 3, 1>& log_scale,
                                      const Eigen::Matrix<T, 4, 1>& quat,
                                      const Eigen::Matrix<T, 3, 3>& intr,
                                      const Eigen::Matrix<T, 3, 3>& rot_wc,
                                      const Eigen::Matrix<T, 3, 1>& t_wc) {
  ProjectedGaussian<T> out;
  out.p_cam = rot_wc * mean + t_wc;
  const T z = out.p_cam(2);
  if (!(z > RenderParams<T>::kNear)) return out;
  const T fx = intr(0, 0), fy = intr(1, 1), cx = intr(0, 2), cy = intr(1, 2);
  const T x = out.p_cam(0), y = out.p_cam(1);
  out.depth = z;
  out.mean2d << fx * x / z + cx, fy * y / z + cy;
  out.jac << fx / z, T(0), -fx * x / (z * z), T(0), fy / z, -fy * y / (z * z);

  Eigen::Matrix<T, 4, 1> q = quat;
  const T qn = q.norm();
  if (qn < T(1e-12)) return out;  // degenerate rotation, cull
  q /= qn;
  out.rot = detail::quat_to_rot(q);
  out.exp2ls = (T(2) * log_scale.array()).exp().matrix();
  const Eigen::Matrix<T, 3, 3> cov3d =
      out.rot * out.exp2ls.asDiagonal() * out.rot.transpose();
  const Eigen::Matrix<T, 2, 3> t2 = out.jac * rot_wc;
  out.cov2d = t2 * cov3d * t2.transpose();
  out.cov2d(0, 0) += RenderParams<T>::kLowpass;
  out.cov2d(1, 1) += RenderParams<T>::kLowpass;
  const T det = out.cov2d(0, 0) * out.cov2d(1, 1) - out.cov2d(0, 1) * out.cov2d(1, 0);
  if (!(det > T(0))) return out;
  out.inv_cov2d << out.cov2d(1, 1) / det, -out.cov2d(0, 1) / det, -out.cov2d(1, 0) / det,
      out.cov2d(0, 0) / det;
  const T mid = T(0.5) * (out.cov2d(0, 0) + out.cov2d(1, 1));
  const T disc = std::sqrt(std::max(T(0), mid * mid - det));
  out.radius = T(3) * std::sqrt(std::max(T(1e-12), mid + disc));
  out.visible = true;
  return out;
}

namespace detail {

template <typename T>
std::vector<ProjectedGaussian<T>> project_all(const SplatArrays<T>& splats, const Camera& cam,
                                              int* culled) {
  const Eigen::Matrix<T, 3, 3> intr = cam.intrinsics.cast<T>();
  const Eigen::Matrix<T, 3, 3> rot_wc = cam.extrinsics.topLeftCorner<3, 3>().cast<T>();
  const Eigen::Matrix<T, 3, 1> t_wc = cam.extrinsics.topRightCorner<3, 1>().cast<T>();
  std::vector<ProjectedGaussian<T>> out(splats.count());
  int cull_count = 0;
  for (Index i = 0; i < splats.count(); ++i) {
    out[i] = project_gaussian<T>(splats.means.row(i).matrix().transpose(),
                                 splats.log_scales.row(i).matrix().transpose(),
                                 splats.quats.row(i).matrix().transpose(), intr, rot_wc, t_wc);
    if (!out[i].visible) ++cull_count;
  }
  if (culled) *culled = cull_count;
  return out;
}

/// Pixel-local contributor test shared by the tiled and the naive paths.
template <typename T>
inline bool touches_pixel(const ProjectedGaussian<T>& p, T px, T py) {
  return std::abs(px - p.mean2d(0)) <= p.radius && std::abs(py - p.mean2d(1)) <= p.radius;
}

/// One compositing step. Returns false once the ray is saturated.
template <typename T>
struct PixelState {
  T rgb[3] = {T(0), T(0), T(0)};
  T transmittance = T(1);
  int count = 0;
};

template <typename T>
inline bool composite_step(PixelState<T>& st, const ProjectedGaussian<T>& p, T opacity,
                           const T color[3], T px, T py) {
  const T dx = px - p.mean2d(0);
  const T dy = py - p.mean2d(1);
  const T power = T(-0.5) * (dx * (p.inv_cov2d(0, 0) * dx + p.inv_cov2d(0, 1) * dy) +
                             dy * (p.inv_cov2d(1, 0) * dx + p.inv_cov2d(1, 1) * dy));
  T alpha = opacity * std::exp(power);
  if (alpha > RenderParams<T>::kAlphaClamp) alpha = RenderParams<T>::kAlphaClamp;
  const T w = alpha * st.transmittance;
  st.rgb[0] += color[0] * w;
  st.rgb[1] += color[1] * w;
  st.rgb[2] += color[2] * w;
  st.transmittance *= (T(1) - alpha);
  ++st.count;
  return st.transmittance >= RenderParams<T>::kEarlyExit;
}

/// Depth-sorted gaussian ids (ties broken by ascending id).
template <typename T>
void sort_by_depth(std::vector<int>& ids, const std::vector<ProjectedGaussian<T>>& proj) {
  std::sort(ids.begin(), ids.end(), [&](int a, int b) {
    if (proj[a].depth != proj[b].depth) return proj[a].depth < proj[b].depth;
    return a < b;
  });
}

}  // namespace detail

/// Tile-binned front-to-back alpha compositing over 16x16 tiles. Tiles are
/// independent work units, so thread count never changes the output bits.
template <typename T>
RenderedImageT<T> render(const SplatArrays<T>& splats, const Camera& cam,
                         const RenderParams<T>& params) {
  require(params.width > 0 && params.height > 0, "render: nonpositive image size");
  cam.validate();
  const int w = params.width, h = params.height;
  RenderedImageT<T> img;
  img.width = w;
  img.height = h;
  img.rgb.resize(static_cast<Index>(w) * h, 3);
  img.silhouette.resize(static_cast<Index>(w) * h, 1);
  img.contributors = Eigen::ArrayXi::Zero(static_cast<Index>(w) * h);

  const auto proj = detail::project_all<T>(splats, cam, &img.culled);

  constexpr int tile = RenderParams<T>::kTile;
  const int tx = (w + tile - 1) / tile;
  const int ty = (h + tile - 1) / tile;
  std::vector<std::vector<int>> bins(static_cast<size_t>(tx) * ty);
  for (Index i = 0; i < splats.count(); ++i) {
    const auto& p = proj[i];
    if (!p.visible) continue;
    const int x0 = std::clamp(static_cast<int>(std::floor((p.mean2d(0) - p.radius) / tile)), 0, tx - 1);
    const int x1 = std::clamp(static_cast<int>(std::floor((p.mean2d(0) + p.radius) / tile)), 0, tx - 1);
    const int y0 = std::clamp(static_cast<int>(std::floor((p.mean2d(1) - p.radius) / tile)), 0, ty - 1);
    const int y1 = std::clamp(static_cast<int>(std::floor((p.mean2d(1) + p.radius) / tile)), 0, ty - 1);
    if (p.mean2d(0) + p.radius < T(0) || p.mean2d(0) - p.radius > T(w) ||
        p.mean2d(1) + p.radius < T(0) || p.mean2d(1) - p.radius > T(h))
      continue;
    for (int yy = y0; yy <= y1; ++yy)
      for (int xx = x0; xx <= x1; ++xx) bins[static_cast<size_t>(yy) * tx + xx].push_back(static_cast<int>(i));
  }
  for (auto& bin : bins) detail::sort_by_depth<T>(bin, proj);

  parallel_for(tx * ty, params.threads, [&](int t) {
    const int tx0 = (t % tx) * tile;
    const int ty0 = (t / tx) * tile;
    const auto& bin = bins[static_cast<size_t>(t)];
    for (int y = ty0; y < std::min(ty0 + tile, h); ++y) {
      for (int x = tx0; x < std::min(tx0 + tile, w); ++x) {
        const T px = T(x) + T(0.5), py = T(y) + T(0.5);
        detail::PixelState<T> st;
        for (int id : bin) {
          const auto& p = proj[id];
          if (!detail::touches_pixel(p, px, py)) continue;
          const T color[3] = {splats.colors(id, 0), splats.colors(id, 1), splats.colors(id, 2)};
          if (!detail::composite_step(st, p, splats.opacities(id), color, px, py)) break;
        }
        const Index pix = static_cast<Index>(y) * w + x;
        for (int k = 0; k < 3; ++k)
          img.rgb(pix, k) = st.rgb[k] + params.background(k) * st.transmittance;
        img.silhouette(pix) = T(1) - st.transmittance;
        img.contributors(pix) = st.count;
      }
    }
  });
  return img;
}

/// Reference renderer: per pixel, walks every projected Gaussian in depth
/// order with the same pixel test and compositing arithmetic. Used to check
/// that tiling is transparent.
template <typename T>
RenderedImageT<T> render_reference(const SplatArrays<T>& splats, const Camera& cam,
                                   const RenderParams<T>& params) {
  require(params.width > 0 && params.height > 0, "render: nonpositive image size");
  cam.validate();
  const int w = params.width, h = params.height;
  RenderedImageT<T> img;
  img.width = w;
  img.height = h;
  img.rgb.resize(static_cast<Index>(w) * h, 3);
  img.silhouette.resize(static_cast<Index>(w) * h, 1);
  img.contributors = Eigen::ArrayXi::Zero(static_cast<Index>(w) * h);
  const auto proj = detail::project_all<T>(splats, cam, &img.culled);
  std::vector<int> order;
  for (Index i = 0; i < splats.count(); ++i)
    if (proj[i].visible) order.push_back(static_cast<int>(i));
  detail::sort_by_depth<T>(order, proj);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const T px = T(x) + T(0.5), py = T(y) + T(0.5);
      detail::PixelState<T> st;
      for (int id : order) {
        const auto& p = proj[id];
        if (!detail::touches_pixel(p, px, py)) continue;
        const T color[3] = {splats.colors(id, 0), splats.colors(id, 1), splats.colors(id, 2)};
        if (!detail::composite_step(st, p, splats.opacities(id), color, px, py)) break;
      }
      const Index pix = static_cast<Index>(y) * w + x;
      for (int k = 0; k < 3; ++k)
        img.rgb(pix, k) = st.rgb[k] + params.background(k) * st.transmittance;
      img.silhouette(pix) = T(1) - st.transmittance;
      img.contributors(pix) = st.count;
    }
  }
  return img;
}

/// Analytic adjoint of render(): exact gradients of the compositing formula
/// chained through the EWA projection to every attribute. Upstream gradients
/// arrive per pixel for rgb and the silhouette.
template <typename T>
RenderGradientsT<T> render_backward(const SplatArrays<T>& splats, const Camera& cam,
                                    const RenderParams<T>& params,
                                    const Eigen::Array<T, Eigen::Dynamic, 3>& d_rgb,
                                    const Eigen::Array<T, Eigen::Dynamic, 1>& d_silhouette) {
  require(params.width > 0 && params.height > 0, "render_backward: nonpositive image size");
  const int w = params.width, h = params.height;
  require(d_rgb.rows() == static_cast<Index>(w) * h && d_silhouette.rows() == d_rgb.rows(),
          "render_backward: upstream gradient shape mismatch");
  cam.validate();

  const Index n = splats.count();
  RenderGradientsT<T> grads;
  grads.means.setZero(n, 3);
  grads.log_scales.setZero(n, 3);
  grads.quats.setZero(n, 4);
  grads.opacities.setZero(n, 1);
  grads.colors.setZero(n, 3);

  int culled = 0;
  const auto proj = detail::project_all<T>(splats, cam, &culled);

  constexpr int tile = RenderParams<T>::kTile;
  const int tx = (w + tile - 1) / tile;
  const int ty = (h + tile - 1) / tile;
  std::vector<std::vector<int>> bins(static_cast<size_t>(tx) * ty);
  for (Index i = 0; i < n; ++i) {
    const auto& p = proj[i];
    if (!p.visible) continue;
    if (p.mean2d(0) + p.radius < T(0) || p.mean2d(0) - p.radius > T(w) ||
        p.mean2d(1) + p.radius < T(0) || p.mean2d(1) - p.radius > T(h))
      continue;
    const int x0 = std::clamp(static_cast<int>(std::floor((p.mean2d(0) - p.radius) / tile)), 0, tx - 1);
    const int x1 = std::clamp(static_cast<int>(std::floor((p.mean2d(0) + p.radius) / tile)), 0, tx - 1);
    const int y0 = std::clamp(static_cast<int>(std::floor((p.mean2d(1) - p.radius) / tile)), 0, ty - 1);
    const int y1 = std::clamp(static_cast<int>(std::floor((p.mean2d(1) + p.radius) / tile)), 0, ty - 1);
    for (int yy = y0; yy <= y1; ++yy)
      for (int xx = x0; xx <= x1; ++xx) bins[static_cast<size_t>(yy) * tx + xx].push_back(static_cast<int>(i));
  }
  for (auto& bin : bins) detail::sort_by_depth<T>(bin, proj);

  // Screen-space gradient record per gaussian: d(mean2d), d(inv_cov), d(o), d(c).
  struct ScreenGrad {
    T dmx = 0, dmy = 0;
    T da00 = 0, da01 = 0, da11 = 0;
    T dop = 0;
    T dc[3] = {0, 0, 0};
  };
  // Per-tile partial buffers aligned with the bin lists; merged in tile
  // order after the parallel section so thread count cannot change bits.
  std::vector<std::vector<ScreenGrad>> partials(bins.size());

  parallel_for(tx * ty, params.threads, [&](int t) {
    const auto& bin = bins[static_cast<size_t>(t)];
    auto& part = partials[static_cast<size_t>(t)];
    part.assign(bin.size(), ScreenGrad{});
    const int tx0 = (t % tx) * tile;
    const int ty0 = (t / tx) * tile;
    struct Item {
      int slot;       // index into bin/part
      T alpha;
      T trans;        // transmittance before this item
      bool clamped;
    };
    std::vector<Item> items;
    items.reserve(64);
    for (int y = ty0; y < std::min(ty0 + tile, h); ++y) {
      for (int x = tx0; x < std::min(tx0 + tile, w); ++x) {
        const T px = T(x) + T(0.5), py = T(y) + T(0.5);
        const Index pix = static_cast<Index>(y) * w + x;
        const T gr = d_rgb(pix, 0), gg = d_rgb(pix, 1), gb = d_rgb(pix, 2);
        const T gm = d_silhouette(pix);
        if (gr == T(0) && gg == T(0) && gb == T(0) && gm == T(0)) continue;
        // Forward replay to collect the processed prefix.
        items.clear();
        T trans = T(1);
        for (size_t k = 0; k < bin.size(); ++k) {
          const auto& p = proj[bin[k]];
          if (!detail::touches_pixel(p, px, py)) continue;
          const T dx = px - p.mean2d(0);
          const T dy = py - p.mean2d(1);
          const T power = T(-0.5) * (dx * (p.inv_cov2d(0, 0) * dx + p.inv_cov2d(0, 1) * dy) +
                                     dy * (p.inv_cov2d(1, 0) * dx + p.inv_cov2d(1, 1) * dy));
          T alpha = splats.opacities(bin[k]) * std::exp(power);
          const bool clamped = alpha > RenderParams<T>::kAlphaClamp;
          if (clamped) alpha = RenderParams<T>::kAlphaClamp;
          items.push_back({static_cast<int>(k), alpha, trans, clamped});
          trans *= (T(1) - alpha);
          if (trans < RenderParams<T>::kEarlyExit) break;
        }
        const T t_final = trans;
        // d(loss)/d(T_final) through the background and the silhouette.
        // Suffix S_k per channel accumulates c_j a_j T_j for j > current,
        // plus bg * T_final.
        T s0 = params.background(0) * t_final;
        T s1 = params.background(1) * t_final;
        T s2 = params.background(2) * t_final;
        for (auto it = items.rbegin(); it != items.rend(); ++it) {
          const int id = bin[static_cast<size_t>(it->slot)];
          const auto& p = proj[id];
          ScreenGrad& sg = part[static_cast<size_t>(it->slot)];
          const T ti = it->trans;
          const T alpha = it->alpha;
          const T wgt = alpha * ti;
          const T c0 = splats.colors(id, 0), c1 = splats.colors(id, 1), c2 = splats.colors(id, 2);
          // color gradient
          sg.dc[0] += gr * wgt;
          sg.dc[1] += gg * wgt;
          sg.dc[2] += gb * wgt;
          // alpha gradient: d(rgb_k)/d(alpha) = c_k T_i - S_k/(1-alpha);
          // d(M)/d(alpha) = T_final/(1-alpha).
          const T inv1ma = T(1) / (T(1) - alpha);
          T dalpha = gr * (c0 * ti - s0 * inv1ma) + gg * (c1 * ti - s1 * inv1ma) +
                     gb * (c2 * ti - s2 * inv1ma);
          dalpha += gm * t_final * inv1ma;
          s0 += c0 * wgt;
          s1 += c1 * wgt;
          s2 += c2 * wgt;
          if (it->clamped) continue;  // flat region of the clamp
          const T dx = px - p.mean2d(0);
          const T dy = py - p.mean2d(1);
          const T gauss = alpha / splats.opacities(id);  // exp(power)
          sg.dop += dalpha * gauss;
          const T dpower = dalpha * alpha;  // d(alpha)/d(power) = alpha
          // d(power)/d(mean2d) = +A d;  d(power)/d(A) = -1/2 d d^T
          const T ad_x = p.inv_cov2d(0, 0) * dx + p.inv_cov2d(0, 1) * dy;
          const T ad_y = p.inv_cov2d(1, 0) * dx + p.inv_cov2d(1, 1) * dy;
          sg.dmx += dpower * ad_x;
          sg.dmy += dpower * ad_y;
          sg.da00 += dpower * (T(-0.5) * dx * dx);
          sg.da01 += dpower * (T(-0.5) * T(2) * dx * dy);  // symmetric pair folded
          sg.da11 += dpower * (T(-0.5) * dy * dy);
        }
      }
    }
  });

  // Merge per-tile partials in tile order (bin lists are deterministic).
  std::vector<ScreenGrad> acc(static_cast<size_t>(n));
  for (size_t t = 0; t < bins.size(); ++t) {
    const auto& bin = bins[t];
    const auto& part = partials[t];
    for (size_t k = 0; k < bin.size(); ++k) {
      ScreenGrad& a = acc[static_cast<size_t>(bin[k])];
      const ScreenGrad& b = part[k];
      a.dmx += b.dmx;
      a.dmy += b.dmy;
      a.da00 += b.da00;
      a.da01 += b.da01;
      a.da11 += b.da11;
      a.dop += b.dop;
      a.dc[0] += b.dc[0];
      a.dc[1] += b.dc[1];
      a.dc[2] += b.dc[2];
    }
  }

  // Chain screen-space gradients through the projection, per gaussian.
  const Eigen::Matrix<T, 3, 3> intr = cam.intrinsics.cast<T>();
  const Eigen::Matrix<T, 3, 3> rot_wc = cam.extrinsics.topLeftCorner<3, 3>().cast<T>();
  const T fx = intr(0, 0), fy = intr(1, 1);
  parallel_for(static_cast<int>(n), params.threads, [&](int i) {
    const auto& p = proj[i];
    if (!p.visible) return;
    const ScreenGrad& sg = acc[static_cast<size_t>(i)];
    grads.opacities(i, 0) = sg.dop;
    grads.colors(i, 0) = sg.dc[0];
    grads.colors(i, 1) = sg.dc[1];
    grads.colors(i, 2) = sg.dc[2];

    // dA -> dSigma2D via dSigma = -A dA A (A = inv cov, symmetric).
    Eigen::Matrix<T, 2, 2> dA;
    dA << sg.da00, T(0.5) * sg.da01, T(0.5) * sg.da01, sg.da11;
    const Eigen::Matrix<T, 2, 2> dcov = -p.inv_cov2d * dA * p.inv_cov2d;

    // Sigma2D = T2 Sigma3D T2^T (+ lowpass), T2 = J W.
    const Eigen::Matrix<T, 2, 3> t2 = p.jac * rot_wc;
    const Eigen::Matrix<T, 3, 3> cov3d = p.rot * p.exp2ls.asDiagonal() * p.rot.transpose();
    const Eigen::Matrix<T, 2, 3> dT2 = T(2) * dcov * t2 * cov3d;
    const Eigen::Matrix<T, 3, 3> dcov3d = t2.transpose() * dcov * t2;
    const Eigen::Matrix<T, 2, 3> dJ = dT2 * rot_wc.transpose();

    // Mean gradient: through the pixel projection and through J(p_cam).
    Eigen::Matrix<T, 3, 1> dp_cam = p.jac.transpose() * Eigen::Matrix<T, 2, 1>(sg.dmx, sg.dmy);
    const T x = p.p_cam(0), y = p.p_cam(1), z = p.p_cam(2);
    const T z2 = z * z, z3 = z2 * z;
    dp_cam(0) += dJ(0, 2) * (-fx / z2);
    dp_cam(1) += dJ(1, 2) * (-fy / z2);
    dp_cam(2) += dJ(0, 0) * (-fx / z2) + dJ(1, 1) * (-fy / z2) +
                 dJ(0, 2) * (T(2) * fx * x / z3) + dJ(1, 2) * (T(2) * fy * y / z3);
    const Eigen::Matrix<T, 3, 1> dmean = rot_wc.transpose() * dp_cam;
    grads.means(i, 0) = dmean(0);
    grads.means(i, 1) = dmean(1);
    grads.means(i, 2) = dmean(2);

    // Sigma3D = R D R^T with D = diag(exp(2 ls)).
    const Eigen::Matrix<T, 3, 3> dR = T(2) * dcov3d * p.rot * p.exp2ls.asDiagonal();
    const Eigen::Matrix<T, 3, 3> rtgr = p.rot.transpose() * dcov3d * p.rot;
    for (int k = 0; k < 3; ++k)
      grads.log_scales(i, k) = rtgr(k, k) * T(2) * p.exp2ls(k);

    // dR -> dq_hat -> dq (through the normalization).
    Eigen::Matrix<T, 4, 1> q = splats.quats.row(i).matrix().transpose();
    const T qn = q.norm();
    const Eigen::Matrix<T, 4, 1> qh = q / qn;
    const T qw = qh(0), qx = qh(1), qy = qh(2), qz = qh(3);
    Eigen::Matrix<T, 3, 3> dRdq[4];
    dRdq[0] << 0, -2 * qz, 2 * qy, 2 * qz, 0, -2 * qx, -2 * qy, 2 * qx, 0;
    dRdq[1] << 0, 2 * qy, 2 * qz, 2 * qy, -4 * qx, -2 * qw, 2 * qz, 2 * qw, -4 * qx;
    dRdq[2] << -4 * qy, 2 * qx, 2 * qw, 2 * qx, 0, 2 * qz, -2 * qw, 2 * qz, -4 * qy;
    dRdq[3] << -4 * qz, -2 * qw, 2 * qx, 2 * qw, -4 * qz, 2 * qy, 2 * qx, 2 * qy, 0;
    Eigen::Matrix<T, 4, 1> dqh;
    for (int k = 0; k < 4; ++k) dqh(k) = (dR.array() * dRdq[k].array()).sum();
    const Eigen::Matrix<T, 4, 1> dq = (dqh - qh * qh.dot(dqh)) / qn;
    for (int k = 0; k < 4; ++k) grads.quats(i, k) = dq(k);
  });

  return grads;
}

}  // namespace igs
