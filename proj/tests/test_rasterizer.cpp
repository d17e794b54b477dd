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

#include "helpers.hpp"
#include "igs/rasterize.hpp"

using namespace igs;
using igs::testing::random_array;
using igs::testing::rel_err;

namespace {

Camera test_camera(int w, int h, double focal = 32.0) {
  Camera cam;
  cam.intrinsics = Mat3::Identity();
  cam.intrinsics(0, 0) = focal;
  cam.intrinsics(1, 1) = focal;
  // For odd sides, 0.5*w is the center of the middle pixel (w/2 + 0.5).
  cam.intrinsics(0, 2) = 0.5 * w;
  cam.intrinsics(1, 2) = 0.5 * h;
  return cam;
}

SplatArrays<double> random_scene(Index n, DetRng& rng, double spread = 0.25) {
  SplatArrays<double> s;
  s.means.resize(n, 3);
  s.log_scales.resize(n, 3);
  s.quats.resize(n, 4);
  s.opacities.resize(n);
  s.colors.resize(n, 3);
  for (Index i = 0; i < n; ++i) {
    s.means.row(i) << spread * rng.normal(), spread * rng.normal(), 1.0 + 0.2 * rng.uniform();
    for (int a = 0; a < 3; ++a) s.log_scales(i, a) = std::log(0.03) + 0.3 * rng.normal();
    Eigen::Vector4d q(1.0 + rng.normal(), 0.3 * rng.normal(), 0.3 * rng.normal(),
                      0.3 * rng.normal());
    s.quats.row(i) = (q / q.norm()).transpose().array();
    s.opacities(i) = 0.25 + 0.5 * rng.uniform();
    for (int a = 0; a < 3; ++a) s.colors(i, a) = rng.uniform();
  }
  return s;
}

SplatArrays<double> one_gaussian(const Vec3& mean, double scale, double opacity,
                                 const Vec3& color) {
  SplatArrays<double> s;
  s.means.resize(1, 3);
  s.means.row(0) = mean.transpose().array();
  s.log_scales = ArrayX3::Constant(1, 3, std::log(scale));
  s.quats.resize(1, 4);
  s.quats.row(0) << 1, 0, 0, 0;
  s.opacities.resize(1);
  s.opacities(0) = opacity;
  s.colors.resize(1, 3);
  s.colors.row(0) = color.transpose().array();
  return s;
}

SplatArrays<double> concat(const SplatArrays<double>& a, const SplatArrays<double>& b) {
  SplatArrays<double> s;
  const Index n = a.count() + b.count();
  s.means.resize(n, 3);
  s.log_scales.resize(n, 3);
  s.quats.resize(n, 4);
  s.opacities.resize(n);
  s.colors.resize(n, 3);
  s.means << a.means, b.means;
  s.log_scales << a.log_scales, b.log_scales;
  s.quats << a.quats, b.quats;
  s.opacities << a.opacities, b.opacities;
  s.colors << a.colors, b.colors;
  return s;
}

}  // namespace

TEST_CASE("projection: optical axis lands on the principal point") {
  const Camera cam = test_camera(32, 32);
  const auto p = project_gaussian<double>(Vec3(0, 0, 1.0), Vec3::Constant(std::log(0.02)),
                                          Eigen::Vector4d(1, 0, 0, 0), cam.intrinsics,
                                          cam.extrinsics.topLeftCorner<3, 3>(),
                                          cam.extrinsics.topRightCorner<3, 1>());
  REQUIRE(p.visible);
  CHECK(p.mean2d(0) == doctest::Approx(cam.intrinsics(0, 2)));
  CHECK(p.mean2d(1) == doctest::Approx(cam.intrinsics(1, 2)));
  CHECK(p.depth == doctest::Approx(1.0));
}

TEST_CASE("projection: distant isotropic gaussian projects to a circle (EWA)") {
  const double s = 0.01;
  const Camera cam = test_camera(64, 64, 128.0);
  const Vec3 mean(0.001, -0.0005, 100.0 * s);
  const auto p = project_gaussian<double>(mean, Vec3::Constant(std::log(s)),
                                          Eigen::Vector4d(1, 0, 0, 0), cam.intrinsics,
                                          cam.extrinsics.topLeftCorner<3, 3>(),
                                          cam.extrinsics.topRightCorner<3, 1>());
  REQUIRE(p.visible);
  // Independent EWA evaluation: Sigma2D = J diag(s^2) J^T + lowpass.
  const double fx = cam.intrinsics(0, 0), z = mean.z();
  Eigen::Matrix<double, 2, 3> J;
  J << fx / z, 0, -fx * mean.x() / (z * z), 0, fx / z, -fx * mean.y() / (z * z);
  Mat3 cov3 = Mat3::Identity() * s * s;
  Eigen::Matrix2d expect = J * cov3 * J.transpose();
  expect(0, 0) += 0.3;
  expect(1, 1) += 0.3;
  CHECK((p.cov2d - expect).cwiseAbs().maxCoeff() < 1e-12);

  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(p.cov2d);
  const double ratio = eig.eigenvalues()(1) / eig.eigenvalues()(0);
  CHECK(std::abs(ratio - 1.0) < 1e-3);
}

TEST_CASE("projection: pixel offset is linear in focal length") {
  const Vec3 mean(0.05, -0.03, 1.0);
  const Camera c1 = test_camera(64, 64, 50.0);
  const Camera c2 = test_camera(64, 64, 100.0);
  auto project = [&](const Camera& cam) {
    return project_gaussian<double>(mean, Vec3::Constant(std::log(0.02)),
                                    Eigen::Vector4d(1, 0, 0, 0), cam.intrinsics,
                                    cam.extrinsics.topLeftCorner<3, 3>(),
                                    cam.extrinsics.topRightCorner<3, 1>());
  };
  const auto p1 = project(c1), p2 = project(c2);
  const Vec2 off1 = p1.mean2d - Vec2(c1.intrinsics(0, 2), c1.intrinsics(1, 2));
  const Vec2 off2 = p2.mean2d - Vec2(c2.intrinsics(0, 2), c2.intrinsics(1, 2));
  CHECK((off2 - 2.0 * off1).norm() < 1e-12);
}

TEST_CASE("projection culls points behind the near plane") {
  const Camera cam = test_camera(32, 32);
  const auto p = project_gaussian<double>(Vec3(0, 0, -1.0), Vec3::Constant(std::log(0.02)),
                                          Eigen::Vector4d(1, 0, 0, 0), cam.intrinsics,
                                          cam.extrinsics.topLeftCorner<3, 3>(),
                                          cam.extrinsics.topRightCorner<3, 1>());
  CHECK_FALSE(p.visible);
}

TEST_CASE("render: empty visible set gives pure background, M = 0") {
  SplatArrays<double> s = one_gaussian(Vec3(0, 0, -2.0), 0.02, 0.5, Vec3(1, 0, 0));
  RenderParams<double> rp;
  rp.width = rp.height = 16;
  rp.background << 0.2, 0.4, 0.6;
  const auto img = render<double>(s, test_camera(16, 16), rp);
  CHECK(img.culled == 1);
  CHECK((img.rgb.col(0) == 0.2).all());
  CHECK((img.rgb.col(1) == 0.4).all());
  CHECK((img.rgb.col(2) == 0.6).all());
  CHECK((img.silhouette == 0.0).all());
  CHECK_THROWS(render<double>(s, test_camera(16, 16), RenderParams<double>{}));
}

TEST_CASE("render: single centered gaussian matches the closed form") {
  const int w = 33, h = 33;
  const Camera cam = test_camera(w, h);  // principal point = center of pixel (16,16)
  const double a = 0.6, b = 0.25;
  const SplatArrays<double> s = one_gaussian(Vec3(0, 0, 1.0), 0.05, a, Vec3(0.9, 0.5, 0.1));
  RenderParams<double> rp;
  rp.width = w;
  rp.height = h;
  rp.background = Vec3::Constant(b);
  const auto img = render<double>(s, cam, rp);
  const Index pix = 16 * w + 16;
  // Gaussian factor is exactly 1 at its center: pixel = a*c + (1-a)*b.
  CHECK(std::abs(img.rgb(pix, 0) - (a * 0.9 + (1 - a) * b)) < 1e-10);
  CHECK(std::abs(img.rgb(pix, 1) - (a * 0.5 + (1 - a) * b)) < 1e-10);
  CHECK(std::abs(img.rgb(pix, 2) - (a * 0.1 + (1 - a) * b)) < 1e-10);
  CHECK(std::abs(img.silhouette(pix) - a) < 1e-12);
}

TEST_CASE("render: two overlapping gaussians composite front-to-back") {
  const int w = 33, h = 33;
  const Camera cam = test_camera(w, h);
  const double a1 = 0.55, a2 = 0.8, b = 0.3;
  const auto s = concat(one_gaussian(Vec3(0, 0, 1.0), 0.04, a1, Vec3(1, 0, 0)),
                        one_gaussian(Vec3(0, 0, 1.5), 0.06, a2, Vec3(0, 1, 0)));
  RenderParams<double> rp;
  rp.width = w;
  rp.height = h;
  rp.background = Vec3::Constant(b);
  const auto img = render<double>(s, cam, rp);
  const Index pix = 16 * w + 16;
  // Hand-derived two-term compositing (both factors are exactly 1 on axis).
  const double t2 = 1 - a1, tf = (1 - a1) * (1 - a2);
  CHECK(std::abs(img.rgb(pix, 0) - (1.0 * a1 + b * tf)) < 1e-10);
  CHECK(std::abs(img.rgb(pix, 1) - (1.0 * a2 * t2 + b * tf)) < 1e-10);
  CHECK(std::abs(img.silhouette(pix) - (1 - tf)) < 1e-10);
}

TEST_CASE("render: per-pixel conservation sum(alpha T) + T_final = 1") {
  DetRng rng(21);
  for (int trial = 0; trial < 3; ++trial) {
    SplatArrays<double> s = random_scene(40, rng);
    s.colors.setConstant(1.0);  // white-on-black: rgb accumulates alpha*T exactly
    RenderParams<double> rp;
    rp.width = rp.height = 24;
    const auto img = render<double>(s, test_camera(24, 24), rp);
    for (Index p = 0; p < img.rgb.rows(); ++p)
      CHECK(std::abs(img.rgb(p, 0) + (1.0 - img.silhouette(p)) - 1.0) < 1e-9);
  }
}

TEST_CASE("render: invariant to input order (distinct depths), bitwise") {
  DetRng rng(22);
  SplatArrays<double> s = random_scene(30, rng);
  RenderParams<double> rp;
  rp.width = rp.height = 20;
  const Camera cam = test_camera(20, 20);
  const auto base = render<double>(s, cam, rp);

  // Deterministic shuffle.
  std::vector<Index> perm(30);
  for (Index i = 0; i < 30; ++i) perm[i] = i;
  for (Index i = 29; i > 0; --i) std::swap(perm[i], perm[rng.uniform_int(0, static_cast<int>(i))]);
  SplatArrays<double> shuffled;
  shuffled.means.resize(30, 3);
  shuffled.log_scales.resize(30, 3);
  shuffled.quats.resize(30, 4);
  shuffled.opacities.resize(30);
  shuffled.colors.resize(30, 3);
  for (Index i = 0; i < 30; ++i) {
    shuffled.means.row(i) = s.means.row(perm[i]);
    shuffled.log_scales.row(i) = s.log_scales.row(perm[i]);
    shuffled.quats.row(i) = s.quats.row(perm[i]);
    shuffled.opacities(i) = s.opacities(perm[i]);
    shuffled.colors.row(i) = s.colors.row(perm[i]);
  }
  const auto other = render<double>(shuffled, cam, rp);
  CHECK((base.rgb == other.rgb).all());
  CHECK((base.silhouette == other.silhouette).all());
}

TEST_CASE("render: tiled equals naive bitwise; threads do not change bits") {
  DetRng rng(23);
  for (int trial = 0; trial < 5; ++trial) {
    const Index n = 50 + 50 * trial;
    SplatArrays<double> s = random_scene(n, rng);
    RenderParams<double> rp;
    rp.width = 40 + trial * 6;
    rp.height = 36 + trial * 4;
    const Camera cam = test_camera(rp.width, rp.height);
    const auto tiled = render<double>(s, cam, rp);
    const auto naive = render_reference<double>(s, cam, rp);
    CHECK((tiled.rgb == naive.rgb).all());
    CHECK((tiled.silhouette == naive.silhouette).all());
    CHECK((tiled.contributors == naive.contributors).all());

    RenderParams<double> rp4 = rp;
    rp4.threads = 4;
    const auto threaded = render<double>(s, cam, rp4);
    CHECK((tiled.rgb == threaded.rgb).all());
  }
}

TEST_CASE("render: silhouette never decreases when an opacity grows") {
  DetRng rng(24);
  SplatArrays<double> s = random_scene(5, rng);
  for (Index i = 0; i < 5; ++i) s.opacities(i) = 0.2 + 0.5 * rng.uniform();  // no early exit
  RenderParams<double> rp;
  rp.width = rp.height = 24;
  const Camera cam = test_camera(24, 24);
  const auto before = render<double>(s, cam, rp);
  for (Index i = 0; i < 5; ++i) {
    SplatArrays<double> bumped = s;
    bumped.opacities(i) = std::min(0.95, s.opacities(i) + 0.2);
    const auto after = render<double>(bumped, cam, rp);
    CHECK(((after.silhouette - before.silhouette) >= -1e-12).all());
  }
}

TEST_CASE("backward: zero upstream gradient gives zero attribute gradients") {
  DetRng rng(25);
  SplatArrays<double> s = random_scene(10, rng);
  RenderParams<double> rp;
  rp.width = rp.height = 16;
  const auto g = render_backward<double>(
      s, test_camera(16, 16), rp, Eigen::Array<double, Eigen::Dynamic, 3>::Zero(16 * 16, 3),
      Eigen::Array<double, Eigen::Dynamic, 1>::Zero(16 * 16, 1));
  CHECK((g.means == 0.0).all());
  CHECK((g.quats == 0.0).all());
  CHECK((g.opacities == 0.0).all());
}

TEST_CASE("backward: single-gaussian opacity gradient matches the closed form") {
  const int w = 33, h = 33;
  const Camera cam = test_camera(w, h);
  const double a = 0.5, b = 0.2;
  const SplatArrays<double> s = one_gaussian(Vec3(0, 0, 1.0), 0.05, a, Vec3(0.9, 0.5, 0.1));
  RenderParams<double> rp;
  rp.width = w;
  rp.height = h;
  rp.background = Vec3::Constant(b);
  // Upstream: d/d(red at the center pixel) only.
  Eigen::Array<double, Eigen::Dynamic, 3> d_rgb =
      Eigen::Array<double, Eigen::Dynamic, 3>::Zero(w * h, 3);
  const Index pix = 16 * w + 16;
  d_rgb(pix, 0) = 1.0;
  const auto g = render_backward<double>(
      s, cam, rp, d_rgb, Eigen::Array<double, Eigen::Dynamic, 1>::Zero(w * h, 1));
  // pixel_red = o*c_r + (1-o)*b (gaussian factor 1): d/do = c_r - b.
  CHECK(std::abs(g.opacities(0) - (0.9 - b)) < 1e-10);
  CHECK(std::abs(g.colors(0, 0) - a) < 1e-10);
}

TEST_CASE("backward: full scene gradients match central finite differences") {
  DetRng rng(26);
  const int w = 32, h = 32;
  const Camera cam = test_camera(w, h);
  SplatArrays<double> s = random_scene(20, rng);
  RenderParams<double> rp;
  rp.width = w;
  rp.height = h;
  rp.background << 0.15, 0.1, 0.25;

  // Fixed random linear functional over the image and silhouette.
  const Array w_rgb = random_array(w * h, 3, rng);
  const Array w_m = random_array(w * h, 1, rng);
  auto loss_of = [&](const SplatArrays<double>& sc) {
    const auto img = render<double>(sc, cam, rp);
    return (img.rgb * w_rgb).sum() + (img.silhouette * w_m.col(0)).sum();
  };
  const auto g = render_backward<double>(s, cam, rp, w_rgb, w_m);

  const double step = 1e-5;
  double worst = 0.0;
  auto probe = [&](double& slot, double analytic) {
    const double orig = slot;
    slot = orig + step;
    const double up = loss_of(s);
    slot = orig - step;
    const double dn = loss_of(s);
    slot = orig;
    worst = std::max(worst, rel_err(analytic, (up - dn) / (2 * step), 1e-5));
  };
  for (Index i = 0; i < s.count(); ++i) {
    for (int a = 0; a < 3; ++a) probe(s.means(i, a), g.means(i, a));
    for (int a = 0; a < 3; ++a) probe(s.log_scales(i, a), g.log_scales(i, a));
    for (int a = 0; a < 4; ++a) probe(s.quats(i, a), g.quats(i, a));
    probe(s.opacities(i), g.opacities(i));
    for (int a = 0; a < 3; ++a) probe(s.colors(i, a), g.colors(i, a));
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("float instantiation compiles and roughly agrees with double") {
  DetRng rng(27);
  const SplatArrays<double> sd = random_scene(15, rng);
  SplatArrays<float> sf;
  sf.means = sd.means.cast<float>();
  sf.log_scales = sd.log_scales.cast<float>();
  sf.quats = sd.quats.cast<float>();
  sf.opacities = sd.opacities.cast<float>();
  sf.colors = sd.colors.cast<float>();
  RenderParams<double> rpd;
  rpd.width = rpd.height = 16;
  RenderParams<float> rpf;
  rpf.width = rpf.height = 16;
  const auto id = render<double>(sd, test_camera(16, 16), rpd);
  const auto iff = render<float>(sf, test_camera(16, 16), rpf);
  CHECK((id.rgb.cast<float>() - iff.rgb).abs().maxCoeff() < 1e-3f);
}
