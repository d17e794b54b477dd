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
//
// Acceptance suite: one criterion per section, one PASS/FAIL line each.
// Criterion 8 is a reported benchmark, not a gate.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "igs/gradcheck.hpp"
#include "igs/image_io.hpp"
#include "igs/pipeline.hpp"
#include "igs/synth.hpp"

using namespace igs;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string read_bytes(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f.good()) return {};
  return std::string((std::istreambuf_iterator<char>(f)), {});
}

// --- criterion 1: gradient fidelity -----------------------------------------

void criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  const GradCheckReport rep = run_gradient_checks(2026, 20);
  const double secs = seconds_since(t0);
  bool ok = rep.ok() && secs < 120.0;
  std::string detail = "gradient fidelity: ";
  for (const auto& e : rep.entries)
    detail += e.name + "=" + std::to_string(e.max_rel_err) + " ";
  detail += "(" + std::to_string(secs) + " s)";
  report(1, ok, detail);
}

// --- criterion 2: detector exactness -----------------------------------------

void criterion2() {
  const auto t0 = std::chrono::steady_clock::now();
  DetRng rng(4242);

  SkeletonRig rig;
  HandMesh base;
  build_canonical_rig(parse_rig_spec(default_rig_spec_text()), rig, base);
  const HandMesh level1 = upsample_mesh(base, 1);
  const HandMesh level2 = upsample_mesh(level1, 1);

  DetectionConfig cfg;  // N_c = N_p = 100, T = 90
  bool all_equal = true;
  int scenes = 0, flagged_scenes = 0;
  for (int trial = 0; trial < 50; ++trial) {
    ArrayX3 canon, posed;
    std::vector<int> sides;
    if (trial % 2 == 0) {
      // Mesh-based scene: a random (often interacting) pose, subsampled to
      // at most 5000 index-aligned points.
      const HandMesh& mesh = (trial % 4 == 0) ? level2 : level1;
      DetRng prng = rng.fork(trial);
      const PoseParams pose = synth_pose(rig, prng, trial % 4 != 2);
      const HandMesh posed_mesh = pose_mesh(mesh, rig, pose);
      const Index n = std::min<Index>(mesh.vertex_count(), 500 + 90 * trial);
      std::vector<Index> pick(mesh.vertex_count());
      for (Index i = 0; i < mesh.vertex_count(); ++i) pick[i] = i;
      for (Index i = mesh.vertex_count() - 1; i > 0; --i)
        std::swap(pick[i], pick[prng.uniform_int(0, static_cast<int>(i))]);
      pick.resize(n);
      std::sort(pick.begin(), pick.end());
      canon.resize(n, 3);
      posed.resize(n, 3);
      sides.resize(n);
      for (Index i = 0; i < n; ++i) {
        canon.row(i) = mesh.vertices.row(pick[i]);
        posed.row(i) = posed_mesh.vertices.row(pick[i]);
        sides[i] = mesh.side[pick[i]];
      }
    } else {
      // Random two-blob clouds with partial overlap.
      const Index n = 500 + rng.uniform_int(0, 4500);
      canon.resize(n, 3);
      posed.resize(n, 3);
      sides.resize(n);
      for (Index i = 0; i < n; ++i) {
        const int side = i < n / 2 ? 0 : 1;
        const double cx = side == 0 ? -0.15 : 0.15;
        canon.row(i) << cx + 0.05 * rng.normal(), 0.05 * rng.normal(), 0.05 * rng.normal();
        const double shift = side == 1 ? -0.25 : 0.0;
        posed.row(i) = canon.row(i) +
                       ArrayX3::Constant(1, 3, 0.0).row(0);
        posed(i, 0) += shift + 0.01 * rng.normal();
        posed(i, 1) += 0.01 * rng.normal();
        posed(i, 2) += 0.01 * rng.normal();
        sides[i] = side;
      }
    }
    DetectionConfig c = cfg;
    c.n_canonical = std::min<int>(cfg.n_canonical, static_cast<int>(canon.rows()));
    c.n_posed = std::min<int>(cfg.n_posed, static_cast<int>(canon.rows()));
    const InteractionLabels fast = detect_interactions(canon, posed, sides, c, 2);
    const InteractionLabels oracle = brute_force_detect(canon, posed, sides, c);
    if (fast.flags != oracle.flags) all_equal = false;
    if (fast.flagged_total() > 0) ++flagged_scenes;
    ++scenes;
  }
  const double secs = seconds_since(t0);
  report(2, all_equal && secs < 60.0 && scenes == 50,
         "detector exactness: " + std::to_string(scenes) + " scenes, " +
             std::to_string(flagged_scenes) + " with contacts, set-exact, " +
             std::to_string(secs) + " s");
}

// --- criterion 3: refinement accounting --------------------------------------

void criterion3() {
  DetRng rng(777);
  RefinementConfig cfg;            // T_d = 0.1, T_s = 0.9
  cfg.max_split_fraction = 1.0;    // admit every qualifying split
  bool ok = true;
  double worst_conservation = 0.0;
  for (int trial = 0; trial < 1000 && ok; ++trial) {
    const Index n = 5 + rng.uniform_int(0, 120);
    GaussianCloud c;
    c.means.resize(n, 3);
    c.log_scales.resize(n, 3);
    c.quats.resize(n, 4);
    c.opacities.resize(n);
    c.colors.resize(n, 3);
    c.validity.resize(n);
    c.uv = ArrayX2::Zero(n, 2);
    c.side.assign(n, 0);
    c.parent_vertex.resize(n);
    for (Index i = 0; i < n; ++i) {
      for (int a = 0; a < 3; ++a) c.means(i, a) = 0.3 * rng.normal();
      for (int a = 0; a < 3; ++a) c.log_scales(i, a) = std::log(0.01) + 0.5 * rng.normal();
      Eigen::Vector4d q(1 + rng.normal(), rng.normal(), rng.normal(), rng.normal());
      c.quats.row(i) = (q / q.norm()).transpose().array();
      c.opacities(i) = 0.2 + 0.6 * rng.uniform();
      for (int a = 0; a < 3; ++a) c.colors(i, a) = rng.uniform();
      c.validity(i) = rng.uniform();
      c.parent_vertex[i] = static_cast<int>(i);
    }
    std::vector<Index> source;
    const GaussianCloud out = refine(c, cfg, &source);

    Index pruned = 0, split = 0;
    for (Index i = 0; i < n; ++i) {
      if (c.validity(i) < cfg.prune_threshold) ++pruned;
      if (c.validity(i) > cfg.split_threshold) ++split;
    }
    if (out.count() != n - pruned + split) ok = false;            // exact accounting
    for (Index k = 0; k < out.count(); ++k) {
      if (out.validity(k) < cfg.prune_threshold) ok = false;      // no surviving phi < T_d
      const Index src = source[k];
      const bool is_child = out.validity(k) == 0.5 && c.validity(src) > cfg.split_threshold;
      if (!is_child && out.validity(k) > cfg.split_threshold) ok = false;  // originals all split
    }
    // Split-mean conservation: children pair up in order after the survivors.
    Index w = n - pruned - split;
    for (Index i = 0; i < n; ++i) {
      if (c.validity(i) <= cfg.split_threshold) continue;
      const Vec3 avg =
          0.5 * (out.means.row(w).matrix() + out.means.row(w + 1).matrix()).transpose();
      worst_conservation =
          std::max(worst_conservation, (avg - c.means.row(i).matrix().transpose()).norm());
      w += 2;
    }
  }
  ok = ok && worst_conservation <= 1e-12;
  report(3, ok,
         "refinement accounting over 1000 clouds, split-mean conservation " +
             std::to_string(worst_conservation));
}

// --- criterion 4: rasterizer correctness --------------------------------------

void criterion4() {
  DetRng rng(31415);
  bool bitwise = true, conservation = true;
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 20 + rng.uniform_int(0, 180);
    SplatArrays<double> s;
    s.means.resize(n, 3);
    s.log_scales.resize(n, 3);
    s.quats.resize(n, 4);
    s.opacities.resize(n);
    s.colors.resize(n, 3);
    for (Index i = 0; i < n; ++i) {
      s.means.row(i) << 0.25 * rng.normal(), 0.25 * rng.normal(), 1.0 + 0.3 * rng.uniform();
      for (int a = 0; a < 3; ++a) s.log_scales(i, a) = std::log(0.02) + 0.5 * rng.normal();
      Eigen::Vector4d q(1 + rng.normal(), rng.normal(), rng.normal(), rng.normal());
      s.quats.row(i) = (q / q.norm()).transpose().array();
      s.opacities(i) = 0.2 + 0.7 * rng.uniform();
      for (int a = 0; a < 3; ++a) s.colors(i, a) = rng.uniform();
    }
    RenderParams<double> rp;
    rp.width = 33 + rng.uniform_int(0, 31);
    rp.height = 33 + rng.uniform_int(0, 31);
    rp.threads = 1 + (trial % 4);
    Camera cam;
    cam.intrinsics << rp.width, 0, 0.5 * rp.width, 0, rp.width, 0.5 * rp.height, 0, 0, 1;
    const auto tiled = render<double>(s, cam, rp);
    const auto naive = render_reference<double>(s, cam, rp);
    if (!(tiled.rgb == naive.rgb).all() || !(tiled.silhouette == naive.silhouette).all())
      bitwise = false;

    SplatArrays<double> white = s;
    white.colors.setConstant(1.0);
    RenderParams<double> rpw = rp;
    rpw.background.setZero();
    const auto img = render<double>(white, cam, rpw);
    for (Index p = 0; p < img.rgb.rows(); ++p)
      if (std::abs(img.rgb(p, 0) + (1.0 - img.silhouette(p)) - 1.0) >= 1e-9)
        conservation = false;
  }

  // Single-gaussian closed form within 1e-10.
  const int w = 33, h = 33;
  Camera cam;
  cam.intrinsics << 32, 0, 16.5, 0, 32, 16.5, 0, 0, 1;
  SplatArrays<double> one;
  one.means = ArrayX3::Zero(1, 3);
  one.means(0, 2) = 1.0;
  one.log_scales = ArrayX3::Constant(1, 3, std::log(0.05));
  one.quats.resize(1, 4);
  one.quats.row(0) << 1, 0, 0, 0;
  one.opacities.resize(1);
  one.opacities(0) = 0.6;
  one.colors.resize(1, 3);
  one.colors.row(0) << 0.9, 0.5, 0.1;
  RenderParams<double> rp;
  rp.width = w;
  rp.height = h;
  rp.background = Vec3::Constant(0.25);
  const auto img = render<double>(one, cam, rp);
  const Index pix = 16 * w + 16;
  const bool closed_form =
      std::abs(img.rgb(pix, 0) - (0.6 * 0.9 + 0.4 * 0.25)) < 1e-10 &&
      std::abs(img.rgb(pix, 1) - (0.6 * 0.5 + 0.4 * 0.25)) < 1e-10 &&
      std::abs(img.rgb(pix, 2) - (0.6 * 0.1 + 0.4 * 0.25)) < 1e-10;

  report(4, bitwise && conservation && closed_form,
         std::string("rasterizer: tiled==naive bitwise ") + (bitwise ? "yes" : "NO") +
             ", conservation<=1e-9 " + (conservation ? "yes" : "NO") + ", closed form " +
             (closed_form ? "yes" : "NO"));
}

// --- criterion 5: one-shot self-consistency ------------------------------------

void criterion5() {
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentConfig cfg;  // full defaults: C=32, 64x64 maps and images
  cfg.threads = 2;
  AvatarModel model(cfg, parse_rig_spec(default_rig_spec_text()));
  ParamStore gen = init_weights(model, 1001);
  DetRng map_rng(7);
  const Array hidden = random_identity_map(cfg.feature(), map_rng);

  DetRng prng(5);
  const PoseParams pose = synth_pose(model.rig(), prng, true);
  const auto cams = synth_cameras(cfg.image_w, cfg.image_h);
  const RenderedImage ref = render_with(model, gen, hidden, Array(), Vec3::Ones(), Vec3::Zero(),
                                        pose, cams[0], cfg.coarse_level, true, cfg.threads);

  FitInputs in;
  in.reference = ref.rgb;
  in.mask = ref.silhouette;
  in.pose = pose;
  in.cam = cams[0];
  in.steps = 200;
  in.lr = 1e-2;
  in.level = cfg.coarse_level;
  in.threads = cfg.threads;
  const PerceptualBank bank = PerceptualBank::make(cfg.perceptual_seed);
  const FitResult fit = fit_one_shot(model, gen, in, bank, cfg.loss_weights());

  const RenderedImage fitted =
      render_with(model, gen, fit.identity, fit.delta_t, fit.gain, fit.bias, pose, cams[0],
                  cfg.coarse_level, true, cfg.threads);
  const double init_l1 = fit.trace.front().l1;
  const double final_l1 = (fitted.rgb - ref.rgb).abs().mean();
  const double ref_psnr = psnr(fitted.rgb, ref.rgb);

  // Held-out: two other views and one new pose of the same subject.
  double min_held_out = std::numeric_limits<double>::infinity();
  const PoseParams pose2 = synth_pose(model.rig(), prng, false);
  struct View {
    PoseParams pose;
    Camera cam;
  };
  const View held[3] = {{pose, cams[1]}, {pose, cams[2]}, {pose2, cams[0]}};
  for (const View& v : held) {
    const RenderedImage gt = render_with(model, gen, hidden, Array(), Vec3::Ones(), Vec3::Zero(),
                                         v.pose, v.cam, cfg.coarse_level, true, cfg.threads);
    const RenderedImage got =
        render_with(model, gen, fit.identity, fit.delta_t, fit.gain, fit.bias, v.pose, v.cam,
                    cfg.coarse_level, true, cfg.threads);
    min_held_out = std::min(min_held_out, psnr(got.rgb, gt.rgb));
  }
  const double secs = seconds_since(t0);
  const bool ok = final_l1 <= 0.1 * init_l1 && ref_psnr >= 30.0 && min_held_out >= 28.0 &&
                  secs < 600.0;
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "one-shot fit: l1 %.5f -> %.5f (%.1f%% reduction), ref %.1f dB, held-out min "
                "%.1f dB, %.0f s",
                init_l1, final_l1, 100.0 * (1.0 - final_l1 / init_l1), ref_psnr, min_held_out,
                secs);
  report(5, ok, buf);
}

// --- criterion 6: stage-one trainability -----------------------------------------

void criterion6() {
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentConfig cfg;
  cfg.channels = 16;
  cfg.pose_dim = 24;
  cfg.gamma_bands = 4;
  cfg.map_h = cfg.map_w = 32;
  cfg.hidden = 32;
  cfg.tex_hidden = 32;
  cfg.head_hidden = 16;
  cfg.image_w = cfg.image_h = 48;
  cfg.threads = 2;
  AvatarModel model(cfg, parse_rig_spec(default_rig_spec_text()));

  // 3 subjects x 4 poses x 2 views, generator-rendered.
  ParamStore gen = init_weights(model, 501);
  DetRng rng(17);
  std::vector<TrainSample> table, touching;
  const auto cams = synth_cameras(cfg.image_w, cfg.image_h);
  for (int s = 1; s <= 3; ++s) {
    DetRng mr = rng.fork(s);
    gen.add("identity/s" + std::to_string(s), random_identity_map(cfg.feature(), mr));
    DetRng pr = rng.fork(100 + s);
    for (int p = 0; p < 4; ++p) {
      const bool inter = p % 2 == 1;
      const PoseParams pose = synth_pose(model.rig(), pr, inter);
      const InteractionLabels labels = model.detect_labels(pose);
      for (int c = 0; c < 2; ++c) {
        TrainSample t;
        t.pose = pose;
        t.cam = cams[c];
        t.subject = s;
        t.labels = labels;
        t.target = render_with(model, gen, gen.at("identity/s" + std::to_string(s)), Array(),
                               Vec3::Ones(), Vec3::Zero(), pose, cams[c], cfg.coarse_level, true,
                               cfg.threads)
                       .rgb;
        table.push_back(t);
        if (inter) touching.push_back(t);
      }
    }
  }

  const PerceptualBank bank = PerceptualBank::make(cfg.perceptual_seed);
  auto train = [&](bool attention, const std::vector<TrainSample>& data, int steps,
                   double* first10, double* last10) {
    ParamStore ps = init_weights(model, 777);
    for (int s = 1; s <= 3; ++s)
      ps.add("identity/s" + std::to_string(s), zero_identity_map(cfg.feature()));
    AdamState state;
    state.cfg = cfg.adam();
    Stage1Options opt;
    opt.level = cfg.coarse_level;
    opt.lr = 1e-3;
    opt.attention = attention;
    opt.threads = cfg.threads;
    std::vector<double> hist;
    for (int k = 0; k < steps; ++k)
      hist.push_back(stage1_step(model, {data[k % data.size()]}, ps, state, bank, opt).total);
    *first10 = *last10 = 0;
    for (int k = 0; k < 10; ++k) {
      *first10 += hist[k] / 10.0;
      *last10 += hist[hist.size() - 10 + k] / 10.0;
    }
  };

  double first10 = 0, last10 = 0;
  train(true, table, 500, &first10, &last10);
  const double reduction = 1.0 - last10 / first10;

  double on_first = 0, on_last = 0, off_first = 0, off_last = 0;
  train(true, touching, 1500, &on_first, &on_last);
  train(false, touching, 1500, &off_first, &off_last);

  const double secs = seconds_since(t0);
  const bool ok = reduction >= 0.60 && on_last < off_last;
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "stage-one: 500 steps reduce loss %.1f%% (%.4f -> %.4f); touching-set final "
                "loss attn %.5f vs no-attn %.5f, %.0f s",
                100 * reduction, first10, last10, on_last, off_last, secs);
  report(6, ok, buf);
}

// --- criterion 7: determinism -------------------------------------------------

void criterion7(const std::string& cli) {
  bool ok = true;
  std::string detail = "determinism:";

  // Tile-parallel rendering is thread-count and rerun invariant.
  {
    DetRng rng(99);
    SplatArrays<double> s;
    const Index n = 300;
    s.means.resize(n, 3);
    s.log_scales.resize(n, 3);
    s.quats.resize(n, 4);
    s.opacities.resize(n);
    s.colors.resize(n, 3);
    for (Index i = 0; i < n; ++i) {
      s.means.row(i) << 0.3 * rng.normal(), 0.3 * rng.normal(), 1.2 + 0.3 * rng.uniform();
      for (int a = 0; a < 3; ++a) s.log_scales(i, a) = std::log(0.02) + 0.3 * rng.normal();
      Eigen::Vector4d q(1 + rng.normal(), rng.normal(), rng.normal(), rng.normal());
      s.quats.row(i) = (q / q.norm()).transpose().array();
      s.opacities(i) = 0.3 + 0.5 * rng.uniform();
      for (int a = 0; a < 3; ++a) s.colors(i, a) = rng.uniform();
    }
    Camera cam;
    cam.intrinsics << 96, 0, 48, 0, 96, 48, 0, 0, 1;
    Eigen::Array<double, Eigen::Dynamic, 3> first;
    for (int threads : {1, 2, 3, 8}) {
      RenderParams<double> rp;
      rp.width = rp.height = 96;
      rp.threads = threads;
      const auto img = render<double>(s, cam, rp);
      if (threads == 1)
        first = img.rgb;
      else if (!(img.rgb == first).all())
        ok = false;
    }
    detail += ok ? " threads-invariant" : " THREADS-DIVERGED";
  }

  // Library level: dataset generation and fitting re-run bitwise.
  {
    ExperimentConfig cfg;
    cfg.channels = 8;
    cfg.pose_dim = 12;
    cfg.gamma_bands = 2;
    cfg.map_h = cfg.map_w = 16;
    cfg.hidden = 16;
    cfg.tex_hidden = 16;
    cfg.head_hidden = 8;
    cfg.image_w = cfg.image_h = 32;
    cfg.threads = 2;
    AvatarModel model(cfg, parse_rig_spec(default_rig_spec_text()));
    ParamStore gen = init_weights(model, 11);
    DetRng mr(3);
    const Array hidden = random_identity_map(cfg.feature(), mr);
    DetRng pr(9);
    const PoseParams pose = synth_pose(model.rig(), pr, true);
    const auto cams = synth_cameras(cfg.image_w, cfg.image_h);
    const RenderedImage ref = render_with(model, gen, hidden, Array(), Vec3::Ones(),
                                          Vec3::Zero(), pose, cams[0], 1, true, 2);
    const PerceptualBank bank = PerceptualBank::make(cfg.perceptual_seed);
    auto fit_once = [&]() {
      FitInputs in;
      in.reference = ref.rgb;
      in.mask = ref.silhouette;
      in.pose = pose;
      in.cam = cams[0];
      in.steps = 10;
      in.lr = 1e-2;
      in.level = 1;
      in.threads = 2;
      return fit_one_shot(model, gen, in, bank, cfg.loss_weights());
    };
    const FitResult a = fit_once();
    const FitResult b = fit_once();
    const bool fit_ok = (a.identity == b.identity).all() && (a.delta_t == b.delta_t).all() &&
                        a.trace.back().total == b.trace.back().total;
    if (!fit_ok) ok = false;
    detail += fit_ok ? ", fit-rerun-bitwise" : ", FIT-DIVERGED";
  }

  // Command level: gen-data and render re-run byte-identically.
  if (!cli.empty() && fs::exists(cli)) {
    const std::string base = "/tmp/igs_acc7";
    fs::remove_all(base);
    fs::create_directories(base);
    const std::string cfg_file = base + "/cfg.txt";
    {
      ExperimentConfig small;
      small.channels = 8;
      small.pose_dim = 12;
      small.gamma_bands = 2;
      small.map_h = small.map_w = 16;
      small.hidden = 16;
      small.tex_hidden = 16;
      small.head_hidden = 8;
      small.image_w = small.image_h = 32;
      save_config(cfg_file, small);
    }
    auto run = [&](const std::string& cmd) {
      const std::string full = cli + " " + cmd + " >/dev/null 2>&1";
      return std::system(full.c_str()) == 0;
    };
    bool cmd_ok = run("gen-data --out " + base + "/d1 --subjects 1 --poses 2 --seed 3 --config " +
                      cfg_file) &&
                  run("gen-data --out " + base + "/d2 --subjects 1 --poses 2 --seed 3 --config " +
                      cfg_file);
    if (cmd_ok) {
      for (const char* rel :
           {"subjects/s1/frames/f000.ppm", "subjects/s1/frames/f005.ppm", "generator.igsn",
            "subjects/s1/masks/f003.ppm"}) {
        const std::string a = read_bytes(base + "/d1/" + rel);
        const std::string b = read_bytes(base + "/d2/" + rel);
        if (a.empty() || a != b) cmd_ok = false;
      }
    }
    if (!cmd_ok) ok = false;
    detail += cmd_ok ? ", gen-data-rerun-bytes-identical" : ", GEN-DATA-DIVERGED";
  } else {
    detail += ", (cli path not given: command-level check skipped)";
  }

  report(7, ok, detail);
}

// --- criterion 8: performance benchmark (reported, not asserted) ----------------

void criterion8() {
  DetRng rng(2718);
  const Index n = 100000;
  SplatArrays<float> s;
  s.means.resize(n, 3);
  s.log_scales.resize(n, 3);
  s.quats.resize(n, 4);
  s.opacities.resize(n);
  s.colors.resize(n, 3);
  for (Index i = 0; i < n; ++i) {
    s.means.row(i) << 0.3f * float(rng.normal()), 0.3f * float(rng.normal()),
        1.0f + 0.3f * float(rng.uniform());
    for (int a = 0; a < 3; ++a) s.log_scales(i, a) = std::log(0.004f) + 0.2f * float(rng.normal());
    Eigen::Vector4f q(1.0f + float(rng.normal()), float(rng.normal()), float(rng.normal()),
                      float(rng.normal()));
    s.quats.row(i) = (q / q.norm()).transpose().array();
    s.opacities(i) = 0.3f + 0.6f * float(rng.uniform());
    for (int a = 0; a < 3; ++a) s.colors(i, a) = float(rng.uniform());
  }
  Camera cam;
  cam.intrinsics << 300, 0, 128, 0, 300, 128, 0, 0, 1;
  RenderParams<float> rp;
  rp.width = rp.height = 256;
  rp.threads = 8;
  render<float>(s, cam, rp);  // warm-up
  const auto t0 = std::chrono::steady_clock::now();
  render<float>(s, cam, rp);
  const double ms = 1000.0 * seconds_since(t0);
  std::printf("[REPORT] criterion 8: forward render 100000 gaussians at 256x256, f32, 8 "
              "threads: %.0f ms (soft gate 500 ms, %s)\n",
              ms, ms < 500.0 ? "met" : "not met on this machine");
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  const auto t0 = std::chrono::steady_clock::now();
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7(cli);
  criterion8();
  std::printf("acceptance: %s (%d failure%s, %.0f s total)\n", g_failures == 0 ? "PASS" : "FAIL",
              g_failures, g_failures == 1 ? "" : "s", seconds_since(t0));
  return g_failures == 0 ? 0 : 1;
}
