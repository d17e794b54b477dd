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

#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "igs/image_io.hpp"
#include "igs/pipeline.hpp"
#include "igs/synth.hpp"

namespace fs = std::filesystem;
using namespace igs;

namespace {

double now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

ExperimentConfig config_from_flags(const std::string& config_path, uint64_t seed, int threads) {
  ExperimentConfig cfg = config_path.empty() ? ExperimentConfig{} : load_config(config_path);
  if (seed) cfg.seed = seed;
  if (threads) cfg.threads = threads;
  cfg.validate();
  return cfg;
}

Vec3 parse_rgb(const std::string& text) {
  Vec3 v = Vec3::Zero();
  std::istringstream ss(text);
  std::string tok;
  for (int k = 0; k < 3; ++k) {
    require(static_cast<bool>(std::getline(ss, tok, ',')), "expected R,G,B");
    v(k) = std::stod(tok);
  }
  return v;
}

// --- train -----------------------------------------------------------------

struct LoadedDataset {
  ExperimentConfig cfg;
  RigSpec rig;
  std::vector<SceneFile> scenes;  // one per subject
};

LoadedDataset load_dataset(const std::string& dir, int subjects) {
  LoadedDataset ds;
  ds.cfg = load_config(dir + "/config.txt");
  ds.rig = load_rig_spec(dir + "/rig.txt");
  for (int s = 1; s <= subjects; ++s) {
    const std::string scene_path = dir + "/subjects/s" + std::to_string(s) + "/scene.txt";
    require(fs::exists(scene_path), "train: missing " + scene_path);
    ds.scenes.push_back(read_scene(scene_path));
  }
  return ds;
}

int cmd_train(const std::string& data_dir, int epochs, double lr, int subjects, uint64_t seed,
              const std::string& checkpoint_out, const std::string& config_path, bool attention,
              int threads, const std::string& trace_out) {
  LoadedDataset ds = load_dataset(data_dir, subjects);
  if (!config_path.empty()) ds.cfg = load_config(config_path);
  if (seed) ds.cfg.seed = seed;
  if (threads) ds.cfg.threads = threads;
  ds.cfg.attention = attention;

  AvatarModel model(ds.cfg, ds.rig);
  ParamStore params = init_weights(model, ds.cfg.seed);
  for (int s = 1; s <= subjects; ++s)
    params.add("identity/s" + std::to_string(s), zero_identity_map(ds.cfg.feature()));

  // Frame table with cached targets and labels (poses are fixed per frame).
  std::vector<TrainSample> table;
  for (int s = 0; s < subjects; ++s) {
    for (const SceneFrame& fr : ds.scenes[s].frames) {
      TrainSample t;
      t.pose = fr.pose;
      t.cam = fr.cam;
      t.subject = ds.scenes[s].subject;
      const LoadedImage img = read_ppm(fr.image_path);
      require(img.width == ds.cfg.image_w && img.height == ds.cfg.image_h,
              "train: image size differs from the configured render size");
      t.target = img.rgb;
      t.labels = model.detect_labels(fr.pose);
      table.push_back(std::move(t));
    }
  }
  require(!table.empty(), "train: dataset has no frames");

  AdamState state;
  state.cfg = ds.cfg.adam();
  const PerceptualBank bank = PerceptualBank::make(ds.cfg.perceptual_seed);
  std::map<int, CloudLayout> layouts;

  std::ofstream trace;
  if (!trace_out.empty()) {
    trace.open(trace_out);
    require(trace.good(), "train: cannot open trace " + trace_out);
    trace.precision(17);
    trace << "step,level,l1,perceptual,total\n";
  }

  const int coarse_epochs =
      std::min(epochs, static_cast<int>(std::ceil(ds.cfg.coarse_fraction * epochs)));
  int step = 0;
  for (int epoch = 0; epoch < epochs; ++epoch) {
    const int level = epoch < coarse_epochs ? ds.cfg.coarse_level : ds.cfg.fine_level;
    const bool level_switch = (epoch == coarse_epochs);
    if (level_switch) layouts.clear();  // re-seed the cloud from the finer mesh
    Stage1Options opt;
    opt.level = level;
    opt.lr = lr;
    opt.attention = ds.cfg.attention;
    opt.threads = ds.cfg.threads;
    opt.layouts = &layouts;
    for (const TrainSample& sample : table) {
      const StepStats st = stage1_step(model, {sample}, params, state, bank, opt);
      if (trace.is_open())
        trace << step << "," << level << "," << st.l1 << "," << st.perceptual << ","
              << st.total << "\n";
      ++step;
    }
    // Refinement once per epoch boundary.
    for (int s = 1; s <= subjects; ++s) {
      const std::string block = "identity/s" + std::to_string(s);
      const CloudLayout& cur =
          layouts.count(s) ? layouts.at(s) : model.base_layout(level);
      layouts[s] = refine_layout(model, params, block, cur, level, ds.cfg.threads);
    }
    std::cerr << "epoch " << epoch + 1 << "/" << epochs << " done (level " << level << ")\n";
  }

  ParamStore out = params;
  out.add("config/values", config_to_array(ds.cfg));
  write_checkpoint(checkpoint_out, out);
  std::cout << "wrote " << checkpoint_out << " after " << step << " steps\n";
  return 0;
}

// --- fit / animate ----------------------------------------------------------

std::pair<ParamStore, ExperimentConfig> load_model_checkpoint(const std::string& path) {
  ParamStore ps = read_checkpoint(path);
  require(ps.has("config/values"), "checkpoint: missing embedded config in " + path);
  return {ps, config_from_array(ps.at("config/values"))};
}

int cmd_fit(const std::string& checkpoint, const std::string& ref_image,
            const std::string& ref_mask, const std::string& pose_file,
            const std::string& camera_file, int steps, double lr,
            const std::string& out_identity, const std::string& rig_path, int threads,
            const std::string& trace_out) {
  auto [params, cfg] = load_model_checkpoint(checkpoint);
  if (threads) cfg.threads = threads;
  const RigSpec rig =
      rig_path.empty() ? parse_rig_spec(default_rig_spec_text()) : load_rig_spec(rig_path);
  AvatarModel model(cfg, rig);

  FitInputs in;
  const LoadedImage img = read_ppm(ref_image);
  require(img.width == cfg.image_w && img.height == cfg.image_h,
          "fit: reference size differs from the configured render size");
  in.reference = img.rgb;
  if (!ref_mask.empty()) in.mask = read_ppm_gray(ref_mask);
  in.pose = read_pose(pose_file);
  in.cam = read_camera(camera_file);
  in.steps = steps > 0 ? steps : cfg.fit_steps;
  in.lr = lr > 0 ? lr : cfg.lr_fit;
  in.level = cfg.coarse_level;
  in.threads = cfg.threads;

  const PerceptualBank bank = PerceptualBank::make(cfg.perceptual_seed);
  const FitResult fit = fit_one_shot(model, params, in, bank, cfg.loss_weights());

  ParamStore out;
  out.add("fit/identity", fit.identity);
  out.add("fit/delta_t", fit.delta_t);
  Array gain(1, 3), bias(1, 3);
  for (int k = 0; k < 3; ++k) {
    gain(0, k) = fit.gain(k);
    bias(0, k) = fit.bias(k);
  }
  out.add("fit/gain", gain);
  out.add("fit/bias", bias);
  out.add("config/values", config_to_array(cfg));
  write_checkpoint(out_identity, out);
  if (!trace_out.empty()) write_fit_trace_csv(trace_out, fit.trace);

  std::cout << "fit: " << fit.steps_run << " steps, final psnr " << fit.final_psnr
            << " dB, wall " << fit.wall_ms << " ms\n";
  return 0;
}

int cmd_animate(const std::string& checkpoint, const std::string& identity_file,
                const std::string& scene_file, const std::string& out_dir, int threads,
                const std::string& dump_cloud_dir) {
  auto [params, cfg] = load_model_checkpoint(checkpoint);
  if (threads) cfg.threads = threads;
  const ParamStore fitted = read_checkpoint(identity_file);
  const SceneFile scene = read_scene(scene_file);
  const RigSpec rig = load_rig_spec(scene.rig_path);
  AvatarModel model(cfg, rig);

  Array identity = fitted.has("fit/identity") ? fitted.at("fit/identity") : Array();
  Array delta_t = fitted.has("fit/delta_t") ? fitted.at("fit/delta_t") : Array();
  Vec3 gain = Vec3::Ones(), bias = Vec3::Zero();
  if (fitted.has("fit/gain")) gain = fitted.at("fit/gain").row(0).matrix().transpose();
  if (fitted.has("fit/bias")) bias = fitted.at("fit/bias").row(0).matrix().transpose();

  fs::create_directories(out_dir);
  if (!dump_cloud_dir.empty()) fs::create_directories(dump_cloud_dir);
  const Array ident_or_zero =
      identity.size() ? identity : zero_identity_map(cfg.feature());
  for (size_t i = 0; i < scene.frames.size(); ++i) {
    const SceneFrame& fr = scene.frames[i];
    const RenderedImage img = render_with(model, params, identity, delta_t, gain, bias, fr.pose,
                                          fr.cam, cfg.coarse_level, cfg.attention, cfg.threads);
    char name[32];
    std::snprintf(name, sizeof(name), "frame_%03zu.ppm", i);
    write_ppm((fs::path(out_dir) / name).string(), img.rgb, cfg.image_w, cfg.image_h);
    if (!dump_cloud_dir.empty()) {
      Graph g;
      ParamLeaves leaves(g, params, false);
      AvatarModel::ForwardSpec spec;
      spec.pose = fr.pose;
      spec.cam = fr.cam;
      spec.level = cfg.coarse_level;
      spec.attention = cfg.attention;
      spec.threads = cfg.threads;
      if (delta_t.size()) spec.delta_t = g.constant(delta_t);
      const auto out = model.forward(g, leaves, g.constant(ident_or_zero), spec);
      char cname[32];
      std::snprintf(cname, sizeof(cname), "frame_%03zu.gcld", i);
      write_cloud((fs::path(dump_cloud_dir) / cname).string(), model.extract_cloud(g, out));
    }
    if (!fr.image_path.empty() && fs::exists(fr.image_path)) {
      const LoadedImage gt = read_ppm(fr.image_path);
      std::cout << "frame " << i << " psnr " << psnr(img.rgb, gt.rgb) << " dB\n";
    }
  }
  std::cout << "wrote " << scene.frames.size() << " frames to " << out_dir << "\n";
  return 0;
}

// --- render / detect ---------------------------------------------------------

int cmd_render(int width, int height, const std::string& bg, const std::string& camera_file,
               const std::string& cloud_file, const std::string& out, int threads) {
  const GaussianCloud cloud = read_cloud(cloud_file);
  const Camera cam = read_camera(camera_file);
  RenderParams<double> rp;
  rp.width = width;
  rp.height = height;
  rp.background = parse_rgb(bg);
  rp.threads = threads;
  const RenderedImage img = render<double>(cloud.splats(), cam, rp);
  write_ppm(out, img.rgb, width, height);
  std::cout << "wrote " << out << " (" << width << "x" << height << ", culled " << img.culled
            << ")\n";
  return 0;
}

int cmd_detect(const std::string& scene_file, int frame, const std::string& out_labels,
               const std::string& out_obj, const std::string& config_path, int threads) {
  const SceneFile scene = read_scene(scene_file);
  require(frame >= 0 && frame < static_cast<int>(scene.frames.size()),
          "detect: frame index out of range");
  ExperimentConfig cfg = config_from_flags(config_path, 0, threads);
  AvatarModel model(cfg, load_rig_spec(scene.rig_path));
  const InteractionLabels labels = model.detect_labels(scene.frames[frame].pose);
  write_labels(out_labels, labels);
  std::cout << "flagged " << labels.flagged_total() << " of " << labels.count()
            << " points (left " << labels.flagged_left << ", right " << labels.flagged_right
            << ")\n";
  if (!out_obj.empty()) {
    const HandMesh posed = pose_mesh(model.detect_mesh(), model.rig(), scene.frames[frame].pose);
    std::vector<Vec3> colors(posed.vertex_count());
    for (Index i = 0; i < posed.vertex_count(); ++i)
      colors[i] = labels.flags[i] ? Vec3(1.0, 0.15, 0.15) : Vec3(0.7, 0.7, 0.7);
    write_obj(out_obj, posed, &colors);
    std::cout << "wrote " << out_obj << "\n";
  }
  return 0;
}

// --- bench ---------------------------------------------------------------------

int cmd_bench(int gaussians, int width, int height, int threads, int detect_points,
              const std::string& out_csv) {
  std::ostringstream csv;
  csv << "op,count,width,height,threads,wall_ms\n";

  DetRng rng(12345);
  // Random splat cloud in front of a camera.
  auto make_cloud = [&](Index n) {
    SplatArrays<float> s;
    s.means.resize(n, 3);
    s.log_scales.resize(n, 3);
    s.quats.resize(n, 4);
    s.opacities.resize(n);
    s.colors.resize(n, 3);
    for (Index i = 0; i < n; ++i) {
      s.means.row(i) << 0.3 * rng.normal(), 0.3 * rng.normal(), 1.0 + 0.3 * rng.uniform();
      for (int a = 0; a < 3; ++a) s.log_scales(i, a) = std::log(0.004) + 0.2 * rng.normal();
      Eigen::Vector4f q(1.0f + float(rng.normal()), float(rng.normal()), float(rng.normal()),
                        float(rng.normal()));
      s.quats.row(i) = (q / q.norm()).transpose().array();
      s.opacities(i) = 0.3f + 0.6f * float(rng.uniform());
      for (int a = 0; a < 3; ++a) s.colors(i, a) = float(rng.uniform());
    }
    return s;
  };
  const SplatArrays<float> cloud = make_cloud(gaussians);
  Camera cam;
  cam.intrinsics << 1.2 * width, 0, 0.5 * width, 0, 1.2 * width, 0.5 * height, 0, 0, 1;
  RenderParams<float> rp;
  rp.width = width;
  rp.height = height;
  rp.threads = threads;

  // Projection alone, then the full forward pass.
  {
    const double t0 = now_ms();
    int culled = 0;
    auto proj = detail::project_all<float>(cloud, cam, &culled);
    const double t1 = now_ms();
    csv << "render_project," << gaussians << "," << width << "," << height << "," << threads
        << "," << (t1 - t0) << "\n";
  }
  {
    render<float>(cloud, cam, rp);  // warm caches
    const double t0 = now_ms();
    const auto img = render<float>(cloud, cam, rp);
    const double t1 = now_ms();
    csv << "render_forward_f32," << gaussians << "," << width << "," << height << "," << threads
        << "," << (t1 - t0) << "\n";
    std::cout << "render " << gaussians << " gaussians at " << width << "x" << height << " ("
              << threads << " threads): " << (t1 - t0) << " ms, mean contributors "
              << img.contributors.cast<double>().mean() << "\n";
  }
  {
    SplatArrays<double> cd;
    cd.means = cloud.means.cast<double>();
    cd.log_scales = cloud.log_scales.cast<double>();
    cd.quats = cloud.quats.cast<double>();
    cd.opacities = cloud.opacities.cast<double>();
    cd.colors = cloud.colors.cast<double>();
    RenderParams<double> rpd;
    rpd.width = width;
    rpd.height = height;
    rpd.threads = threads;
    const double t0 = now_ms();
    render<double>(cd, cam, rpd);
    const double t1 = now_ms();
    csv << "render_forward_f64," << gaussians << "," << width << "," << height << "," << threads
        << "," << (t1 - t0) << "\n";
    const Eigen::Array<double, Eigen::Dynamic, 3> drgb =
        Eigen::Array<double, Eigen::Dynamic, 3>::Constant(width * height, 3, 1.0);
    const Eigen::Array<double, Eigen::Dynamic, 1> dsil =
        Eigen::Array<double, Eigen::Dynamic, 1>::Constant(width * height, 1, 1.0);
    const double t2 = now_ms();
    render_backward<double>(cd, cam, rpd, drgb, dsil);
    const double t3 = now_ms();
    csv << "render_backward_f64," << gaussians << "," << width << "," << height << "," << threads
        << "," << (t3 - t2) << "\n";
  }

  // Interaction detection: accelerated vs brute force.
  {
    ArrayX3 canon(detect_points, 3), posed(detect_points, 3);
    std::vector<int> sides(detect_points);
    for (Index i = 0; i < detect_points; ++i) {
      canon.row(i) << rng.normal(), rng.normal(), rng.normal();
      posed.row(i) = canon.row(i) + 0.05 * rng.normal();
      sides[i] = i % 2;
    }
    DetectionConfig dc;
    dc.n_canonical = dc.n_posed = std::min(100, detect_points);
    dc.threshold = std::min(90, 2 * dc.n_canonical - 1);
    const double t0 = now_ms();
    const auto fast = detect_interactions(canon, posed, sides, dc, threads);
    const double t1 = now_ms();
    csv << "detect_grid," << detect_points << ",,," << threads << "," << (t1 - t0) << "\n";
    const double t2 = now_ms();
    const auto slow = brute_force_detect(canon, posed, sides, dc);
    const double t3 = now_ms();
    csv << "detect_brute," << detect_points << ",,,1," << (t3 - t2) << "\n";
    require(fast.flags == slow.flags, "bench: detector mismatch");
    std::cout << "detect " << detect_points << " points: grid " << (t1 - t0) << " ms, brute "
              << (t3 - t2) << " ms\n";
  }

  if (!out_csv.empty()) {
    std::ofstream f(out_csv);
    require(f.good(), "bench: cannot open " + out_csv);
    f << csv.str();
    std::cout << "wrote " << out_csv << "\n";
  } else {
    std::cout << csv.str();
  }
  return 0;
}

}  // namespace

// gradcheck lives in a separate translation unit section for clarity.
#include "gradcheck_impl.hpp"

int main(int argc, char** argv) {
  CLI::App app{"interacting-hands gaussian splatting avatar toolkit"};
  app.require_subcommand(1);

  // gen-data
  auto* gen = app.add_subcommand("gen-data", "synthesize a self-consistent dataset");
  std::string gen_out = "dataset";
  int gen_subjects = 3, gen_poses = 4;
  uint64_t gen_seed = 1;
  std::string gen_config;
  int gen_threads = 0;
  gen->add_option("--out", gen_out, "output directory");
  gen->add_option("--subjects", gen_subjects, "number of subjects");
  gen->add_option("--poses", gen_poses, "poses per subject (4 cameras each)");
  gen->add_option("--seed", gen_seed, "RNG seed");
  gen->add_option("--config", gen_config, "experiment config file");
  gen->add_option("--threads", gen_threads, "worker threads");

  // train
  auto* train = app.add_subcommand("train", "stage-one training of weights + identity maps");
  std::string tr_data, tr_ckpt = "checkpoint.igsn", tr_config, tr_trace;
  int tr_epochs = 4, tr_subjects = 3, tr_threads = 0;
  double tr_lr = 1e-4;
  uint64_t tr_seed = 0;
  bool tr_no_attention = false;
  train->add_option("--data-dir", tr_data, "dataset directory")->required();
  train->add_option("--epochs", tr_epochs, "training epochs");
  train->add_option("--lr", tr_lr, "learning rate");
  train->add_option("--subjects", tr_subjects, "subject count");
  train->add_option("--seed", tr_seed, "weight init seed (0 = config)");
  train->add_option("--checkpoint-out", tr_ckpt, "output checkpoint");
  train->add_option("--config", tr_config, "experiment config override");
  train->add_option("--trace-out", tr_trace, "loss trace CSV");
  train->add_option("--threads", tr_threads, "worker threads");
  train->add_flag("--no-attention", tr_no_attention, "disable interaction attention");

  // fit
  auto* fit = app.add_subcommand("fit", "one-shot identity fitting from a reference image");
  std::string f_ckpt, f_img, f_mask, f_pose, f_cam, f_out = "identity.igsn", f_rig, f_trace;
  int f_steps = 0, f_threads = 0;
  double f_lr = 0;
  fit->add_option("--checkpoint", f_ckpt, "trained checkpoint")->required();
  fit->add_option("--ref-image", f_img, "reference PPM")->required();
  fit->add_option("--ref-mask", f_mask, "reference mask PPM (optional)");
  fit->add_option("--pose-file", f_pose, "pose parameters")->required();
  fit->add_option("--camera-file", f_cam, "camera file")->required();
  fit->add_option("--steps", f_steps, "fitting steps (0 = config default)");
  fit->add_option("--lr", f_lr, "learning rate (0 = config default)");
  fit->add_option("--out-identity", f_out, "output identity container");
  fit->add_option("--rig", f_rig, "rig spec (default: built-in rig)");
  fit->add_option("--threads", f_threads, "worker threads");
  fit->add_option("--trace-out", f_trace, "loss trace CSV");

  // animate
  auto* anim = app.add_subcommand("animate", "render a pose sequence from a fitted avatar");
  std::string a_ckpt, a_identity, a_scene, a_out = "animation", a_clouds;
  int a_threads = 0;
  anim->add_option("--checkpoint", a_ckpt, "trained checkpoint")->required();
  anim->add_option("--identity", a_identity, "fitted identity container")->required();
  anim->add_option("--scene", a_scene, "scene file with poses and cameras")->required();
  anim->add_option("--out-dir", a_out, "output directory");
  anim->add_option("--threads", a_threads, "worker threads");
  anim->add_option("--dump-cloud-dir", a_clouds, "also write per-frame GCLD snapshots");

  // render
  auto* ren = app.add_subcommand("render", "rasterize a gaussian cloud snapshot");
  int r_w = 256, r_h = 256, r_threads = 2;
  std::string r_bg = "0,0,0", r_cam, r_cloud, r_out = "render.ppm";
  ren->add_option("--width", r_w, "image width");
  ren->add_option("--height", r_h, "image height");
  ren->add_option("--bg", r_bg, "background R,G,B");
  ren->add_option("--camera-file", r_cam, "camera file")->required();
  ren->add_option("--cloud-file", r_cloud, "GCLD cloud snapshot")->required();
  ren->add_option("--out", r_out, "output PPM");
  ren->add_option("--threads", r_threads, "worker threads");

  // detect
  auto* det = app.add_subcommand("detect", "interaction labels for a scene frame");
  std::string d_scene, d_labels = "labels.ihlb", d_obj, d_config;
  int d_frame = 0, d_threads = 0;
  det->add_option("--scene", d_scene, "scene file")->required();
  det->add_option("--frame", d_frame, "frame index");
  det->add_option("--out-labels", d_labels, "output label file");
  det->add_option("--out-obj", d_obj, "optional color-coded OBJ");
  det->add_option("--config", d_config, "experiment config");
  det->add_option("--threads", d_threads, "worker threads");

  // gradcheck
  auto* gc = app.add_subcommand("gradcheck", "finite-difference gradient suite");
  uint64_t gc_seed = 1;
  int gc_scenes = 20;
  gc->add_option("--seed", gc_seed, "RNG seed");
  gc->add_option("--scenes", gc_scenes, "random scenes for the render check");

  // bench
  auto* be = app.add_subcommand("bench", "timing benchmarks with CSV evidence");
  int b_gaussians = 100000, b_w = 256, b_h = 256, b_threads = 8, b_points = 5000;
  std::string b_csv;
  be->add_option("--gaussians", b_gaussians, "splat count");
  be->add_option("--width", b_w, "image width");
  be->add_option("--height", b_h, "image height");
  be->add_option("--threads", b_threads, "worker threads");
  be->add_option("--detect-points", b_points, "detection benchmark point count");
  be->add_option("--out", b_csv, "CSV output path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      const ExperimentConfig cfg = config_from_flags(gen_config, gen_seed, gen_threads);
      const DatasetSummary s = gen_synthetic_dataset(cfg, gen_out, gen_subjects, gen_poses,
                                                     gen_seed);
      std::cout << "dataset: " << s.subjects << " subjects, " << s.frames << " frames, "
                << s.interacting_frames << " interacting ("
                << s.interacting_frames_with_contact << " with d=1 points)\n";
      return 0;
    }
    if (*train)
      return cmd_train(tr_data, tr_epochs, tr_lr, tr_subjects, tr_seed, tr_ckpt, tr_config,
                       !tr_no_attention, tr_threads, tr_trace);
    if (*fit)
      return cmd_fit(f_ckpt, f_img, f_mask, f_pose, f_cam, f_steps, f_lr, f_out, f_rig,
                     f_threads, f_trace);
    if (*anim) return cmd_animate(a_ckpt, a_identity, a_scene, a_out, a_threads, a_clouds);
    if (*ren) return cmd_render(r_w, r_h, r_bg, r_cam, r_cloud, r_out, r_threads);
    if (*det) return cmd_detect(d_scene, d_frame, d_labels, d_obj, d_config, d_threads);
    if (*gc) return cmd_gradcheck(gc_seed, gc_scenes);
    if (*be) return cmd_bench(b_gaussians, b_w, b_h, b_threads, b_points, b_csv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
