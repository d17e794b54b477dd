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

#include "igs/config.hpp"

#include <fstream>
#include <functional>
#include <sstream>

namespace igs {

FeatureConfig ExperimentConfig::feature() const {
  FeatureConfig f;
  f.channels = channels;
  f.pose_dim = pose_dim;
  f.gamma_bands = gamma_bands;
  f.map_h = map_h;
  f.map_w = map_w;
  f.hidden = hidden;
  f.tex_hidden = tex_hidden;
  f.head_hidden = head_hidden;
  f.offset_clamp = offset_clamp;
  f.base_log_scale = base_log_scale;
  return f;
}

DetectionConfig ExperimentConfig::detection() const {
  DetectionConfig d;
  d.n_canonical = n_canonical;
  d.n_posed = n_posed;
  d.threshold = threshold;
  return d;
}

RefinementConfig ExperimentConfig::refinement() const {
  RefinementConfig r;
  r.prune_threshold = prune_threshold;
  r.split_threshold = split_threshold;
  r.max_split_fraction = max_split_fraction;
  r.offset_clamp = offset_clamp;
  return r;
}

LossWeights ExperimentConfig::loss_weights() const {
  LossWeights lw;
  lw.rgb = w_rgb;
  lw.perceptual = w_perceptual;
  lw.mask = w_mask;
  lw.reg = w_reg;
  return lw;
}

AdamConfig ExperimentConfig::adam() const {
  AdamConfig a;
  a.beta1 = adam_beta1;
  a.beta2 = adam_beta2;
  a.eps = adam_eps;
  return a;
}

void ExperimentConfig::validate() const {
  require(channels >= 1 && channels % 1 == 0, "config: channels must be positive");
  require(pose_dim >= 1 && gamma_bands >= 1, "config: encoder widths must be positive");
  require(map_h >= 2 && map_w >= 2, "config: identity map too small");
  require(n_canonical >= 1 && n_posed >= 1, "config: neighbor counts must be positive");
  require(threshold >= 0 && threshold <= n_canonical + n_posed,
          "config: detection threshold out of range");
  refinement().validate();
  require(w_rgb >= 0 && w_perceptual >= 0 && w_mask >= 0 && w_reg >= 0,
          "config: loss weights must be nonnegative");
  require(lr_stage1 >= 0 && lr_fit >= 0 && fit_steps >= 0, "config: bad optimizer settings");
  require(image_w >= 16 && image_h >= 16 && image_w % 2 == 0 && image_h % 2 == 0,
          "config: image sides must be even and at least 16");
  require(detect_level >= 0 && coarse_level >= detect_level && fine_level >= coarse_level,
          "config: mesh levels must be ordered detect <= coarse <= fine");
  require(coarse_fraction >= 0.0 && coarse_fraction <= 1.0, "config: bad coarse fraction");
  require(threads >= 1, "config: threads must be positive");
  require(offset_clamp > 0.0, "config: offset clamp must be positive");
}

namespace {

struct Field {
  const char* key;
  std::function<double(const ExperimentConfig&)> get;
  std::function<void(ExperimentConfig&, double)> set;
  const char* provenance;
};

const std::vector<Field>& fields() {
  static const std::vector<Field> f = {
      {"channels", [](const ExperimentConfig& c) { return double(c.channels); },
       [](ExperimentConfig& c, double v) { c.channels = int(v); }, "chosen (desk scale)"},
      {"pose_dim", [](const ExperimentConfig& c) { return double(c.pose_dim); },
       [](ExperimentConfig& c, double v) { c.pose_dim = int(v); }, "chosen (desk scale)"},
      {"gamma_bands", [](const ExperimentConfig& c) { return double(c.gamma_bands); },
       [](ExperimentConfig& c, double v) { c.gamma_bands = int(v); }, "chosen (desk scale)"},
      {"map_h", [](const ExperimentConfig& c) { return double(c.map_h); },
       [](ExperimentConfig& c, double v) { c.map_h = int(v); }, "chosen (desk scale)"},
      {"map_w", [](const ExperimentConfig& c) { return double(c.map_w); },
       [](ExperimentConfig& c, double v) { c.map_w = int(v); }, "chosen (desk scale)"},
      {"hidden", [](const ExperimentConfig& c) { return double(c.hidden); },
       [](ExperimentConfig& c, double v) { c.hidden = int(v); }, "chosen (desk scale)"},
      {"tex_hidden", [](const ExperimentConfig& c) { return double(c.tex_hidden); },
       [](ExperimentConfig& c, double v) { c.tex_hidden = int(v); }, "chosen (desk scale)"},
      {"head_hidden", [](const ExperimentConfig& c) { return double(c.head_hidden); },
       [](ExperimentConfig& c, double v) { c.head_hidden = int(v); }, "chosen (desk scale)"},
      {"offset_clamp", [](const ExperimentConfig& c) { return c.offset_clamp; },
       [](ExperimentConfig& c, double v) { c.offset_clamp = v; }, "chosen (5 mm)"},
      {"base_log_scale", [](const ExperimentConfig& c) { return c.base_log_scale; },
       [](ExperimentConfig& c, double v) { c.base_log_scale = v; }, "chosen (~3 mm splats)"},
      {"n_canonical", [](const ExperimentConfig& c) { return double(c.n_canonical); },
       [](ExperimentConfig& c, double v) { c.n_canonical = int(v); }, "literature (N_c = 100)"},
      {"n_posed", [](const ExperimentConfig& c) { return double(c.n_posed); },
       [](ExperimentConfig& c, double v) { c.n_posed = int(v); }, "chosen (= N_c)"},
      {"threshold", [](const ExperimentConfig& c) { return double(c.threshold); },
       [](ExperimentConfig& c, double v) { c.threshold = int(v); }, "literature (T = 90)"},
      {"prune_threshold", [](const ExperimentConfig& c) { return c.prune_threshold; },
       [](ExperimentConfig& c, double v) { c.prune_threshold = v; }, "literature (T_d = 0.1)"},
      {"split_threshold", [](const ExperimentConfig& c) { return c.split_threshold; },
       [](ExperimentConfig& c, double v) { c.split_threshold = v; }, "literature (T_s = 0.9)"},
      {"max_split_fraction", [](const ExperimentConfig& c) { return c.max_split_fraction; },
       [](ExperimentConfig& c, double v) { c.max_split_fraction = v; }, "chosen (memory bound)"},
      {"w_rgb", [](const ExperimentConfig& c) { return c.w_rgb; },
       [](ExperimentConfig& c, double v) { c.w_rgb = v; }, "literature (10.0)"},
      {"w_perceptual", [](const ExperimentConfig& c) { return c.w_perceptual; },
       [](ExperimentConfig& c, double v) { c.w_perceptual = v; }, "literature (0.1)"},
      {"w_mask", [](const ExperimentConfig& c) { return c.w_mask; },
       [](ExperimentConfig& c, double v) { c.w_mask = v; }, "literature (1.0)"},
      {"w_reg", [](const ExperimentConfig& c) { return c.w_reg; },
       [](ExperimentConfig& c, double v) { c.w_reg = v; }, "literature (0.01)"},
      {"lr_stage1", [](const ExperimentConfig& c) { return c.lr_stage1; },
       [](ExperimentConfig& c, double v) { c.lr_stage1 = v; }, "literature (1e-4)"},
      {"lr_fit", [](const ExperimentConfig& c) { return c.lr_fit; },
       [](ExperimentConfig& c, double v) { c.lr_fit = v; }, "literature (1e-2)"},
      {"fit_steps", [](const ExperimentConfig& c) { return double(c.fit_steps); },
       [](ExperimentConfig& c, double v) { c.fit_steps = int(v); }, "literature (50 steps)"},
      {"adam_beta1", [](const ExperimentConfig& c) { return c.adam_beta1; },
       [](ExperimentConfig& c, double v) { c.adam_beta1 = v; }, "chosen (community default)"},
      {"adam_beta2", [](const ExperimentConfig& c) { return c.adam_beta2; },
       [](ExperimentConfig& c, double v) { c.adam_beta2 = v; }, "chosen (community default)"},
      {"adam_eps", [](const ExperimentConfig& c) { return c.adam_eps; },
       [](ExperimentConfig& c, double v) { c.adam_eps = v; }, "chosen (community default)"},
      {"image_w", [](const ExperimentConfig& c) { return double(c.image_w); },
       [](ExperimentConfig& c, double v) { c.image_w = int(v); }, "chosen (desk scale)"},
      {"image_h", [](const ExperimentConfig& c) { return double(c.image_h); },
       [](ExperimentConfig& c, double v) { c.image_h = int(v); }, "chosen (desk scale)"},
      {"bg_r", [](const ExperimentConfig& c) { return c.bg_r; },
       [](ExperimentConfig& c, double v) { c.bg_r = v; }, "chosen (black background)"},
      {"bg_g", [](const ExperimentConfig& c) { return c.bg_g; },
       [](ExperimentConfig& c, double v) { c.bg_g = v; }, "chosen (black background)"},
      {"bg_b", [](const ExperimentConfig& c) { return c.bg_b; },
       [](ExperimentConfig& c, double v) { c.bg_b = v; }, "chosen (black background)"},
      {"detect_level", [](const ExperimentConfig& c) { return double(c.detect_level); },
       [](ExperimentConfig& c, double v) { c.detect_level = int(v); }, "chosen (coarse labels)"},
      {"coarse_level", [](const ExperimentConfig& c) { return double(c.coarse_level); },
       [](ExperimentConfig& c, double v) { c.coarse_level = int(v); }, "chosen (coarse-to-fine)"},
      {"fine_level", [](const ExperimentConfig& c) { return double(c.fine_level); },
       [](ExperimentConfig& c, double v) { c.fine_level = int(v); }, "chosen (coarse-to-fine)"},
      {"coarse_fraction", [](const ExperimentConfig& c) { return c.coarse_fraction; },
       [](ExperimentConfig& c, double v) { c.coarse_fraction = v; }, "chosen (5/8 of epochs)"},
      {"seed", [](const ExperimentConfig& c) { return double(c.seed); },
       [](ExperimentConfig& c, double v) { c.seed = uint64_t(v); }, "chosen (run control)"},
      {"perceptual_seed", [](const ExperimentConfig& c) { return double(c.perceptual_seed); },
       [](ExperimentConfig& c, double v) { c.perceptual_seed = uint64_t(v); },
       "chosen (fixed filter bank)"},
      {"threads", [](const ExperimentConfig& c) { return double(c.threads); },
       [](ExperimentConfig& c, double v) { c.threads = int(v); }, "chosen (run control)"},
      {"attention", [](const ExperimentConfig& c) { return c.attention ? 1.0 : 0.0; },
       [](ExperimentConfig& c, double v) { c.attention = v != 0.0; }, "chosen (ablation switch)"},
  };
  return f;
}

}  // namespace

std::string ExperimentConfig::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "# experiment configuration (value  provenance)\n";
  for (const auto& f : fields()) os << f.key << " " << f.get(*this) << "  # " << f.provenance << "\n";
  return os.str();
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "config: cannot open " + path);
  ExperimentConfig cfg;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ss(line);
    std::string key;
    double value;
    if (!(ss >> key)) continue;
    require(static_cast<bool>(ss >> value), "config: missing value for key " + key);
    bool known = false;
    for (const auto& f : fields())
      if (key == f.key) {
        f.set(cfg, value);
        known = true;
        break;
      }
    require(known, "config: unknown key '" + key + "' in " + path);
  }
  cfg.validate();
  return cfg;
}

void save_config(const std::string& path, const ExperimentConfig& cfg) {
  std::ofstream out(path);
  require(out.good(), "config: cannot open " + path);
  out << cfg.describe();
}

Array config_to_array(const ExperimentConfig& cfg) {
  const auto& fs = fields();
  Array out(1, static_cast<Index>(fs.size()));
  for (size_t i = 0; i < fs.size(); ++i) out(0, static_cast<Index>(i)) = fs[i].get(cfg);
  return out;
}

ExperimentConfig config_from_array(const Array& values) {
  const auto& fs = fields();
  require(values.rows() == 1 && values.cols() == static_cast<Index>(fs.size()),
          "config: embedded config block has the wrong field count");
  ExperimentConfig cfg;
  for (size_t i = 0; i < fs.size(); ++i) fs[i].set(cfg, values(0, static_cast<Index>(i)));
  cfg.validate();
  return cfg;
}

}  // namespace igs
