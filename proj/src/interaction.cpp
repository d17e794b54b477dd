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

#include "igs/interaction.hpp"

#include <fstream>

#include "igs/rig.hpp"

namespace igs {

namespace {

void check_inputs(const ArrayX3& canonical, const ArrayX3& posed, const std::vector<int>& sides,
                  const DetectionConfig& cfg) {
  require(canonical.rows() == posed.rows(),
          "detect: canonical and posed point lists are misaligned");
  require(static_cast<Index>(sides.size()) == canonical.rows(), "detect: side list misaligned");
  require(canonical.rows() >= 1, "detect: empty point set");
  require(cfg.n_canonical >= 1 && cfg.n_canonical <= canonical.rows(),
          "detect: N_c out of range");
  require(cfg.n_posed >= 1 && cfg.n_posed <= canonical.rows(), "detect: N_p out of range");
  require(cfg.threshold >= 0 && cfg.threshold <= cfg.n_canonical + cfg.n_posed,
          "detect: threshold out of range");
}

/// |A u B| - |A n B| over sorted index sets.
int symmetric_difference_size(const std::vector<int>& a, const std::vector<int>& b) {
  size_t i = 0, j = 0;
  int inter = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) {
      ++inter;
      ++i;
      ++j;
    } else if (a[i] < b[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  const int uni = static_cast<int>(a.size() + b.size()) - inter;
  return uni - inter;
}

bool posed_neighbors_cross_hands(const std::vector<int>& nb, const std::vector<int>& sides) {
  bool l = false, r = false;
  for (int i : nb) (sides[i] == kLeft ? l : r) = true;
  return l && r;
}

InteractionLabels tally(const ArrayX3& canonical, std::vector<uint8_t> flags,
                        std::vector<uint8_t> cross, const std::vector<int>& sides) {
  InteractionLabels out;
  out.flags = std::move(flags);
  for (Index i = 0; i < canonical.rows(); ++i) {
    if (!out.flags[i]) continue;
    (sides[i] == kLeft ? out.flagged_left : out.flagged_right) += 1;
    if (cross[i]) ++out.flagged_cross;
  }
  return out;
}

}  // namespace

InteractionLabels detect_interactions(const ArrayX3& canonical, const ArrayX3& posed,
                                      const std::vector<int>& sides, const DetectionConfig& cfg,
                                      int threads) {
  check_inputs(canonical, posed, sides, cfg);
  const NeighborIndex canon_index(canonical);
  const NeighborIndex posed_index(posed);
  const Index n = canonical.rows();
  std::vector<uint8_t> flags(n, 0), cross(n, 0);
  parallel_for(static_cast<int>(n), threads, [&](int i) {
    const auto wc = canon_index.neighbors(canonical.row(i).matrix().transpose(), cfg.n_canonical);
    const auto wp = posed_index.neighbors(posed.row(i).matrix().transpose(), cfg.n_posed);
    if (symmetric_difference_size(wc, wp) > cfg.threshold) {
      flags[i] = 1;
      cross[i] = posed_neighbors_cross_hands(wp, sides) ? 1 : 0;
    }
  });
  return tally(canonical, std::move(flags), std::move(cross), sides);
}

InteractionLabels brute_force_detect(const ArrayX3& canonical, const ArrayX3& posed,
                                     const std::vector<int>& sides, const DetectionConfig& cfg) {
  check_inputs(canonical, posed, sides, cfg);
  const Index n = canonical.rows();
  std::vector<uint8_t> flags(n, 0), cross(n, 0);
  for (Index i = 0; i < n; ++i) {
    const auto wc =
        brute_force_neighbors(canonical, canonical.row(i).matrix().transpose(), cfg.n_canonical);
    const auto wp = brute_force_neighbors(posed, posed.row(i).matrix().transpose(), cfg.n_posed);
    if (symmetric_difference_size(wc, wp) > cfg.threshold) {
      flags[i] = 1;
      cross[i] = posed_neighbors_cross_hands(wp, sides) ? 1 : 0;
    }
  }
  return tally(canonical, std::move(flags), std::move(cross), sides);
}

void write_labels(const std::string& path, const InteractionLabels& labels) {
  std::ofstream f(path, std::ios::binary);
  require(f.good(), "labels: cannot open " + path);
  f.write("IHLB", 4);
  const uint32_t count = static_cast<uint32_t>(labels.flags.size());
  f.write(reinterpret_cast<const char*>(&count), 4);
  f.write(reinterpret_cast<const char*>(labels.flags.data()),
          static_cast<std::streamsize>(labels.flags.size()));
  require(f.good(), "labels: write failed for " + path);
}

InteractionLabels read_labels(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  require(f.good(), "labels: cannot open " + path);
  char magic[4];
  f.read(magic, 4);
  require(f.good() && std::string(magic, 4) == "IHLB", "labels: bad magic in " + path);
  uint32_t count = 0;
  f.read(reinterpret_cast<char*>(&count), 4);
  InteractionLabels out;
  out.flags.resize(count);
  f.read(reinterpret_cast<char*>(out.flags.data()), count);
  require(f.good(), "labels: truncated file " + path);
  for (uint8_t b : out.flags) require(b <= 1, "labels: flag byte out of range");
  return out;
}

}  // namespace igs
