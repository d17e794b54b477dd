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

#include "igs/nn.hpp"

#include <fstream>

namespace igs {

void ParamStore::add(const std::string& name, Array value) {
  require(!blocks_.count(name), "params: duplicate block " + name);
  require(value.allFinite(), "params: non-finite init for " + name);
  blocks_[name] = std::move(value);
}

const Array& ParamStore::at(const std::string& name) const {
  auto it = blocks_.find(name);
  require(it != blocks_.end(), "params: missing block " + name);
  return it->second;
}

Array& ParamStore::at(const std::string& name) {
  auto it = blocks_.find(name);
  require(it != blocks_.end(), "params: missing block " + name);
  return it->second;
}

void ParamStore::set(const std::string& name, Array value) {
  blocks_[name] = std::move(value);
}

std::vector<std::string> ParamStore::names() const {
  std::vector<std::string> out;
  out.reserve(blocks_.size());
  for (const auto& [k, v] : blocks_) out.push_back(k);
  return out;
}

uint64_t ParamStore::checksum() const {
  uint64_t h = 0xcbf29ce484222325ull;
  for (const auto& [name, arr] : blocks_) {
    h = fnv1a(name.data(), name.size(), h);
    h = fnv1a(arr.data(), sizeof(double) * arr.size(), h);
  }
  return h;
}

int ParamLeaves::id(const std::string& name) {
  auto it = ids_.find(name);
  if (it != ids_.end()) return it->second;
  const int node =
      trainable_ ? graph_->leaf(store_->at(name)) : graph_->constant(store_->at(name));
  ids_[name] = node;
  return node;
}

std::map<std::string, Array> ParamLeaves::collect_gradients() {
  std::map<std::string, Array> out;
  if (!trainable_) return out;
  for (const auto& [name, node] : ids_) out[name] = graph_->grad(node);
  return out;
}

namespace {

Array random_matrix(Index rows, Index cols, double scale, DetRng& rng) {
  Array a(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) a(i, j) = scale * rng.normal();
  return a;
}

}  // namespace

void init_mlp3(ParamStore& store, const std::string& prefix, int in, int hidden, int out,
               DetRng& rng) {
  store.add(prefix + "/W1", random_matrix(in, hidden, 1.0 / std::sqrt(in), rng));
  store.add(prefix + "/b1", Array::Zero(1, hidden));
  store.add(prefix + "/W2", random_matrix(hidden, hidden, 1.0 / std::sqrt(hidden), rng));
  store.add(prefix + "/b2", Array::Zero(1, hidden));
  store.add(prefix + "/W3", random_matrix(hidden, out, 1.0 / std::sqrt(hidden), rng));
  store.add(prefix + "/b3", Array::Zero(1, out));
}

int mlp3_forward(Graph& g, ParamLeaves& leaves, const std::string& prefix, int x) {
  int h = tanh_op(g, add_rowvec(g, matmul(g, x, leaves.id(prefix + "/W1")),
                                leaves.id(prefix + "/b1")));
  h = tanh_op(g, add_rowvec(g, matmul(g, h, leaves.id(prefix + "/W2")),
                            leaves.id(prefix + "/b2")));
  return add_rowvec(g, matmul(g, h, leaves.id(prefix + "/W3")), leaves.id(prefix + "/b3"));
}

void init_linear(ParamStore& store, const std::string& prefix, int in, int out, DetRng& rng) {
  store.add(prefix + "/W", random_matrix(in, out, 1.0 / std::sqrt(in), rng));
  store.add(prefix + "/b", Array::Zero(1, out));
}

int linear_forward(Graph& g, ParamLeaves& leaves, const std::string& prefix, int x) {
  return add_rowvec(g, matmul(g, x, leaves.id(prefix + "/W")), leaves.id(prefix + "/b"));
}

AdamState::Moments& AdamState::slot(const std::string& name, Index rows, Index cols) {
  auto it = slots_.find(name);
  if (it == slots_.end()) {
    Moments mo;
    mo.m = Array::Zero(rows, cols);
    mo.v = Array::Zero(rows, cols);
    it = slots_.emplace(name, std::move(mo)).first;
  }
  require(it->second.m.rows() == rows && it->second.m.cols() == cols,
          "adam: moment shape mismatch for " + name);
  return it->second;
}

void adam_update(Array& param, const Array& grad, AdamState::Moments& st, const AdamConfig& cfg,
                 double lr) {
  require(param.rows() == grad.rows() && param.cols() == grad.cols(),
          "adam: parameter/gradient shape mismatch");
  st.step += 1;
  st.m = cfg.beta1 * st.m + (1.0 - cfg.beta1) * grad;
  st.v = cfg.beta2 * st.v + (1.0 - cfg.beta2) * grad.square();
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(st.step));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(st.step));
  param -= lr * (st.m / bc1) / ((st.v / bc2).sqrt() + cfg.eps);
}

std::vector<std::string> adam_apply(ParamStore& params, const std::map<std::string, Array>& grads,
                                    AdamState& state, double lr) {
  std::vector<std::string> skipped;
  for (const auto& [name, grad] : grads) {
    if (!grad.allFinite()) {
      skipped.push_back(name);
      continue;
    }
    Array& p = params.at(name);
    adam_update(p, grad, state.slot(name, p.rows(), p.cols()), state.cfg, lr);
  }
  return skipped;
}

// Checkpoint layout: "IGSN" | u32 version | u32 block count | per block:
// u32 name_len, name bytes, u64 rows, u64 cols, f64 row-major payload.
// Little-endian throughout.

namespace {
constexpr uint32_t kCheckpointVersion = 1;
}

void write_checkpoint(const std::string& path, const ParamStore& store) {
  std::ofstream f(path, std::ios::binary);
  require(f.good(), "checkpoint: cannot open " + path);
  f.write("IGSN", 4);
  const uint32_t version = kCheckpointVersion;
  f.write(reinterpret_cast<const char*>(&version), 4);
  const uint32_t count = static_cast<uint32_t>(store.size());
  f.write(reinterpret_cast<const char*>(&count), 4);
  for (const auto& name : store.names()) {
    const Array& a = store.at(name);
    const uint32_t len = static_cast<uint32_t>(name.size());
    f.write(reinterpret_cast<const char*>(&len), 4);
    f.write(name.data(), len);
    const uint64_t rows = static_cast<uint64_t>(a.rows());
    const uint64_t cols = static_cast<uint64_t>(a.cols());
    f.write(reinterpret_cast<const char*>(&rows), 8);
    f.write(reinterpret_cast<const char*>(&cols), 8);
    for (Index i = 0; i < a.rows(); ++i)
      f.write(reinterpret_cast<const char*>(Eigen::RowVectorXd(a.row(i).matrix()).data()),
              static_cast<std::streamsize>(sizeof(double) * a.cols()));
  }
  require(f.good(), "checkpoint: write failed for " + path);
}

ParamStore read_checkpoint(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  require(f.good(), "checkpoint: cannot open " + path);
  char magic[4];
  f.read(magic, 4);
  require(f.good() && std::string(magic, 4) == "IGSN", "checkpoint: bad magic in " + path);
  uint32_t version = 0, count = 0;
  f.read(reinterpret_cast<char*>(&version), 4);
  require(version == kCheckpointVersion,
          "checkpoint: unknown format version " + std::to_string(version));
  f.read(reinterpret_cast<char*>(&count), 4);
  ParamStore store;
  for (uint32_t b = 0; b < count; ++b) {
    uint32_t len = 0;
    f.read(reinterpret_cast<char*>(&len), 4);
    require(f.good() && len < 4096, "checkpoint: bad block name length");
    std::string name(len, '\0');
    f.read(name.data(), len);
    uint64_t rows = 0, cols = 0;
    f.read(reinterpret_cast<char*>(&rows), 8);
    f.read(reinterpret_cast<char*>(&cols), 8);
    require(f.good() && rows < (1ull << 32) && cols < (1ull << 32),
            "checkpoint: bad block shape for " + name);
    Array a(static_cast<Index>(rows), static_cast<Index>(cols));
    Eigen::RowVectorXd row(static_cast<Index>(cols));
    for (Index i = 0; i < a.rows(); ++i) {
      f.read(reinterpret_cast<char*>(row.data()),
             static_cast<std::streamsize>(sizeof(double) * cols));
      a.row(i) = row.array();
    }
    require(f.good(), "checkpoint: truncated payload for " + name);
    store.add(name, std::move(a));
  }
  return store;
}

}  // namespace igs
