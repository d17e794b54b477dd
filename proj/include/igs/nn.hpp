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

#include <map>
#include <string>
#include <vector>

#include "igs/graph.hpp"

namespace igs {

/// Named parameter blocks, ordered by name. Holds network weights and
/// identity maps alike.
class ParamStore {
 public:
  void add(const std::string& name, Array value);
  bool has(const std::string& name) const { return blocks_.count(name) > 0; }
  const Array& at(const std::string& name) const;
  Array& at(const std::string& name);
  void set(const std::string& name, Array value);
  std::vector<std::string> names() const;
  size_t size() const { return blocks_.size(); }

  /// Bitwise checksum over every block (name order), for frozen-weight asserts.
  uint64_t checksum() const;

 private:
  std::map<std::string, Array> blocks_;
};

/// Per-graph view of a ParamStore: blocks become leaf nodes (trainable) or
/// constants (frozen) on first use.
class ParamLeaves {
 public:
  ParamLeaves(Graph& g, const ParamStore& store, bool trainable)
      : graph_(&g), store_(&store), trainable_(trainable) {}

  int id(const std::string& name);

  /// Gradients of every materialized trainable block, keyed by name.
  std::map<std::string, Array> collect_gradients();

 private:
  Graph* graph_;
  const ParamStore* store_;
  bool trainable_;
  std::map<std::string, int> ids_;
};

/// He-style N(0, 1/sqrt(fan_in)) init for a 3-layer perceptron
/// (in -> hidden -> hidden -> out, tanh on the hidden layers).
void init_mlp3(ParamStore& store, const std::string& prefix, int in, int hidden, int out,
               DetRng& rng);

/// Forward through blocks prefix/{W1,b1,W2,b2,W3,b3}; x is N x in.
int mlp3_forward(Graph& g, ParamLeaves& leaves, const std::string& prefix, int x);

void init_linear(ParamStore& store, const std::string& prefix, int in, int out, DetRng& rng);
int linear_forward(Graph& g, ParamLeaves& leaves, const std::string& prefix, int x);

// --- Adam ---

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// First/second moment buffers per parameter block.
class AdamState {
 public:
  struct Moments {
    Array m, v;
    int64_t step = 0;
  };
  AdamConfig cfg;

  Moments& slot(const std::string& name, Index rows, Index cols);
  const std::map<std::string, Moments>& slots() const { return slots_; }

 private:
  std::map<std::string, Moments> slots_;
};

/// Standard bias-corrected Adam step on one block.
void adam_update(Array& param, const Array& grad, AdamState::Moments& st, const AdamConfig& cfg,
                 double lr);

/// Applies Adam to every block named in `grads`. Blocks whose gradient is
/// not finite are skipped and reported via the returned list.
std::vector<std::string> adam_apply(ParamStore& params, const std::map<std::string, Array>& grads,
                                    AdamState& state, double lr);

// --- checkpoint container (magic IGSN) ---

void write_checkpoint(const std::string& path, const ParamStore& store);
ParamStore read_checkpoint(const std::string& path);

}  // namespace igs
