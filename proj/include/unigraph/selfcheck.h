// Copyright 2026 The Unigraph Authors.
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

#ifndef UNIGRAPH_SELFCHECK_H_
#define UNIGRAPH_SELFCHECK_H_

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "unigraph/graph.h"
#include "unigraph/tensor.h"

namespace unigraph {

struct PropertyResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SelfCheckOptions {
  uint64_t seed = 0;
  // Flips the sign of the restart term in iterative propagation while the
  // suite runs.
  bool inject_propagation_fault = false;
};

std::vector<PropertyResult> RunSelfCheck(const SelfCheckOptions &options);

// n plain nodes with each ORIGINAL edge u -> v (u != v) present with
// probability edge_prob.
SemanticGraph RandomGraph(int n, double edge_prob, std::mt19937_64 &rng);

// A scalar function of one decoder building block together with the tensors
// to differentiate. The loss contracts the block's output with fixed random
// weights.
struct GradCheckCase {
  std::string name;
  std::function<nn::Tensor()> loss;
  std::vector<std::pair<std::string, nn::Tensor>> wrt;
};

// Cases for graph_attention_scores, graph_context, graph_propagate, fuse,
// graph_encode_layer and graph_decode_layer.
std::vector<GradCheckCase> GradCheckCases(uint64_t seed);

}  // namespace unigraph

#endif  // UNIGRAPH_SELFCHECK_H_
