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

#ifndef UNIGRAPH_LAYERS_H_
#define UNIGRAPH_LAYERS_H_

#include <random>
#include <string>
#include <vector>

#include "unigraph/graph_augment.h"
#include "unigraph/tensor.h"

namespace unigraph::nn {

// Dropout is applied to the input of every linear map while training.
struct ForwardContext {
  bool training = false;
  double dropout = 0.0;
  std::mt19937_64 *rng = nullptr;

  Tensor Drop(const Tensor &x) const;
};

// Query/key/value projections are d x d without bias. `output` is optional
// (null for the decoder's graph and text attention, which feed the fusion
// layer directly).
struct AttentionWeights {
  Tensor query, key, value;
  Tensor output, output_bias;
};

struct FeedForwardWeights {
  Tensor w1, b1, w2, b2;
};

struct LayerNormWeights {
  Tensor gain, bias;
};

struct EncoderLayerWeights {
  AttentionWeights attention;
  LayerNormWeights attention_norm;
  FeedForwardWeights ffn;
  LayerNormWeights ffn_norm;
};

struct DecoderLayerWeights {
  AttentionWeights self_attention;
  LayerNormWeights self_norm;
  AttentionWeights graph_attention;
  AttentionWeights text_attention;
  Tensor fusion;  // 2d x d
  LayerNormWeights fusion_norm;
  FeedForwardWeights ffn;
  LayerNormWeights ffn_norm;
};

// Collects named parameters as they are created.
class ParameterSet {
 public:
  explicit ParameterSet(std::mt19937_64 &rng) : rng_(rng) {}

  Tensor Uniform(const std::string &name, int rows, int cols, double bound);
  // Glorot-uniform initialization.
  Tensor Glorot(const std::string &name, int rows, int cols);
  Tensor Zeros(const std::string &name, int rows, int cols);
  Tensor Ones(const std::string &name, int rows, int cols);

  AttentionWeights Attention(const std::string &prefix, int d, bool output);
  FeedForwardWeights FeedForward(const std::string &prefix, int d, int width);
  LayerNormWeights Norm(const std::string &prefix, int d);
  EncoderLayerWeights EncoderLayer(const std::string &prefix, int d,
                                   int width);
  DecoderLayerWeights DecoderLayer(const std::string &prefix, int d,
                                   int width);

  std::vector<std::pair<std::string, Tensor>> &entries() { return entries_; }

 private:
  Tensor Add(const std::string &name, Matrix value);

  std::mt19937_64 &rng_;
  std::vector<std::pair<std::string, Tensor>> entries_;
};

Tensor Linear(const Tensor &x, const Tensor &w, const Tensor &b,
              const ForwardContext &ctx);
Tensor FeedForward(const Tensor &x, const FeedForwardWeights &w,
                   const ForwardContext &ctx);
Tensor ApplyLayerNorm(const Tensor &x, const LayerNormWeights &w);

// Per-head scaled dot products (x_q W_Q)(x_k W_K)^T / sqrt(d_head), one
// queries x keys matrix per head. No softmax.
std::vector<Tensor> AttentionScores(const Tensor &queries, const Tensor &keys,
                                    const AttentionWeights &w, int heads,
                                    const ForwardContext &ctx);

// Per-head softmax over keys (restricted by `mask` when given), weighted
// sum of the head's slice of x W_V, heads concatenated.
Tensor AttendValues(const std::vector<Tensor> &scores, const Tensor &values,
                    const Tensor &value_weight, int heads,
                    const BoolMatrix *mask, const ForwardContext &ctx);

// Full multi-head attention, with output projection if the weights have one.
Tensor MultiHeadAttention(const Tensor &queries, const Tensor &keys,
                          const AttentionWeights &w, int heads,
                          const BoolMatrix *mask, const ForwardContext &ctx);

// Salient scores of every node for every query: one queries x nodes matrix
// per head.
std::vector<Tensor> GraphAttentionScores(const Tensor &queries,
                                         const Tensor &nodes,
                                         const AttentionWeights &w, int heads,
                                         const ForwardContext &ctx = {});

// Graph vector from salient scores (raw or propagated).
Tensor GraphContext(const std::vector<Tensor> &scores, const Tensor &nodes,
                    const Tensor &value_weight, int heads,
                    const ForwardContext &ctx = {});

// Propagates every head's scores independently.
std::vector<Tensor> PropagateHeads(const std::vector<Tensor> &scores,
                                   const NormalizedAdjacency &a_hat,
                                   double omega, int steps);

// [g, c] W_d.
Tensor Fuse(const Tensor &graph_vector, const Tensor &text_vector,
            const Tensor &fusion, const ForwardContext &ctx = {});

BoolMatrix CausalMask(int length);

// Transformer layer over nodes: node i attends to node j iff mask has the
// edge j -> i. Residual, layer norm, feed-forward, layer norm.
Tensor GraphEncodeLayer(const Tensor &nodes, const AdjacencyMatrix &mask,
                        const EncoderLayerWeights &w, int heads,
                        const ForwardContext &ctx = {});

// Unmasked transformer encoder layer over tokens.
Tensor TextEncodeLayer(const Tensor &tokens, const EncoderLayerWeights &w,
                       int heads, const ForwardContext &ctx = {});

struct DecoderLayerOptions {
  int heads = 4;
  double omega = 0.9;
  int steps = 2;
  // False builds the layer without the propagation path at all.
  bool use_propagation = true;
};

// Intermediate vectors of one graph decoding layer at one target position.
// alpha/beta are n_nodes x heads; the vectors are 1 x d.
struct DecoderStepState {
  Matrix y;
  Matrix alpha;
  Matrix beta;
  Matrix g;
  Matrix g_prime;
  Matrix c;
  Matrix d_fused;
};

// One graph decoding layer over a target prefix (rows = positions):
// causal self-attention, graph attention with score propagation, text
// attention, fusion, then layer norm and feed-forward. When `trace` is set
// it receives one state per position.
Tensor GraphDecodeLayer(const Tensor &prefix, const Tensor &nodes,
                        const Tensor &tokens, const NormalizedAdjacency &a_hat,
                        const DecoderLayerWeights &w,
                        const DecoderLayerOptions &options,
                        const ForwardContext &ctx = {},
                        std::vector<DecoderStepState> *trace = nullptr);

}  // namespace unigraph::nn

#endif  // UNIGRAPH_LAYERS_H_
