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

#include "unigraph/layers.h"

#include <cmath>
#include <stdexcept>

#include "unigraph/propagation.h"

namespace unigraph::nn {

Tensor ForwardContext::Drop(const Tensor &x) const {
  if (!training || dropout <= 0 || rng == nullptr) return x;
  return Dropout(x, dropout, *rng);
}

Tensor ParameterSet::Add(const std::string &name, Matrix value) {
  Tensor t = Parameter(std::move(value), name);
  entries_.emplace_back(name, t);
  return t;
}

Tensor ParameterSet::Uniform(const std::string &name, int rows, int cols,
                             double bound) {
  std::uniform_real_distribution<double> dist(-bound, bound);
  Matrix value(rows, cols);
  for (int i = 0; i < value.size(); ++i) value.data()[i] = dist(rng_);
  return Add(name, std::move(value));
}

Tensor ParameterSet::Glorot(const std::string &name, int rows, int cols) {
  return Uniform(name, rows, cols, std::sqrt(6.0 / (rows + cols)));
}

Tensor ParameterSet::Zeros(const std::string &name, int rows, int cols) {
  return Add(name, Matrix::Zero(rows, cols));
}

Tensor ParameterSet::Ones(const std::string &name, int rows, int cols) {
  return Add(name, Matrix::Ones(rows, cols));
}

AttentionWeights ParameterSet::Attention(const std::string &prefix, int d,
                                         bool output) {
  AttentionWeights w;
  w.query = Glorot(prefix + ".w_q", d, d);
  w.key = Glorot(prefix + ".w_k", d, d);
  w.value = Glorot(prefix + ".w_v", d, d);
  if (output) {
    w.output = Glorot(prefix + ".w_o", d, d);
    w.output_bias = Zeros(prefix + ".b_o", 1, d);
  }
  return w;
}

FeedForwardWeights ParameterSet::FeedForward(const std::string &prefix, int d,
                                             int width) {
  return {Glorot(prefix + ".w1", d, width), Zeros(prefix + ".b1", 1, width),
          Glorot(prefix + ".w2", width, d), Zeros(prefix + ".b2", 1, d)};
}

LayerNormWeights ParameterSet::Norm(const std::string &prefix, int d) {
  return {Ones(prefix + ".gain", 1, d), Zeros(prefix + ".bias", 1, d)};
}

EncoderLayerWeights ParameterSet::EncoderLayer(const std::string &prefix,
                                               int d, int width) {
  EncoderLayerWeights w;
  w.attention = Attention(prefix + ".attn", d, true);
  w.attention_norm = Norm(prefix + ".attn_norm", d);
  w.ffn = FeedForward(prefix + ".ffn", d, width);
  w.ffn_norm = Norm(prefix + ".ffn_norm", d);
  return w;
}

DecoderLayerWeights ParameterSet::DecoderLayer(const std::string &prefix,
                                               int d, int width) {
  DecoderLayerWeights w;
  w.self_attention = Attention(prefix + ".self_attn", d, true);
  w.self_norm = Norm(prefix + ".self_norm", d);
  w.graph_attention = Attention(prefix + ".graph_attn", d, false);
  w.text_attention = Attention(prefix + ".text_attn", d, false);
  w.fusion = Glorot(prefix + ".w_d", 2 * d, d);
  w.fusion_norm = Norm(prefix + ".fusion_norm", d);
  w.ffn = FeedForward(prefix + ".ffn", d, width);
  w.ffn_norm = Norm(prefix + ".ffn_norm", d);
  return w;
}

Tensor Linear(const Tensor &x, const Tensor &w, const Tensor &b,
              const ForwardContext &ctx) {
  Tensor out = MatMul(ctx.Drop(x), w);
  return b ? AddBias(out, b) : out;
}

Tensor FeedForward(const Tensor &x, const FeedForwardWeights &w,
                   const ForwardContext &ctx) {
  return Linear(Relu(Linear(x, w.w1, w.b1, ctx)), w.w2, w.b2, ctx);
}

Tensor ApplyLayerNorm(const Tensor &x, const LayerNormWeights &w) {
  return LayerNorm(x, w.gain, w.bias);
}

std::vector<Tensor> AttentionScores(const Tensor &queries, const Tensor &keys,
                                    const AttentionWeights &w, int heads,
                                    const ForwardContext &ctx) {
  const int d = w.query->value.cols();
  if (heads < 1 || d % heads != 0) {
    throw std::invalid_argument("head count must divide the model width");
  }
  const int d_head = d / heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(d_head));
  Tensor q = Linear(queries, w.query, nullptr, ctx);
  Tensor k = Linear(keys, w.key, nullptr, ctx);
  std::vector<Tensor> scores;
  for (int h = 0; h < heads; ++h) {
    scores.push_back(Scale(MatMulTransposed(SliceCols(q, h * d_head, d_head),
                                            SliceCols(k, h * d_head, d_head)),
                           scale));
  }
  return scores;
}

Tensor AttendValues(const std::vector<Tensor> &scores, const Tensor &values,
                    const Tensor &value_weight, int heads,
                    const BoolMatrix *mask, const ForwardContext &ctx) {
  const int d_head = value_weight->value.cols() / heads;
  Tensor v = Linear(values, value_weight, nullptr, ctx);
  std::vector<Tensor> outputs;
  for (int h = 0; h < heads; ++h) {
    Tensor weights = SoftmaxRows(scores[h], mask);
    outputs.push_back(MatMul(weights, SliceCols(v, h * d_head, d_head)));
  }
  return ConcatCols(outputs);
}

Tensor MultiHeadAttention(const Tensor &queries, const Tensor &keys,
                          const AttentionWeights &w, int heads,
                          const BoolMatrix *mask, const ForwardContext &ctx) {
  Tensor context = AttendValues(AttentionScores(queries, keys, w, heads, ctx),
                                keys, w.value, heads, mask, ctx);
  if (!w.output) return context;
  return Linear(context, w.output, w.output_bias, ctx);
}

std::vector<Tensor> GraphAttentionScores(const Tensor &queries,
                                         const Tensor &nodes,
                                         const AttentionWeights &w, int heads,
                                         const ForwardContext &ctx) {
  return AttentionScores(queries, nodes, w, heads, ctx);
}

Tensor GraphContext(const std::vector<Tensor> &scores, const Tensor &nodes,
                    const Tensor &value_weight, int heads,
                    const ForwardContext &ctx) {
  return AttendValues(scores, nodes, value_weight, heads, nullptr, ctx);
}

std::vector<Tensor> PropagateHeads(const std::vector<Tensor> &scores,
                                   const NormalizedAdjacency &a_hat,
                                   double omega, int steps) {
  std::vector<Tensor> propagated;
  for (const Tensor &s : scores) {
    propagated.push_back(GraphPropagate(s, a_hat, omega, steps));
  }
  return propagated;
}

Tensor Fuse(const Tensor &graph_vector, const Tensor &text_vector,
            const Tensor &fusion, const ForwardContext &ctx) {
  return Linear(ConcatCols({graph_vector, text_vector}), fusion, nullptr, ctx);
}

BoolMatrix CausalMask(int length) {
  BoolMatrix mask = BoolMatrix::Constant(length, length, false);
  for (int i = 0; i < length; ++i) {
    for (int j = 0; j <= i; ++j) mask(i, j) = true;
  }
  return mask;
}

Tensor GraphEncodeLayer(const Tensor &nodes, const AdjacencyMatrix &mask,
                        const EncoderLayerWeights &w, int heads,
                        const ForwardContext &ctx) {
  if (mask.n != nodes->value.rows()) {
    throw std::invalid_argument("graph mask does not match node count");
  }
  Tensor attended =
      MultiHeadAttention(nodes, nodes, w.attention, heads, &mask.entries, ctx);
  Tensor h = ApplyLayerNorm(Add(nodes, attended), w.attention_norm);
  return ApplyLayerNorm(Add(h, FeedForward(h, w.ffn, ctx)), w.ffn_norm);
}

Tensor TextEncodeLayer(const Tensor &tokens, const EncoderLayerWeights &w,
                       int heads, const ForwardContext &ctx) {
  Tensor attended =
      MultiHeadAttention(tokens, tokens, w.attention, heads, nullptr, ctx);
  Tensor h = ApplyLayerNorm(Add(tokens, attended), w.attention_norm);
  return ApplyLayerNorm(Add(h, FeedForward(h, w.ffn, ctx)), w.ffn_norm);
}

Tensor GraphDecodeLayer(const Tensor &prefix, const Tensor &nodes,
                        const Tensor &tokens, const NormalizedAdjacency &a_hat,
                        const DecoderLayerWeights &w,
                        const DecoderLayerOptions &options,
                        const ForwardContext &ctx,
                        std::vector<DecoderStepState> *trace) {
  const int heads = options.heads;
  const BoolMatrix causal = CausalMask(prefix->value.rows());
  Tensor self = MultiHeadAttention(prefix, prefix, w.self_attention, heads,
                                   &causal, ctx);
  Tensor query = ApplyLayerNorm(Add(prefix, self), w.self_norm);

  std::vector<Tensor> alpha =
      GraphAttentionScores(query, nodes, w.graph_attention, heads, ctx);
  std::vector<Tensor> beta =
      options.use_propagation
          ? PropagateHeads(alpha, a_hat, options.omega, options.steps)
          : alpha;
  Tensor graph_vector =
      GraphContext(beta, nodes, w.graph_attention.value, heads, ctx);
  Tensor text_vector =
      MultiHeadAttention(query, tokens, w.text_attention, heads, nullptr, ctx);
  Tensor fused = Fuse(graph_vector, text_vector, w.fusion, ctx);
  Tensor h = ApplyLayerNorm(Add(query, fused), w.fusion_norm);
  Tensor out = ApplyLayerNorm(Add(h, FeedForward(h, w.ffn, ctx)), w.ffn_norm);

  if (trace != nullptr) {
    Tensor plain = GraphContext(alpha, nodes, w.graph_attention.value, heads);
    trace->clear();
    for (int t = 0; t < prefix->value.rows(); ++t) {
      DecoderStepState state;
      state.y = query->value.row(t);
      state.alpha.resize(nodes->value.rows(), heads);
      state.beta.resize(nodes->value.rows(), heads);
      for (int k = 0; k < heads; ++k) {
        state.alpha.col(k) = alpha[k]->value.row(t).transpose();
        state.beta.col(k) = beta[k]->value.row(t).transpose();
      }
      state.g = plain->value.row(t);
      state.g_prime = graph_vector->value.row(t);
      state.c = text_vector->value.row(t);
      state.d_fused = fused->value.row(t);
      trace->push_back(std::move(state));
    }
  }
  return out;
}

}  // namespace unigraph::nn
