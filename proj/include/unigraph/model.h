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

#ifndef UNIGRAPH_MODEL_H_
#define UNIGRAPH_MODEL_H_

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "unigraph/graph_augment.h"
#include "unigraph/layers.h"

namespace unigraph {

// Hyperparameters of the graph encoder-decoder. Defaults are desk scale;
// the propagation settings follow the published configuration (omega 0.9,
// two steps).
struct ModelConfig {
  int d_model = 64;
  int n_heads = 4;
  double omega = 0.9;
  int prop_steps = 2;
  int enc_layers = 2;
  int graph_enc_layers = 2;
  int dec_layers = 2;
  int ffn_width = 128;
  double dropout_rate = 0.1;
  double label_smoothing = 0.1;
  double max_grad_norm = 0.2;
  int vocab_size = 0;
  int max_len = 256;
  // False builds decoders without the propagation path.
  bool use_propagation = true;
  // Edge kinds that make up A in A_hat = A D^-1.
  EdgeKindSet propagation_kinds = AllEdgeKinds();
  AugmentOptions augment;

  int d_head() const { return d_model / n_heads; }

  // Throws std::invalid_argument when an invariant fails.
  void Validate() const;

  bool operator==(const ModelConfig &) const = default;
};

// key=value lines; unknown keys are rejected.
std::string ConfigToText(const ModelConfig &config);
ModelConfig ConfigFromText(std::string_view text);
// Applies one key=value override.
void SetConfigValue(ModelConfig &config, const std::string &key,
                    const std::string &value);

// Everything the model needs from a built graph: the augmented graph, the
// two-level average-pooling matrix (nodes x tokens), the attention mask and
// the normalized propagation matrix.
struct GraphInput {
  SemanticGraph graph;
  Eigen::MatrixXd pooling;
  AdjacencyMatrix mask;
  NormalizedAdjacency a_hat;
};

// Rows of the pooling matrix: a phrase averages its tokens, a node averages
// its phrases, the SUPER node averages all other nodes (or all tokens when
// there are none). Throws if a non-SUPER node has no tokens.
Eigen::MatrixXd NodePoolingMatrix(const SemanticGraph &graph, int seq_len);

GraphInput PrepareGraph(const SemanticGraph &built, int seq_len,
                        const ModelConfig &config);

// Node states from token states by two-level average pooling.
nn::Tensor InitNodeStates(const nn::Tensor &token_states,
                          const SemanticGraph &graph);

class GraphSummarizer {
 public:
  // All weights are drawn from a generator seeded with `seed`.
  GraphSummarizer(const ModelConfig &config, uint64_t seed);

  const ModelConfig &config() const { return config_; }
  // Propagation settings may change between runs on one set of weights.
  void SetPropagation(double omega, int steps, bool enabled);

  std::vector<std::pair<std::string, nn::Tensor>> &parameters() {
    return parameters_;
  }
  const std::vector<std::pair<std::string, nn::Tensor>> &parameters() const {
    return parameters_;
  }

  struct Encoded {
    nn::Tensor tokens;
    nn::Tensor nodes;
    const GraphInput *graph = nullptr;
  };

  nn::Tensor EncodeText(const std::vector<int> &ids,
                        const nn::ForwardContext &ctx = {}) const;
  Encoded Encode(const std::vector<int> &ids, const GraphInput &graph,
                 const nn::ForwardContext &ctx = {}) const;

  // Final decoder states for a target prefix (first id is BOS).
  nn::Tensor DecodeStates(const Encoded &encoded,
                          const std::vector<int> &prefix,
                          const nn::ForwardContext &ctx = {},
                          std::vector<std::vector<nn::DecoderStepState>>
                              *trace = nullptr) const;
  nn::Tensor Logits(const Encoded &encoded, const std::vector<int> &prefix,
                    const nn::ForwardContext &ctx = {}) const;

  // Teacher-forced label-smoothed loss: decoder input is `target_in`,
  // predictions are compared with `target_out` position by position.
  nn::Tensor Loss(const std::vector<int> &ids, const GraphInput &graph,
                  const std::vector<int> &target_in,
                  const std::vector<int> &target_out,
                  const nn::ForwardContext &ctx = {}) const;

  // Log-probabilities of the next token after `prefix`.
  Eigen::VectorXd NextTokenLogProbs(const Encoded &encoded,
                                    const std::vector<int> &prefix) const;

 private:
  nn::DecoderLayerOptions DecoderOptions() const;

  ModelConfig config_;
  std::vector<std::pair<std::string, nn::Tensor>> parameters_;
  nn::Tensor token_embedding_;
  nn::Tensor encoder_positions_;
  nn::Tensor decoder_positions_;
  std::vector<nn::EncoderLayerWeights> text_layers_;
  std::vector<nn::EncoderLayerWeights> graph_layers_;
  std::vector<nn::DecoderLayerWeights> decoder_layers_;
  nn::Tensor output_weight_;
  nn::Tensor output_bias_;
};

}  // namespace unigraph

#endif  // UNIGRAPH_MODEL_H_
