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

#include "unigraph/model.h"

#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace unigraph {
namespace {

bool ParseBool(const std::string &value) {
  if (value == "1" || value == "true") return true;
  if (value == "0" || value == "false") return false;
  throw std::invalid_argument("expected a boolean, got '" + value + "'");
}

std::string FormatDouble(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::string Trim(const std::string &s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

void ModelConfig::Validate() const {
  auto require = [](bool ok, const char *what) {
    if (!ok) throw std::invalid_argument(std::string("config: ") + what);
  };
  require(d_model > 0, "d_model must be positive");
  require(n_heads > 0 && d_model % n_heads == 0,
          "n_heads must divide d_model");
  require(omega > 0.0 && omega <= 1.0, "omega must lie in (0, 1]");
  require(prop_steps >= 0, "prop_steps must be >= 0");
  require(enc_layers >= 0 && graph_enc_layers >= 0 && dec_layers >= 0,
          "layer counts must be >= 0");
  require(ffn_width > 0, "ffn_width must be positive");
  require(dropout_rate >= 0.0 && dropout_rate < 1.0,
          "dropout_rate must lie in [0, 1)");
  require(label_smoothing >= 0.0 && label_smoothing < 1.0,
          "label_smoothing must lie in [0, 1)");
  require(max_grad_norm > 0.0, "max_grad_norm must be positive");
  require(vocab_size >= 2, "vocab_size must be >= 2");
  require(max_len >= 1, "max_len must be >= 1");
}

std::string ConfigToText(const ModelConfig &config) {
  std::ostringstream out;
  out << "d_model=" << config.d_model << "\n"
      << "n_heads=" << config.n_heads << "\n"
      << "omega=" << FormatDouble(config.omega) << "\n"
      << "prop_steps=" << config.prop_steps << "\n"
      << "enc_layers=" << config.enc_layers << "\n"
      << "graph_enc_layers=" << config.graph_enc_layers << "\n"
      << "dec_layers=" << config.dec_layers << "\n"
      << "ffn_width=" << config.ffn_width << "\n"
      << "dropout_rate=" << FormatDouble(config.dropout_rate) << "\n"
      << "label_smoothing=" << FormatDouble(config.label_smoothing) << "\n"
      << "max_grad_norm=" << FormatDouble(config.max_grad_norm) << "\n"
      << "vocab_size=" << config.vocab_size << "\n"
      << "max_len=" << config.max_len << "\n"
      << "use_propagation=" << (config.use_propagation ? 1 : 0) << "\n";
  std::string kinds;
  for (EdgeKind kind : config.propagation_kinds) {
    if (!kinds.empty()) kinds += ",";
    kinds += EdgeKindName(kind);
  }
  out << "propagation_kinds=" << kinds << "\n"
      << "augment_reverse=" << (config.augment.reverse_and_self_loops ? 1 : 0)
      << "\n"
      << "augment_shortcut=" << (config.augment.shortcut_edges ? 1 : 0) << "\n"
      << "augment_supernode=" << (config.augment.supernode ? 1 : 0) << "\n";
  return out.str();
}

void SetConfigValue(ModelConfig &config, const std::string &key,
                    const std::string &value) {
  if (key == "d_model") config.d_model = std::stoi(value);
  else if (key == "n_heads") config.n_heads = std::stoi(value);
  else if (key == "omega") config.omega = std::stod(value);
  else if (key == "prop_steps") config.prop_steps = std::stoi(value);
  else if (key == "enc_layers") config.enc_layers = std::stoi(value);
  else if (key == "graph_enc_layers") config.graph_enc_layers = std::stoi(value);
  else if (key == "dec_layers") config.dec_layers = std::stoi(value);
  else if (key == "ffn_width") config.ffn_width = std::stoi(value);
  else if (key == "dropout_rate") config.dropout_rate = std::stod(value);
  else if (key == "label_smoothing") config.label_smoothing = std::stod(value);
  else if (key == "max_grad_norm") config.max_grad_norm = std::stod(value);
  else if (key == "vocab_size") config.vocab_size = std::stoi(value);
  else if (key == "max_len") config.max_len = std::stoi(value);
  else if (key == "use_propagation") config.use_propagation = ParseBool(value);
  else if (key == "augment_reverse")
    config.augment.reverse_and_self_loops = ParseBool(value);
  else if (key == "augment_shortcut")
    config.augment.shortcut_edges = ParseBool(value);
  else if (key == "augment_supernode") config.augment.supernode = ParseBool(value);
  else if (key == "propagation_kinds") {
    config.propagation_kinds.clear();
    std::stringstream list(value);
    std::string name;
    while (std::getline(list, name, ',')) {
      if (!Trim(name).empty()) {
        config.propagation_kinds.insert(ParseEdgeKind(Trim(name)));
      }
    }
  } else {
    throw std::invalid_argument("unknown config key '" + key + "'");
  }
}

ModelConfig ConfigFromText(std::string_view text) {
  ModelConfig config;
  const std::string trimmed = Trim(std::string(text));
  if (!trimmed.empty() && trimmed.front() == '{') {
    const nlohmann::json root = nlohmann::json::parse(trimmed);
    for (const auto &[key, value] : root.items()) {
      std::string as_text;
      if (value.is_string()) {
        as_text = value.get<std::string>();
      } else if (value.is_boolean()) {
        as_text = value.get<bool>() ? "1" : "0";
      } else if (value.is_array()) {
        for (const auto &item : value) {
          if (!as_text.empty()) as_text += ",";
          as_text += item.get<std::string>();
        }
      } else {
        as_text = value.dump();
      }
      SetConfigValue(config, key, as_text);
    }
    return config;
  }
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    line = Trim(line);
    if (line.empty() || line[0] == '#') continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line without '=': " + line);
    }
    SetConfigValue(config, Trim(line.substr(0, eq)), Trim(line.substr(eq + 1)));
  }
  return config;
}

Eigen::MatrixXd NodePoolingMatrix(const SemanticGraph &graph, int seq_len) {
  const int n = graph.node_count();
  Eigen::MatrixXd pooling = Eigen::MatrixXd::Zero(n, seq_len);
  std::vector<int> super_nodes;
  for (const GraphNode &node : graph.nodes()) {
    if (node.node_type == NodeType::kSuper) {
      super_nodes.push_back(node.id);
      continue;
    }
    if (node.phrases.empty()) {
      throw std::invalid_argument("node " + std::to_string(node.id) +
                                  " has no aligned tokens");
    }
    const double phrase_weight = 1.0 / node.phrases.size();
    for (const Phrase &phrase : node.phrases) {
      if (phrase.tokens.empty()) {
        throw std::invalid_argument("node " + std::to_string(node.id) +
                                    " has an empty phrase");
      }
      const double token_weight = phrase_weight / phrase.tokens.size();
      for (int token : phrase.tokens) {
        if (token < 0 || token >= seq_len) {
          throw std::out_of_range("node " + std::to_string(node.id) +
                                  " aligned past the input");
        }
        pooling(node.id, token) += token_weight;
      }
    }
  }
  const int regular = n - super_nodes.size();
  for (int s : super_nodes) {
    if (regular > 0) {
      for (const GraphNode &node : graph.nodes()) {
        if (node.node_type != NodeType::kSuper) {
          pooling.row(s) += pooling.row(node.id) / regular;
        }
      }
    } else if (seq_len > 0) {
      pooling.row(s).setConstant(1.0 / seq_len);
    }
  }
  return pooling;
}

GraphInput PrepareGraph(const SemanticGraph &built, int seq_len,
                        const ModelConfig &config) {
  GraphInput input;
  input.graph = Augment(built, config.augment);
  if (input.graph.node_count() == 0) {
    // The decoder needs something to attend to.
    input.graph = AddReverseAndSelfLoops(AddSupernode(input.graph));
  }
  input.pooling = NodePoolingMatrix(input.graph, seq_len);
  input.mask = Adjacency(input.graph, AllEdgeKinds());
  input.a_hat =
      DegreeNormalize(Adjacency(input.graph, config.propagation_kinds));
  return input;
}

nn::Tensor InitNodeStates(const nn::Tensor &token_states,
                          const SemanticGraph &graph) {
  return nn::MatMul(
      nn::Constant(NodePoolingMatrix(graph, token_states->value.rows())),
      token_states);
}

GraphSummarizer::GraphSummarizer(const ModelConfig &config, uint64_t seed)
    : config_(config) {
  config_.Validate();
  std::mt19937_64 rng(seed);
  nn::ParameterSet params(rng);
  const int d = config_.d_model;
  token_embedding_ = params.Glorot("embed.tokens", config_.vocab_size, d);
  encoder_positions_ = params.Glorot("embed.enc_positions", config_.max_len, d);
  decoder_positions_ = params.Glorot("embed.dec_positions", config_.max_len, d);
  for (int l = 0; l < config_.enc_layers; ++l) {
    text_layers_.push_back(params.EncoderLayer(
        "text_enc." + std::to_string(l), d, config_.ffn_width));
  }
  for (int l = 0; l < config_.graph_enc_layers; ++l) {
    graph_layers_.push_back(params.EncoderLayer(
        "graph_enc." + std::to_string(l), d, config_.ffn_width));
  }
  for (int l = 0; l < config_.dec_layers; ++l) {
    decoder_layers_.push_back(params.DecoderLayer(
        "dec." + std::to_string(l), d, config_.ffn_width));
  }
  output_weight_ = params.Glorot("out.w", d, config_.vocab_size);
  output_bias_ = params.Zeros("out.b", 1, config_.vocab_size);
  parameters_ = std::move(params.entries());
}

void GraphSummarizer::SetPropagation(double omega, int steps, bool enabled) {
  ModelConfig next = config_;
  next.omega = omega;
  next.prop_steps = steps;
  next.use_propagation = enabled;
  next.Validate();
  config_ = next;
}

nn::DecoderLayerOptions GraphSummarizer::DecoderOptions() const {
  return {config_.n_heads, config_.omega, config_.prop_steps,
          config_.use_propagation};
}

nn::Tensor GraphSummarizer::EncodeText(const std::vector<int> &ids,
                                       const nn::ForwardContext &ctx) const {
  if (ids.empty()) throw std::invalid_argument("empty input sequence");
  if (static_cast<int>(ids.size()) > config_.max_len) {
    throw std::invalid_argument("input of " + std::to_string(ids.size()) +
                                " tokens exceeds max_len " +
                                std::to_string(config_.max_len));
  }
  std::vector<int> positions(ids.size());
  for (size_t i = 0; i < ids.size(); ++i) positions[i] = i;
  nn::Tensor x = nn::Add(nn::GatherRows(token_embedding_, ids),
                         nn::GatherRows(encoder_positions_, positions));
  for (const auto &layer : text_layers_) {
    x = nn::TextEncodeLayer(x, layer, config_.n_heads, ctx);
  }
  return x;
}

GraphSummarizer::Encoded GraphSummarizer::Encode(
    const std::vector<int> &ids, const GraphInput &graph,
    const nn::ForwardContext &ctx) const {
  Encoded encoded;
  encoded.graph = &graph;
  encoded.tokens = EncodeText(ids, ctx);
  if (graph.pooling.cols() != encoded.tokens->value.rows()) {
    throw std::invalid_argument("graph was prepared for a different input");
  }
  nn::Tensor nodes = nn::MatMul(nn::Constant(graph.pooling), encoded.tokens);
  for (const auto &layer : graph_layers_) {
    nodes = nn::GraphEncodeLayer(nodes, graph.mask, layer, config_.n_heads, ctx);
  }
  encoded.nodes = nodes;
  return encoded;
}

nn::Tensor GraphSummarizer::DecodeStates(
    const Encoded &encoded, const std::vector<int> &prefix,
    const nn::ForwardContext &ctx,
    std::vector<std::vector<nn::DecoderStepState>> *trace) const {
  if (prefix.empty()) throw std::invalid_argument("empty decoder prefix");
  if (static_cast<int>(prefix.size()) > config_.max_len) {
    throw std::invalid_argument("decoder prefix exceeds max_len");
  }
  std::vector<int> positions(prefix.size());
  for (size_t i = 0; i < prefix.size(); ++i) positions[i] = i;
  nn::Tensor y = nn::Add(nn::GatherRows(token_embedding_, prefix),
                         nn::GatherRows(decoder_positions_, positions));
  if (trace != nullptr) trace->assign(decoder_layers_.size(), {});
  for (size_t l = 0; l < decoder_layers_.size(); ++l) {
    y = nn::GraphDecodeLayer(y, encoded.nodes, encoded.tokens,
                             encoded.graph->a_hat, decoder_layers_[l],
                             DecoderOptions(), ctx,
                             trace != nullptr ? &(*trace)[l] : nullptr);
  }
  return y;
}

nn::Tensor GraphSummarizer::Logits(const Encoded &encoded,
                                   const std::vector<int> &prefix,
                                   const nn::ForwardContext &ctx) const {
  return nn::Linear(DecodeStates(encoded, prefix, ctx), output_weight_,
                    output_bias_, ctx);
}

nn::Tensor GraphSummarizer::Loss(const std::vector<int> &ids,
                                 const GraphInput &graph,
                                 const std::vector<int> &target_in,
                                 const std::vector<int> &target_out,
                                 const nn::ForwardContext &ctx) const {
  Encoded encoded = Encode(ids, graph, ctx);
  return nn::LabelSmoothedLoss(Logits(encoded, target_in, ctx), target_out,
                               config_.label_smoothing);
}

Eigen::VectorXd GraphSummarizer::NextTokenLogProbs(
    const Encoded &encoded, const std::vector<int> &prefix) const {
  nn::Tensor logits = Logits(encoded, prefix);
  Eigen::VectorXd last = logits->value.row(logits->value.rows() - 1).transpose();
  const double best = last.maxCoeff();
  const double log_total = best + std::log((last.array() - best).exp().sum());
  return last.array() - log_total;
}

}  // namespace unigraph
