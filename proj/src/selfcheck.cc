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

#include "unigraph/selfcheck.h"

#include <cmath>
#include <cstdio>
#include <set>
#include <tuple>

#include "unigraph/beam_search.h"
#include "unigraph/gradcheck.h"
#include "unigraph/graph_augment.h"
#include "unigraph/layers.h"
#include "unigraph/model.h"
#include "unigraph/propagation.h"
#include "unigraph/toy_task.h"
#include "unigraph/train.h"

namespace unigraph {
namespace {

using nn::Matrix;
using nn::Tensor;

Matrix RandomMatrix(int rows, int cols, std::mt19937_64 &rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = normal(rng);
  }
  return m;
}

std::string Format(const char *fmt, double value) {
  char buffer[96];
  std::snprintf(buffer, sizeof(buffer), fmt, value);
  return buffer;
}

NormalizedAdjacency RandomNormalized(int n, double p, std::mt19937_64 &rng) {
  SemanticGraph g = Augment(RandomGraph(n, p, rng));
  return DegreeNormalize(Adjacency(g));
}

PropertyResult PropagationEquivalence(std::mt19937_64 &rng) {
  PropertyResult result{"propagation-equivalence", true, ""};
  double worst = 0.0;
  std::uniform_int_distribution<int> size(1, 50);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = size(rng);
    const Matrix a_hat =
        DegreeNormalize(Adjacency(AddReverseAndSelfLoops(
                            RandomGraph(n, 3.0 / n, rng))))
            .entries;
    const Matrix scores = RandomMatrix(n, 4, rng);
    for (double omega : {0.1, 0.5, 0.9, 1.0}) {
      for (int steps : {0, 1, 2, 5}) {
        const Matrix iterative = PropagateScores(scores, a_hat, omega, steps);
        const Matrix closed =
            PropagateScoresClosedForm(scores, a_hat, omega, steps);
        worst = std::max(worst, (iterative - closed).cwiseAbs().maxCoeff());
      }
    }
  }
  result.passed = worst <= 1e-9;
  result.detail = Format("max abs diff %.3g", worst);
  return result;
}

PropertyResult SoftmaxNormalization(std::mt19937_64 &rng) {
  PropertyResult result{"softmax-normalization", true, ""};
  double worst = 0.0;
  bool leak = false;
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix logits = RandomMatrix(6, 9, rng) * 5.0;
    nn::BoolMatrix mask = RandomMatrix(6, 9, rng).array() > 0.0;
    for (int r = 0; r < 6; ++r) mask(r, r) = true;
    const Matrix p = nn::SoftmaxRows(nn::Constant(logits), &mask)->value;
    for (int r = 0; r < 6; ++r) {
      worst = std::max(worst, std::abs(p.row(r).sum() - 1.0));
      for (int c = 0; c < 9; ++c) {
        if (!mask(r, c) && p(r, c) != 0.0) leak = true;
      }
    }
  }
  result.passed = worst <= 1e-12 && !leak;
  result.detail = Format("max |row sum - 1| %.3g", worst) +
                  (leak ? "; mass outside mask" : "");
  return result;
}

PropertyResult MaskLocality(std::mt19937_64 &rng) {
  PropertyResult result{"graph-attention-mask-locality", true, ""};
  const int d = 8;
  nn::ParameterSet params(rng);
  const nn::EncoderLayerWeights w = params.EncoderLayer("enc", d, 16);
  int checked = 0;
  for (int trial = 0; trial < 5 && result.passed; ++trial) {
    const SemanticGraph g = AddReverseAndSelfLoops(RandomGraph(8, 0.15, rng));
    const AdjacencyMatrix mask = Adjacency(g);
    const Matrix nodes = RandomMatrix(8, d, rng);
    const Matrix base =
        nn::GraphEncodeLayer(nn::Constant(nodes), mask, w, 2)->value;
    for (int j = 0; j < 8; ++j) {
      Matrix perturbed = nodes;
      perturbed.row(j) += RandomMatrix(1, d, rng);
      const Matrix out =
          nn::GraphEncodeLayer(nn::Constant(perturbed), mask, w, 2)->value;
      for (int i = 0; i < 8; ++i) {
        if (mask.entries(i, j)) continue;
        ++checked;
        if ((out.row(i) - base.row(i)).cwiseAbs().maxCoeff() != 0.0) {
          result.passed = false;
          result.detail = "node " + std::to_string(i) + " sees non-neighbour " +
                          std::to_string(j);
        }
      }
    }
  }
  if (result.passed) {
    result.detail = std::to_string(checked) + " non-neighbour pairs unchanged";
  }
  return result;
}

PropertyResult ShortcutOracle(std::mt19937_64 &rng) {
  PropertyResult result{"shortcut-two-hop-oracle", true, ""};
  for (int trial = 0; trial < 10 && result.passed; ++trial) {
    const SemanticGraph looped =
        AddReverseAndSelfLoops(RandomGraph(40, 0.05, rng));
    const AdjacencyMatrix hop =
        Adjacency(looped, {EdgeKind::kOriginal, EdgeKind::kReverse});
    const AdjacencyMatrix any = Adjacency(looped);
    const Eigen::MatrixXi a = hop.entries.cast<int>().matrix();
    const Eigen::MatrixXi two = a * a;
    std::set<std::pair<int, int>> expected, actual;
    for (int w = 0; w < hop.n; ++w) {
      for (int u = 0; u < hop.n; ++u) {
        if (u != w && two(w, u) > 0 && !any.entries(w, u)) {
          expected.emplace(u, w);
        }
      }
    }
    const SemanticGraph with_shortcuts = AddShortcutEdges(looped);
    for (const auto &e : with_shortcuts.edges()) {
      if (e.kind == EdgeKind::kShortcut) actual.emplace(e.src, e.dst);
    }
    if (expected != actual) {
      result.passed = false;
      result.detail = "mismatch on trial " + std::to_string(trial);
    }
  }
  if (result.passed) result.detail = "10 graphs";
  return result;
}

PropertyResult SupernodeConnectivity(std::mt19937_64 &rng) {
  PropertyResult result{"supernode-connectivity", true, "10 graphs"};
  for (int trial = 0; trial < 10; ++trial) {
    const SemanticGraph g = Augment(RandomGraph(30, 0.02, rng));
    const int components = WeakComponentCount(g, AllEdgeKinds());
    if (components != 1) {
      result.passed = false;
      result.detail = std::to_string(components) + " components";
      break;
    }
  }
  return result;
}

PropertyResult ColumnStochastic(std::mt19937_64 &rng) {
  PropertyResult result{"column-stochastic-a-hat", true, ""};
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const NormalizedAdjacency a = RandomNormalized(30, 0.05, rng);
    const Eigen::VectorXd sums = a.entries.colwise().sum().transpose();
    worst = std::max(worst, (sums.array() - 1.0).abs().maxCoeff());
  }
  result.passed = worst <= 1e-12;
  result.detail = Format("max |column sum - 1| %.3g", worst);
  return result;
}

PropertyResult NoPropagationReduction(uint64_t seed) {
  PropertyResult result{"zero-step-propagation-reduction", true, ""};
  const ToyTask task = MakePlantedCorefTask(2, seed);
  ModelConfig config;
  config.d_model = 16;
  config.ffn_width = 32;
  config.enc_layers = 1;
  config.graph_enc_layers = 1;
  config.dec_layers = 2;
  config.vocab_size = task.vocabulary.size();
  const std::vector<TrainingExample> examples = PrepareExamples(task, config);
  GraphSummarizer model(config, seed);
  for (const auto &e : examples) {
    const auto encoded = model.Encode(e.input_ids, e.graph);
    model.SetPropagation(0.9, 0, true);
    const Matrix zero = model.DecodeStates(encoded, e.target_in)->value;
    model.SetPropagation(0.9, 0, false);
    const Matrix none = model.DecodeStates(encoded, e.target_in)->value;
    model.SetPropagation(0.9, 2, true);
    const Matrix two = model.DecodeStates(encoded, e.target_in)->value;
    if (zero != none) {
      result.passed = false;
      result.detail = "p=0 differs from the no-propagation path";
      return result;
    }
    if ((two - none).cwiseAbs().maxCoeff() == 0.0) {
      result.passed = false;
      result.detail = "p=2 has no effect";
      return result;
    }
  }
  result.detail = "p=0 bit-identical, p=2 differs";
  return result;
}

PropertyResult TrigramGuarantee(std::mt19937_64 &rng) {
  PropertyResult result{"trigram-blocking", true, ""};
  const int vocab = 4;
  const Matrix table = RandomMatrix(vocab, vocab, rng) * 3.0;
  // First-order Markov scorer strongly favouring loops.
  NextTokenScorer scorer = [&table](const std::vector<int> &prefix) {
    const int last = prefix.empty() ? 0 : prefix.back();
    Eigen::VectorXd logits = table.row(last).transpose();
    logits[last] += 4.0;
    const double lse = std::log(logits.array().exp().sum());
    return Eigen::VectorXd(logits.array() - lse);
  };
  for (int beam : {1, 3, 5}) {
    BeamOptions options;
    options.beam_size = beam;
    options.max_len = 20;
    const BeamResult out = BeamSearch(scorer, options);
    if (HasRepeatedTrigram(out.tokens)) {
      result.passed = false;
      result.detail = "repeat with beam " + std::to_string(beam);
      return result;
    }
  }
  result.detail = "beams 1, 3, 5";
  return result;
}

}  // namespace

SemanticGraph RandomGraph(int n, double edge_prob, std::mt19937_64 &rng) {
  SemanticGraph graph;
  std::bernoulli_distribution coin(std::clamp(edge_prob, 0.0, 1.0));
  for (int i = 0; i < n; ++i) {
    graph.AddNode(static_cast<NodeType>(i % 3), {}, "n" + std::to_string(i));
  }
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (u != v && coin(rng)) {
        graph.AddEdge({u, v, EdgeKind::kOriginal, "dep"});
      }
    }
  }
  return graph;
}

std::vector<GradCheckCase> GradCheckCases(uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int d = 8, heads = 2, queries = 3, n_nodes = 5, n_tokens = 4;
  auto input = [&rng](const std::string &name, int rows, int cols) {
    return nn::Parameter(RandomMatrix(rows, cols, rng), name);
  };
  const NormalizedAdjacency a_hat = RandomNormalized(n_nodes - 1, 0.3, rng);
  const AdjacencyMatrix mask = Adjacency(Augment(RandomGraph(n_nodes - 1, 0.3, rng)));
  std::vector<GradCheckCase> cases;

  {
    nn::ParameterSet params(rng);
    const nn::AttentionWeights w = params.Attention("attn", d, false);
    Tensor q = input("queries", queries, d);
    Tensor nodes = input("nodes", n_nodes, d);
    std::vector<Matrix> r;
    for (int h = 0; h < heads; ++h) r.push_back(RandomMatrix(queries, n_nodes, rng));
    GradCheckCase c{"graph_attention_scores", nullptr,
                    {{"queries", q}, {"nodes", nodes}, {"w_q", w.query},
                     {"w_k", w.key}}};
    c.loss = [=] {
      const auto scores = nn::GraphAttentionScores(q, nodes, w, heads);
      Tensor total = nn::WeightedSum(scores[0], r[0]);
      for (int h = 1; h < heads; ++h) {
        total = nn::Add(total, nn::WeightedSum(scores[h], r[h]));
      }
      return total;
    };
    cases.push_back(c);
  }
  {
    std::vector<Tensor> scores;
    for (int h = 0; h < heads; ++h) {
      scores.push_back(input("scores" + std::to_string(h), queries, n_nodes));
    }
    Tensor nodes = input("nodes", n_nodes, d);
    Tensor w_v = input("w_v", d, d);
    const Matrix r = RandomMatrix(queries, d, rng);
    GradCheckCase c{"graph_context", nullptr,
                    {{"scores0", scores[0]}, {"scores1", scores[1]},
                     {"nodes", nodes}, {"w_v", w_v}}};
    c.loss = [=] {
      return nn::WeightedSum(nn::GraphContext(scores, nodes, w_v, heads), r);
    };
    cases.push_back(c);
  }
  {
    Tensor scores = input("scores", queries, n_nodes);
    const Matrix r = RandomMatrix(queries, n_nodes, rng);
    GradCheckCase c{"graph_propagate", nullptr, {{"scores", scores}}};
    c.loss = [=] {
      return nn::WeightedSum(nn::GraphPropagate(scores, a_hat, 0.9, 2), r);
    };
    cases.push_back(c);
  }
  {
    Tensor g = input("g", queries, d);
    Tensor text = input("c", queries, d);
    Tensor w_d = input("w_d", 2 * d, d);
    const Matrix r = RandomMatrix(queries, d, rng);
    GradCheckCase c{"fuse", nullptr, {{"g", g}, {"c", text}, {"w_d", w_d}}};
    c.loss = [=] { return nn::WeightedSum(nn::Fuse(g, text, w_d), r); };
    cases.push_back(c);
  }
  {
    nn::ParameterSet params(rng);
    const nn::EncoderLayerWeights w = params.EncoderLayer("genc", d, 2 * d);
    Tensor nodes = input("nodes", n_nodes, d);
    const Matrix r = RandomMatrix(n_nodes, d, rng);
    GradCheckCase c{"graph_encode_layer", nullptr, params.entries()};
    c.wrt.insert(c.wrt.begin(), {"nodes", nodes});
    c.loss = [=] {
      return nn::WeightedSum(nn::GraphEncodeLayer(nodes, mask, w, heads), r);
    };
    cases.push_back(c);
  }
  {
    nn::ParameterSet params(rng);
    const nn::DecoderLayerWeights w = params.DecoderLayer("dec", d, 2 * d);
    Tensor prefix = input("prefix", queries, d);
    Tensor nodes = input("nodes", n_nodes, d);
    Tensor tokens = input("tokens", n_tokens, d);
    const Matrix r = RandomMatrix(queries, d, rng);
    nn::DecoderLayerOptions options;
    options.heads = heads;
    GradCheckCase c{"graph_decode_layer", nullptr, params.entries()};
    c.wrt.insert(c.wrt.begin(),
                 {{"prefix", prefix}, {"nodes", nodes}, {"tokens", tokens}});
    c.loss = [=] {
      return nn::WeightedSum(
          nn::GraphDecodeLayer(prefix, nodes, tokens, a_hat, w, options), r);
    };
    cases.push_back(c);
  }
  return cases;
}

std::vector<PropertyResult> RunSelfCheck(const SelfCheckOptions &options) {
  struct FaultGuard {
    explicit FaultGuard(bool on) { InjectPropagationSignFault(on); }
    ~FaultGuard() { InjectPropagationSignFault(false); }
  } guard(options.inject_propagation_fault);

  std::mt19937_64 rng(options.seed);
  std::vector<PropertyResult> results;
  results.push_back(PropagationEquivalence(rng));
  for (const auto &c : GradCheckCases(options.seed)) {
    const nn::GradCheckReport report = nn::FiniteDiffGradCheck(c.loss, c.wrt);
    PropertyResult r{"gradient-check:" + c.name, report.passed,
                     Format("max rel err %.3g", report.max_relative_error)};
    for (const auto &failure : report.failures) r.detail += "; " + failure;
    results.push_back(r);
  }
  results.push_back(SoftmaxNormalization(rng));
  results.push_back(MaskLocality(rng));
  results.push_back(ShortcutOracle(rng));
  results.push_back(SupernodeConnectivity(rng));
  results.push_back(ColumnStochastic(rng));
  results.push_back(NoPropagationReduction(options.seed));
  results.push_back(TrigramGuarantee(rng));
  return results;
}

}  // namespace unigraph
