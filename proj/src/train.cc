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

#include "unigraph/train.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <sstream>

#include "unigraph/threads.h"

namespace unigraph {

std::vector<TrainingExample> PrepareExamples(const ToyTask &task,
                                             const ModelConfig &config) {
  std::vector<TrainingExample> examples(task.examples.size());
  ParallelFor(static_cast<int>(examples.size()), [&](int i) {
    const ToyExample &source = task.examples[i];
    TrainingExample &out = examples[i];
    out.id = source.input_id;
    out.input_ids = source.input_ids;
    out.graph = PrepareGraph(source.graph,
                             static_cast<int>(source.input_ids.size()), config);
    out.target_in.push_back(Vocabulary::kBos);
    out.target_in.insert(out.target_in.end(), source.target_ids.begin(),
                         source.target_ids.end() - 1);
    out.target_out = source.target_ids;
  });
  return examples;
}

void ZeroGrads(Parameters &parameters) {
  for (auto &[name, tensor] : parameters) {
    tensor->grad = Eigen::MatrixXd::Zero(tensor->value.rows(),
                                         tensor->value.cols());
  }
}

double GlobalGradNorm(const Parameters &parameters) {
  double sum = 0.0;
  for (const auto &[name, tensor] : parameters) {
    if (tensor->grad.size() > 0) sum += tensor->grad.squaredNorm();
  }
  return std::sqrt(sum);
}

double ClipGradNorm(Parameters &parameters, double max_norm) {
  const double norm = GlobalGradNorm(parameters);
  if (norm > max_norm) {
    const double factor = max_norm / norm;
    for (auto &[name, tensor] : parameters) {
      if (tensor->grad.size() > 0) tensor->grad *= factor;
    }
  }
  return norm;
}

AdamOptimizer::AdamOptimizer(const Parameters &parameters,
                             double learning_rate, double beta1, double beta2,
                             double epsilon)
    : learning_rate_(learning_rate),
      beta1_(beta1),
      beta2_(beta2),
      epsilon_(epsilon) {
  for (const auto &[name, tensor] : parameters) {
    m_.push_back(Eigen::MatrixXd::Zero(tensor->value.rows(),
                                       tensor->value.cols()));
    v_.push_back(m_.back());
  }
}

void AdamOptimizer::Step(Parameters &parameters) {
  ++t_;
  const double correction1 = 1.0 - std::pow(beta1_, t_);
  const double correction2 = 1.0 - std::pow(beta2_, t_);
  for (size_t i = 0; i < parameters.size(); ++i) {
    nn::Node &p = *parameters[i].second;
    if (p.grad.size() == 0) continue;
    m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * p.grad;
    v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * p.grad.cwiseProduct(p.grad);
    p.value.array() -= learning_rate_ * (m_[i].array() / correction1) /
                       ((v_[i].array() / correction2).sqrt() + epsilon_);
  }
}

namespace {

std::string DumpBatch(int step, const std::vector<TrainingExample> &examples,
                      const std::vector<int> &batch,
                      const std::vector<double> &losses) {
  std::ostringstream out;
  out << "non-finite loss at step " << step << "; batch:";
  for (size_t i = 0; i < batch.size(); ++i) {
    const TrainingExample &e = examples[batch[i]];
    out << "\n  " << e.id << " loss=";
    // The batch stops at the first bad example.
    if (i < losses.size()) {
      out << losses[i];
    } else {
      out << "not evaluated";
    }
    out << " input_len="
        << e.input_ids.size() << " nodes=" << e.graph.graph.nodes().size()
        << " target_len=" << e.target_out.size();
  }
  return out.str();
}

}  // namespace

std::vector<StepRecord> Train(
    GraphSummarizer &model, const std::vector<TrainingExample> &examples,
    const TrainOptions &options,
    const std::function<void(const StepRecord &)> &on_step) {
  if (options.steps < 0) throw std::invalid_argument("steps must be >= 0");
  if (options.learning_rate < 0) {
    throw std::invalid_argument("learning rate must be >= 0");
  }
  if (examples.empty() && options.steps > 0) {
    throw std::invalid_argument("no training examples");
  }
  const ModelConfig &config = model.config();
  Parameters &parameters = model.parameters();
  AdamOptimizer optimizer(parameters, options.learning_rate, options.beta1,
                          options.beta2, options.epsilon);
  std::mt19937_64 rng(options.seed);
  nn::ForwardContext ctx{true, config.dropout_rate, &rng};

  const int n = static_cast<int>(examples.size());
  const int batch_size =
      options.batch_size <= 0 ? n : std::min(options.batch_size, n);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  int cursor = n;

  std::vector<StepRecord> curve;
  for (int step = 0; step < options.steps; ++step) {
    std::vector<int> batch;
    if (batch_size == n) {
      batch = order;
    } else {
      for (int i = 0; i < batch_size; ++i) {
        if (cursor == n) {
          std::shuffle(order.begin(), order.end(), rng);
          cursor = 0;
        }
        batch.push_back(order[cursor++]);
      }
    }
    ZeroGrads(parameters);
    double total = 0.0;
    std::vector<double> losses;
    for (int index : batch) {
      const TrainingExample &e = examples[index];
      nn::Tensor loss = model.Loss(e.input_ids, e.graph, e.target_in,
                                   e.target_out, ctx);
      const double value = loss->value(0, 0);
      losses.push_back(value);
      if (!std::isfinite(value)) {
        std::vector<std::string> ids;
        for (int b : batch) ids.push_back(examples[b].id);
        throw NonFiniteLossError(DumpBatch(step, examples, batch, losses),
                                 ids);
      }
      total += value;
      nn::Backward(nn::Scale(loss, 1.0 / batch.size()));
    }
    StepRecord record;
    record.step = step;
    record.loss = total / batch.size();
    record.grad_norm = ClipGradNorm(parameters, config.max_grad_norm);
    record.clipped_norm = GlobalGradNorm(parameters);
    optimizer.Step(parameters);
    curve.push_back(record);
    if (on_step) on_step(record);
  }
  return curve;
}

std::string FormatLossCsv(const std::vector<StepRecord> &curve) {
  std::string out = "step,loss\n";
  char line[64];
  for (const auto &record : curve) {
    std::snprintf(line, sizeof(line), "%d,%.17g\n", record.step, record.loss);
    out += line;
  }
  return out;
}

}  // namespace unigraph
