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

#ifndef UNIGRAPH_TRAIN_H_
#define UNIGRAPH_TRAIN_H_

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "unigraph/model.h"
#include "unigraph/toy_task.h"

namespace unigraph {

struct TrainingExample {
  std::string id;
  std::vector<int> input_ids;
  GraphInput graph;
  std::vector<int> target_in;   // kBos + summary without kEos
  std::vector<int> target_out;  // summary with kEos
};

// Augments and normalizes every example's graph for `config`. Examples are
// prepared concurrently; the result is in task order.
std::vector<TrainingExample> PrepareExamples(const ToyTask &task,
                                             const ModelConfig &config);

struct TrainOptions {
  int steps = 500;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.998;
  double epsilon = 1e-9;
  // 0 uses every example at every step.
  int batch_size = 0;
  uint64_t seed = 0;
};

struct StepRecord {
  int step = 0;
  double loss = 0.0;
  double grad_norm = 0.0;     // before clipping
  double clipped_norm = 0.0;  // after clipping
};

// Raised when a step produces a non-finite loss; what() carries a dump of
// the offending batch.
class NonFiniteLossError : public std::runtime_error {
 public:
  NonFiniteLossError(const std::string &dump, std::vector<std::string> batch)
      : std::runtime_error(dump), batch_(std::move(batch)) {}
  const std::vector<std::string> &batch() const { return batch_; }

 private:
  std::vector<std::string> batch_;
};

using Parameters = std::vector<std::pair<std::string, nn::Tensor>>;

void ZeroGrads(Parameters &parameters);
double GlobalGradNorm(const Parameters &parameters);
// Rescales all gradients so the global norm is at most max_norm. Returns the
// norm before clipping.
double ClipGradNorm(Parameters &parameters, double max_norm);

class AdamOptimizer {
 public:
  AdamOptimizer(const Parameters &parameters, double learning_rate,
                double beta1, double beta2, double epsilon);
  void Step(Parameters &parameters);

 private:
  double learning_rate_, beta1_, beta2_, epsilon_;
  int t_ = 0;
  std::vector<Eigen::MatrixXd> m_, v_;
};

// Label-smoothed maximum likelihood with global-norm clipping at
// model.config().max_grad_norm. `on_step` sees each record as it is made.
std::vector<StepRecord> Train(
    GraphSummarizer &model, const std::vector<TrainingExample> &examples,
    const TrainOptions &options,
    const std::function<void(const StepRecord &)> &on_step = {});

// "step,loss" header then one line per step.
std::string FormatLossCsv(const std::vector<StepRecord> &curve);

}  // namespace unigraph

#endif  // UNIGRAPH_TRAIN_H_
