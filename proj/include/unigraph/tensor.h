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

#ifndef UNIGRAPH_TENSOR_H_
#define UNIGRAPH_TENSOR_H_

#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace unigraph::nn {

using Matrix = Eigen::MatrixXd;
using BoolMatrix = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

// Node of a reverse-mode computation graph over dense double matrices.
// Rows are positions (tokens, nodes, queries), columns are features.
struct Node {
  Matrix value;
  Matrix grad;  // same shape as value once touched by Backward()
  bool requires_grad = false;
  std::vector<std::shared_ptr<Node>> inputs;
  // Propagates this->grad into the inputs' grads.
  std::function<void(Node &)> backward;
  std::string name;

  void AccumulateGrad(const Matrix &g);
};

using Tensor = std::shared_ptr<Node>;

Tensor Constant(Matrix value);
Tensor Parameter(Matrix value, std::string name);

// Runs reverse accumulation from a 1x1 tensor. Gradients accumulate into
// leaves; intermediate grads are reset first.
void Backward(const Tensor &loss);

Tensor MatMul(const Tensor &a, const Tensor &b);
// a * b^T.
Tensor MatMulTransposed(const Tensor &a, const Tensor &b);
Tensor Add(const Tensor &a, const Tensor &b);
// Adds a 1 x cols row to every row of a.
Tensor AddBias(const Tensor &a, const Tensor &bias);
Tensor Scale(const Tensor &a, double factor);
Tensor Relu(const Tensor &a);

// Row-wise softmax with max subtraction. Where `mask` is false the output is
// exactly 0; a row with no allowed entry throws std::domain_error.
Tensor SoftmaxRows(const Tensor &a, const BoolMatrix *mask = nullptr);

// Row-wise layer normalization with learned 1 x cols gain and bias.
Tensor LayerNorm(const Tensor &x, const Tensor &gain, const Tensor &bias,
                 double epsilon = 1e-5);

Tensor ConcatCols(const std::vector<Tensor> &parts);
Tensor SliceCols(const Tensor &a, int start, int count);
Tensor SliceRows(const Tensor &a, int start, int count);

// Rows of `table` selected by ids.
Tensor GatherRows(const Tensor &table, const std::vector<int> &ids);

// Inverted dropout; identity when rate == 0.
Tensor Dropout(const Tensor &a, double rate, std::mt19937_64 &rng);

// Sum of a .* weights, as a 1x1 tensor.
Tensor WeightedSum(const Tensor &a, const Matrix &weights);

// Mean over rows of KL(q_t || softmax(logits_t)) where q_t puts
// 1 - smoothing on targets[t] and spreads smoothing over the other classes.
// Equals label-smoothed cross-entropy minus the (constant) entropy of q.
Tensor LabelSmoothedLoss(const Tensor &logits, const std::vector<int> &targets,
                         double smoothing);

}  // namespace unigraph::nn

#endif  // UNIGRAPH_TENSOR_H_
