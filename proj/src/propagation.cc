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

#include "unigraph/propagation.h"

#include <atomic>
#include <stdexcept>

namespace unigraph {
namespace {

std::atomic<bool> sign_fault{false};

void CheckArguments(const Eigen::MatrixXd &a_hat, long n, double omega,
                    int steps) {
  if (a_hat.rows() != n || a_hat.cols() != n) {
    throw std::invalid_argument("propagation: A_hat must be n x n");
  }
  if (!(omega > 0.0 && omega <= 1.0)) {
    throw std::invalid_argument("propagation: omega must lie in (0, 1]");
  }
  if (steps < 0) throw std::invalid_argument("propagation: steps must be >= 0");
}

}  // namespace

void InjectPropagationSignFault(bool enabled) { sign_fault = enabled; }

Eigen::MatrixXd PropagateScores(const Eigen::MatrixXd &scores,
                                const Eigen::MatrixXd &a_hat, double omega,
                                int steps) {
  CheckArguments(a_hat, scores.rows(), omega, steps);
  const double restart = sign_fault ? omega - 1.0 : 1.0 - omega;
  Eigen::MatrixXd beta = scores;
  for (int k = 0; k < steps; ++k) {
    beta = omega * (a_hat * beta) + restart * scores;
  }
  return beta;
}

Eigen::MatrixXd PropagationOperator(const Eigen::MatrixXd &a_hat, double omega,
                                    int steps) {
  CheckArguments(a_hat, a_hat.rows(), omega, steps);
  const long n = a_hat.rows();
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd restart = Eigen::MatrixXd::Zero(n, n);
  double weight = 1.0;
  for (int i = 0; i < steps; ++i) {
    restart += weight * power;
    power = a_hat * power;
    weight *= omega;
  }
  return weight * power + (1.0 - omega) * restart;
}

Eigen::MatrixXd PropagateScoresClosedForm(const Eigen::MatrixXd &scores,
                                          const Eigen::MatrixXd &a_hat,
                                          double omega, int steps) {
  CheckArguments(a_hat, scores.rows(), omega, steps);
  return PropagationOperator(a_hat, omega, steps) * scores;
}

namespace nn {

Tensor GraphPropagate(const Tensor &scores, const NormalizedAdjacency &a_hat,
                      double omega, int steps) {
  const Matrix &s = scores->value;
  CheckArguments(a_hat.entries, s.cols(), omega, steps);
  // Row form of the same recurrence: B <- omega B A_hat^T + (1 - omega) S.
  Matrix beta = s;
  for (int k = 0; k < steps; ++k) {
    beta = omega * (beta * a_hat.entries.transpose()) + (1.0 - omega) * s;
  }
  auto node = std::make_shared<Node>();
  node->value = std::move(beta);
  if (scores->requires_grad) {
    node->requires_grad = true;
    node->inputs = {scores};
    const Matrix a = a_hat.entries;
    node->backward = [a, omega, steps](Node &self) {
      // The map is S -> S P(A_hat)^T, so its adjoint is G -> G P(A_hat),
      // which the same recurrence computes with A_hat in place of A_hat^T.
      Matrix gamma = self.grad;
      for (int k = 0; k < steps; ++k) {
        gamma = omega * (gamma * a) + (1.0 - omega) * self.grad;
      }
      self.inputs[0]->AccumulateGrad(gamma);
    };
  }
  return node;
}

}  // namespace nn
}  // namespace unigraph
