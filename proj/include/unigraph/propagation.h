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

#ifndef UNIGRAPH_PROPAGATION_H_
#define UNIGRAPH_PROPAGATION_H_

#include <Eigen/Dense>

#include "unigraph/graph_augment.h"
#include "unigraph/tensor.h"

namespace unigraph {

// Personalized-propagation of salient scores over the graph.
//
// `scores` is n_nodes x channels (one column per attention head). Starting
// from beta_0 = scores, each step computes
//
//   beta_k = omega * A_hat * beta_{k-1} + (1 - omega) * beta_0
//
// so after `steps` iterations a node has aggregated at most `steps`-hop
// neighbours. omega must lie in (0, 1]; steps >= 0.
Eigen::MatrixXd PropagateScores(const Eigen::MatrixXd &scores,
                                const Eigen::MatrixXd &a_hat, double omega,
                                int steps);

// Mutation hook for self-checks: while enabled, PropagateScores subtracts
// the restart term instead of adding it.
void InjectPropagationSignFault(bool enabled);

// Same map written as a matrix polynomial:
//   (omega^p A_hat^p + (1 - omega) sum_{i<p} omega^i A_hat^i) * scores.
Eigen::MatrixXd PropagateScoresClosedForm(const Eigen::MatrixXd &scores,
                                          const Eigen::MatrixXd &a_hat,
                                          double omega, int steps);

// The propagation operator itself (n x n), i.e. the Jacobian of
// PropagateScores with respect to one score column.
Eigen::MatrixXd PropagationOperator(const Eigen::MatrixXd &a_hat, double omega,
                                    int steps);

namespace nn {

// Differentiable propagation for query-major scores: `scores` is
// queries x n_nodes (one head), propagation runs along the node axis.
Tensor GraphPropagate(const Tensor &scores, const NormalizedAdjacency &a_hat,
                      double omega, int steps);

}  // namespace nn
}  // namespace unigraph

#endif  // UNIGRAPH_PROPAGATION_H_
