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

#ifndef UNIGRAPH_CHECKPOINT_H_
#define UNIGRAPH_CHECKPOINT_H_

#include <string>
#include <utility>
#include <vector>

#include "unigraph/model.h"

namespace unigraph {

// Flat named-tensor container.
//
// Layout: the 8-byte magic "UGCKPT01", a little-endian uint64 header size,
// a JSON header {"config": <key=value text>, "vocabulary": [...],
// "tensors": [{"name", "rows", "cols", "offset"}]}, then every tensor as
// row-major little-endian float64 at its byte offset from the data start.
struct Checkpoint {
  ModelConfig config;
  std::vector<std::string> vocabulary;
  std::vector<std::pair<std::string, Eigen::MatrixXd>> tensors;
};

Checkpoint MakeCheckpoint(const GraphSummarizer &model,
                          const std::vector<std::string> &vocabulary);
void WriteCheckpoint(const std::string &path, const Checkpoint &checkpoint);
Checkpoint ReadCheckpoint(const std::string &path);

// Copies tensors into a model built from checkpoint.config; names and
// shapes must match exactly.
void LoadWeights(GraphSummarizer &model, const Checkpoint &checkpoint);

}  // namespace unigraph

#endif  // UNIGRAPH_CHECKPOINT_H_
