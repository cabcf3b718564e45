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

#ifndef UNIGRAPH_BEAM_SEARCH_H_
#define UNIGRAPH_BEAM_SEARCH_H_

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "unigraph/model.h"

namespace unigraph {

// True unless appending `candidate` to `hypothesis` recreates a trigram
// already present in it.
bool TrigramAllowed(const std::vector<int> &hypothesis, int candidate);

// True if some trigram occurs twice in `tokens`.
bool HasRepeatedTrigram(const std::vector<int> &tokens);

struct BeamHypothesis {
  std::vector<int> tokens;  // generated ids, including eos when finished
  double log_prob = 0.0;
  bool finished = false;
};

// Next-token log-probabilities given the generated prefix (no BOS).
using NextTokenScorer =
    std::function<Eigen::VectorXd(const std::vector<int> &prefix)>;

struct BeamOptions {
  int beam_size = 5;
  double length_penalty = 0.9;
  int max_len = 32;
  bool trigram_blocking = true;
  // -1 disables end-of-sequence handling.
  int eos = -1;
};

// log_prob / length^penalty, with length counting every generated id.
double NormalizedScore(const BeamHypothesis &hypothesis, double penalty);

struct BeamResult {
  std::vector<int> tokens;  // without eos
  double score = 0.0;       // normalized
  double log_prob = 0.0;
  bool finished = false;
};

// Each step extends every live hypothesis by every allowed token, keeps the
// beam_size best by summed log-prob (ties: earlier parent, then lower token
// id), and retires those ending in eos or with no allowed extension. Stops
// when nothing is live or at max_len; the best normalized score among retired and live hypotheses wins.
// Throws std::invalid_argument if beam_size < 1.
BeamResult BeamSearch(const NextTokenScorer &scorer,
                      const BeamOptions &options);

// Beam search of width 1.
BeamResult GreedySearch(const NextTokenScorer &scorer,
                        const BeamOptions &options);

// Scorer over a model's decoder for one encoded input.
NextTokenScorer ModelScorer(const GraphSummarizer &model,
                            const GraphSummarizer::Encoded &encoded, int bos);

}  // namespace unigraph

#endif  // UNIGRAPH_BEAM_SEARCH_H_
