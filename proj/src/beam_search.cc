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

#include "unigraph/beam_search.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <tuple>

namespace unigraph {

bool TrigramAllowed(const std::vector<int> &hypothesis, int candidate) {
  const size_t n = hypothesis.size();
  if (n < 2) return true;
  const int a = hypothesis[n - 2];
  const int b = hypothesis[n - 1];
  for (size_t i = 0; i + 2 < n; ++i) {
    if (hypothesis[i] == a && hypothesis[i + 1] == b &&
        hypothesis[i + 2] == candidate) {
      return false;
    }
  }
  return true;
}

bool HasRepeatedTrigram(const std::vector<int> &tokens) {
  std::set<std::tuple<int, int, int>> seen;
  for (size_t i = 0; i + 2 < tokens.size(); ++i) {
    if (!seen.emplace(tokens[i], tokens[i + 1], tokens[i + 2]).second) {
      return true;
    }
  }
  return false;
}

double NormalizedScore(const BeamHypothesis &hypothesis, double penalty) {
  const double length = std::max<size_t>(1, hypothesis.tokens.size());
  return hypothesis.log_prob / std::pow(length, penalty);
}

namespace {

struct Candidate {
  double log_prob;
  int parent;
  int token;
};

BeamResult ToResult(const BeamHypothesis &h, double penalty, int eos) {
  BeamResult result;
  result.tokens = h.tokens;
  if (h.finished && !result.tokens.empty() && result.tokens.back() == eos) {
    result.tokens.pop_back();
  }
  result.score = NormalizedScore(h, penalty);
  result.log_prob = h.log_prob;
  result.finished = h.finished;
  return result;
}

}  // namespace

BeamResult BeamSearch(const NextTokenScorer &scorer,
                      const BeamOptions &options) {
  if (options.beam_size < 1) {
    throw std::invalid_argument("beam_size must be at least 1");
  }
  if (options.max_len < 1) {
    throw std::invalid_argument("max_len must be at least 1");
  }
  std::vector<BeamHypothesis> live(1);
  std::vector<BeamHypothesis> retired;
  for (int step = 0; step < options.max_len && !live.empty(); ++step) {
    std::vector<Candidate> candidates;
    for (size_t p = 0; p < live.size(); ++p) {
      const size_t before = candidates.size();
      const Eigen::VectorXd log_probs = scorer(live[p].tokens);
      for (int token = 0; token < log_probs.size(); ++token) {
        const double lp = log_probs[token];
        if (lp == -std::numeric_limits<double>::infinity()) continue;
        if (options.trigram_blocking && token != options.eos &&
            !TrigramAllowed(live[p].tokens, token)) {
          continue;
        }
        candidates.push_back({live[p].log_prob + lp, static_cast<int>(p),
                              token});
      }
      // Every extension blocked: the hypothesis ends here.
      if (candidates.size() == before) retired.push_back(live[p]);
    }
    const size_t keep =
        std::min<size_t>(options.beam_size, candidates.size());
    std::partial_sort(candidates.begin(), candidates.begin() + keep,
                      candidates.end(),
                      [](const Candidate &a, const Candidate &b) {
                        if (a.log_prob != b.log_prob) {
                          return a.log_prob > b.log_prob;
                        }
                        if (a.parent != b.parent) return a.parent < b.parent;
                        return a.token < b.token;
                      });
    std::vector<BeamHypothesis> next;
    for (size_t i = 0; i < keep; ++i) {
      const Candidate &c = candidates[i];
      BeamHypothesis h = live[c.parent];
      h.tokens.push_back(c.token);
      h.log_prob = c.log_prob;
      if (c.token == options.eos) {
        h.finished = true;
        retired.push_back(std::move(h));
      } else {
        next.push_back(std::move(h));
      }
    }
    live = std::move(next);
  }
  retired.insert(retired.end(), live.begin(), live.end());
  if (retired.empty()) return {};
  // Stable: earlier entries win ties.
  const BeamHypothesis *best = &retired.front();
  double best_score = NormalizedScore(*best, options.length_penalty);
  for (const auto &h : retired) {
    const double score = NormalizedScore(h, options.length_penalty);
    if (score > best_score) {
      best = &h;
      best_score = score;
    }
  }
  return ToResult(*best, options.length_penalty, options.eos);
}

BeamResult GreedySearch(const NextTokenScorer &scorer,
                        const BeamOptions &options) {
  BeamOptions greedy = options;
  greedy.beam_size = 1;
  return BeamSearch(scorer, greedy);
}

NextTokenScorer ModelScorer(const GraphSummarizer &model,
                            const GraphSummarizer::Encoded &encoded, int bos) {
  return [&model, &encoded, bos](const std::vector<int> &prefix) {
    std::vector<int> ids;
    ids.reserve(prefix.size() + 1);
    ids.push_back(bos);
    ids.insert(ids.end(), prefix.begin(), prefix.end());
    return model.NextTokenLogProbs(encoded, ids);
  };
}

}  // namespace unigraph
