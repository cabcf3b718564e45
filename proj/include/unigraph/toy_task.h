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

#ifndef UNIGRAPH_TOY_TASK_H_
#define UNIGRAPH_TOY_TASK_H_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "unigraph/annotation.h"
#include "unigraph/graph.h"

namespace unigraph {

// Word <-> id table. Ids 0..3 are <pad>, <unk>, <bos>, <eos>.
class Vocabulary {
 public:
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;
  static constexpr int kBos = 2;
  static constexpr int kEos = 3;

  Vocabulary();
  explicit Vocabulary(const std::vector<std::string> &words);

  // Returns the existing id or appends the word.
  int Add(std::string_view word);
  // kUnk for unknown words.
  int Id(std::string_view word) const;
  const std::string &Word(int id) const;
  int size() const { return static_cast<int>(words_.size()); }
  const std::vector<std::string> &words() const { return words_; }

  std::vector<int> Encode(const std::vector<std::string> &words) const;
  std::string Decode(const std::vector<int> &ids) const;

 private:
  std::vector<std::string> words_;
  std::map<std::string, int, std::less<>> ids_;
};

struct ToyExample {
  std::string input_id;
  DocumentSet input;
  std::vector<int> input_ids;
  // Summary ids ending in kEos, without kBos.
  std::vector<int> target_ids;
  SemanticGraph graph;
};

struct ToyTask {
  uint64_t seed = 0;
  Vocabulary vocabulary;
  std::vector<ToyExample> examples;
};

// Three template sentences per input. Two named entities each do something;
// the third sentence refers back to one of them with a pronoun, linked by a
// coreference chain. The summary names the referenced entity, repeats its
// first action and appends the pronoun sentence's action, so it draws on two
// sentences joined through the chain:
//
//   Alice painted the fence . Bob fixed the car . She sold the boat .
//   -> Alice painted the fence and sold the boat
//
// The vocabulary is fixed, so tasks with different seeds share ids.
ToyTask MakePlantedCorefTask(int num_examples, uint64_t seed);

// Token ids of every token of every document, in global order.
std::vector<int> EncodeDocuments(const DocumentSet &documents,
                                 const Vocabulary &vocabulary);

}  // namespace unigraph

#endif  // UNIGRAPH_TOY_TASK_H_
