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

#include "unigraph/toy_task.h"

#include <array>
#include <random>
#include <stdexcept>

#include "unigraph/graph_builder.h"

namespace unigraph {
namespace {

struct Person {
  const char *name;
  const char *pronoun;
};

constexpr std::array<Person, 8> kPeople = {{{"Alice", "She"},
                                           {"Carol", "She"},
                                           {"Emma", "She"},
                                           {"Grace", "She"},
                                           {"Bob", "He"},
                                           {"David", "He"},
                                           {"Frank", "He"},
                                           {"Henry", "He"}}};
constexpr std::array<const char *, 8> kVerbs = {
    "painted", "fixed", "sold", "bought", "cleaned", "moved", "found", "lost"};
constexpr std::array<const char *, 8> kObjects = {
    "fence", "car", "boat", "house", "bike", "piano", "lamp", "door"};

// Appends "<subject> <verb> the <object> ." as one sentence.
void AppendSentence(AnnotatedDocument &doc, int sentence_id,
                    const std::string &subject, const std::string &subject_pos,
                    const std::string &verb, const std::string &object) {
  const int first = static_cast<int>(doc.tokens.size());
  const std::array<std::pair<std::string, std::string>, 5> words = {{
      {subject, subject_pos},
      {verb, "VERB"},
      {"the", "DET"},
      {object, "NOUN"},
      {".", "PUNCT"},
  }};
  for (int i = 0; i < 5; ++i) {
    Token token;
    token.index = first + i;
    token.text = words[i].first;
    token.pos_tag = words[i].second;
    token.sentence_id = sentence_id;
    token.is_punct = i == 4;
    doc.tokens.push_back(token);
  }
  doc.sentences.push_back({sentence_id, first, 5});
  doc.dependency_edges.push_back({kRoot, first + 1, "root"});
  doc.dependency_edges.push_back({first + 1, first, "nsubj"});
  doc.dependency_edges.push_back({first + 3, first + 2, "det"});
  doc.dependency_edges.push_back({first + 1, first + 3, "obj"});
  doc.dependency_edges.push_back({first + 1, first + 4, "punct"});
}

}  // namespace

Vocabulary::Vocabulary() {
  for (const char *special : {"<pad>", "<unk>", "<bos>", "<eos>"}) Add(special);
}

Vocabulary::Vocabulary(const std::vector<std::string> &words) {
  for (const auto &word : words) {
    if (ids_.count(word)) {
      throw std::invalid_argument("duplicate vocabulary word: " + word);
    }
    Add(word);
  }
  if (size() < 4 || words_[kPad] != "<pad>" || words_[kUnk] != "<unk>" ||
      words_[kBos] != "<bos>" || words_[kEos] != "<eos>") {
    throw std::invalid_argument("vocabulary must start with special tokens");
  }
}

int Vocabulary::Add(std::string_view word) {
  auto it = ids_.find(word);
  if (it != ids_.end()) return it->second;
  const int id = size();
  words_.emplace_back(word);
  ids_.emplace(std::string(word), id);
  return id;
}

int Vocabulary::Id(std::string_view word) const {
  auto it = ids_.find(word);
  return it == ids_.end() ? kUnk : it->second;
}

const std::string &Vocabulary::Word(int id) const {
  if (id < 0 || id >= size()) throw std::out_of_range("token id out of range");
  return words_[id];
}

std::vector<int> Vocabulary::Encode(
    const std::vector<std::string> &words) const {
  std::vector<int> ids;
  ids.reserve(words.size());
  for (const auto &word : words) ids.push_back(Id(word));
  return ids;
}

std::string Vocabulary::Decode(const std::vector<int> &ids) const {
  std::string text;
  for (int id : ids) {
    if (!text.empty()) text += ' ';
    text += Word(id);
  }
  return text;
}

std::vector<int> EncodeDocuments(const DocumentSet &documents,
                                 const Vocabulary &vocabulary) {
  std::vector<int> ids;
  for (const auto &doc : documents.documents) {
    for (const auto &token : doc.tokens) ids.push_back(vocabulary.Id(token.text));
  }
  return ids;
}

ToyTask MakePlantedCorefTask(int num_examples, uint64_t seed) {
  if (num_examples < 0) {
    throw std::invalid_argument("num_examples must be non-negative");
  }
  ToyTask task;
  task.seed = seed;
  for (const auto &person : kPeople) {
    task.vocabulary.Add(person.name);
    task.vocabulary.Add(person.pronoun);
  }
  for (const char *verb : kVerbs) task.vocabulary.Add(verb);
  for (const char *object : kObjects) task.vocabulary.Add(object);
  for (const char *word : {"the", ".", "and"}) task.vocabulary.Add(word);

  std::mt19937_64 rng(seed);
  auto pick = [&rng](int n) {
    return static_cast<int>(std::uniform_int_distribution<int>(0, n - 1)(rng));
  };
  for (int e = 0; e < num_examples; ++e) {
    // One woman and one man, so the pronoun is unambiguous.
    const Person &woman = kPeople[pick(4)];
    const Person &man = kPeople[4 + pick(4)];
    const bool woman_first = pick(2) == 0;
    const Person &first = woman_first ? woman : man;
    const Person &second = woman_first ? man : woman;
    const int referent = pick(2);
    const Person &target = referent == 0 ? first : second;

    std::array<int, 3> verbs{};
    std::array<int, 3> objects{};
    for (int s = 0; s < 3; ++s) {
      verbs[s] = pick(static_cast<int>(kVerbs.size()));
      objects[s] = pick(static_cast<int>(kObjects.size()));
    }

    AnnotatedDocument doc;
    doc.doc_id = "toy-" + std::to_string(e);
    AppendSentence(doc, 0, first.name, "PROPN", kVerbs[verbs[0]],
                   kObjects[objects[0]]);
    AppendSentence(doc, 1, second.name, "PROPN", kVerbs[verbs[1]],
                   kObjects[objects[1]]);
    AppendSentence(doc, 2, target.pronoun, "PRON", kVerbs[verbs[2]],
                   kObjects[objects[2]]);
    CoreferenceChain chain;
    chain.mentions.push_back({referent, 0, 0});
    chain.mentions.push_back({2, 0, 0});
    doc.coref_chains.push_back(chain);

    ToyExample example;
    example.input_id = doc.doc_id;
    example.input.documents.push_back(std::move(doc));
    example.input_ids = EncodeDocuments(example.input, task.vocabulary);
    example.target_ids = task.vocabulary.Encode(
        {target.name, kVerbs[verbs[referent]], "the",
         kObjects[objects[referent]], "and", kVerbs[verbs[2]], "the",
         kObjects[objects[2]]});
    example.target_ids.push_back(Vocabulary::kEos);
    example.graph = BuildGraph(example.input);
    task.examples.push_back(std::move(example));
  }
  return task;
}

}  // namespace unigraph
