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

#include "unigraph/annotation.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"

namespace unigraph {
namespace {

using nlohmann::json;

constexpr std::string_view kUniversalTags[] = {
    "ADJ",  "ADP",  "ADV", "AUX",   "CCONJ", "DET",  "INTJ", "NOUN", "NUM",
    "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X"};

std::string Describe(const std::string &doc_id, const std::string &rule,
                     long index, const std::string &detail) {
  std::ostringstream out;
  out << "document '" << doc_id << "': " << rule << " at index " << index;
  if (!detail.empty()) out << ": " << detail;
  return out.str();
}

const json &Field(const json &object, const char *name,
                  const std::string &doc_id, long index) {
  auto it = object.find(name);
  if (it == object.end()) {
    throw ValidationError(doc_id, "schema", index,
                          std::string("missing field '") + name + "'");
  }
  return *it;
}

template <typename T>
T Get(const json &object, const char *name, const std::string &doc_id,
      long index) {
  const json &value = Field(object, name, doc_id, index);
  try {
    return value.get<T>();
  } catch (const json::exception &) {
    throw ValidationError(doc_id, "schema", index,
                          std::string("field '") + name + "' has wrong type");
  }
}

const json &GetArray(const json &object, const char *name,
                     const std::string &doc_id, long index) {
  const json &value = Field(object, name, doc_id, index);
  if (!value.is_array()) {
    throw ValidationError(doc_id, "schema", index,
                          std::string("field '") + name + "' is not an array");
  }
  return value;
}

// Checks that the edges of one sentence form a single-rooted tree over its
// tokens. Indices in `heads` are sentence-local, kRoot marks the root.
void CheckTree(const std::string &doc_id, const Sentence &sentence,
               const std::vector<int> &heads) {
  int roots = 0;
  for (int i = 0; i < sentence.token_count; ++i) {
    if (heads[i] == kRoot) ++roots;
  }
  if (roots != 1) {
    throw ValidationError(doc_id, "tree violation", sentence.first_token,
                          "sentence " + std::to_string(sentence.sentence_id) +
                              " has " + std::to_string(roots) + " roots");
  }
  // Every token must reach the root within token_count steps.
  for (int i = 0; i < sentence.token_count; ++i) {
    int cursor = i;
    int steps = 0;
    while (cursor != kRoot) {
      cursor = heads[cursor];
      if (++steps > sentence.token_count) {
        throw ValidationError(doc_id, "tree violation",
                              sentence.first_token + i, "dependency cycle");
      }
    }
  }
}

}  // namespace

ValidationError::ValidationError(std::string doc_id, std::string rule,
                                 long index, const std::string &detail)
    : std::runtime_error(Describe(doc_id, rule, index, detail)),
      doc_id_(std::move(doc_id)),
      rule_(std::move(rule)),
      index_(index) {}

int DocumentSet::sentence_count() const {
  int count = 0;
  for (const auto &doc : documents) count += doc.sentences.size();
  return count;
}

int DocumentSet::token_count() const {
  int count = 0;
  for (const auto &doc : documents) count += doc.tokens.size();
  return count;
}

bool IsPunctuationTag(std::string_view pos_tag) { return pos_tag == "PUNCT"; }

bool IsUniversalTag(std::string_view pos_tag) {
  return std::find(std::begin(kUniversalTags), std::end(kUniversalTags),
                   pos_tag) != std::end(kUniversalTags);
}

DocumentSet ParseAnnotationFile(std::string_view bytes) {
  json root;
  try {
    root = json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error &e) {
    throw ParseError(e.what(), e.byte);
  }
  if (!root.is_object() || !root.contains("documents") ||
      !root["documents"].is_array()) {
    throw ParseError("top level must be an object with a 'documents' array",
                     0);
  }

  DocumentSet result;
  int next_sentence = 0;
  for (const json &jdoc : root["documents"]) {
    AnnotatedDocument doc;
    if (!jdoc.is_object()) {
      throw ValidationError("", "schema", result.documents.size(),
                            "document is not an object");
    }
    doc.doc_id = Get<std::string>(jdoc, "doc_id", "", result.documents.size());
    for (const json &jsent : GetArray(jdoc, "sentences", doc.doc_id, 0)) {
      Sentence sentence;
      sentence.sentence_id = next_sentence++;
      sentence.first_token = doc.tokens.size();
      for (const json &jtok :
           GetArray(jsent, "tokens", doc.doc_id, sentence.sentence_id)) {
        Token token;
        token.index = doc.tokens.size();
        token.sentence_id = sentence.sentence_id;
        token.text = Get<std::string>(jtok, "text", doc.doc_id, token.index);
        token.pos_tag = Get<std::string>(jtok, "pos", doc.doc_id, token.index);
        token.is_punct = jtok.contains("is_punct")
                             ? Get<bool>(jtok, "is_punct", doc.doc_id,
                                         token.index)
                             : IsPunctuationTag(token.pos_tag);
        doc.tokens.push_back(std::move(token));
      }
      sentence.token_count = doc.tokens.size() - sentence.first_token;
      if (jsent.contains("dependencies")) {
        for (const json &jdep : GetArray(jsent, "dependencies", doc.doc_id,
                                         sentence.sentence_id)) {
          int head = Get<int>(jdep, "head", doc.doc_id, sentence.first_token);
          int dep = Get<int>(jdep, "dep", doc.doc_id, sentence.first_token);
          auto in_range = [&](int i) {
            return i >= 0 && i < sentence.token_count;
          };
          if (!in_range(dep) || (head != kRoot && !in_range(head))) {
            throw ValidationError(doc.doc_id, "dependency range",
                                  sentence.first_token + std::max(dep, 0),
                                  "edge " + std::to_string(head) + "->" +
                                      std::to_string(dep) +
                                      " outside sentence " +
                                      std::to_string(sentence.sentence_id));
          }
          DependencyEdge edge;
          edge.head = head == kRoot ? kRoot : sentence.first_token + head;
          edge.dependent = sentence.first_token + dep;
          edge.relation =
              Get<std::string>(jdep, "rel", doc.doc_id, edge.dependent);
          doc.dependency_edges.push_back(std::move(edge));
        }
      }
      doc.sentences.push_back(sentence);
    }
    if (jdoc.contains("coref_chains")) {
      for (const json &jchain :
           GetArray(jdoc, "coref_chains", doc.doc_id, 0)) {
        if (!jchain.is_array()) {
          throw ValidationError(doc.doc_id, "schema",
                                doc.coref_chains.size(),
                                "chain is not an array");
        }
        CoreferenceChain chain;
        for (const json &jspan : jchain) {
          long at = doc.coref_chains.size();
          chain.mentions.push_back({Get<int>(jspan, "sentence", doc.doc_id, at),
                                    Get<int>(jspan, "start", doc.doc_id, at),
                                    Get<int>(jspan, "end", doc.doc_id, at)});
        }
        doc.coref_chains.push_back(std::move(chain));
      }
    }
    result.documents.push_back(std::move(doc));
  }
  ValidateDocumentSet(result);
  return result;
}

DocumentSet ReadAnnotationFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("no such input: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseAnnotationFile(buffer.str());
}

std::string SerializeAnnotations(const DocumentSet &documents) {
  json jdocs = json::array();
  for (const auto &doc : documents.documents) {
    json jsentences = json::array();
    for (const auto &sentence : doc.sentences) {
      json jtokens = json::array();
      for (int i = 0; i < sentence.token_count; ++i) {
        const Token &token = doc.tokens[sentence.first_token + i];
        jtokens.push_back({{"text", token.text},
                           {"pos", token.pos_tag},
                           {"is_punct", token.is_punct}});
      }
      json jdeps = json::array();
      for (const auto &edge : doc.dependency_edges) {
        if (doc.tokens[edge.dependent].sentence_id != sentence.sentence_id) {
          continue;
        }
        jdeps.push_back(
            {{"head", edge.head == kRoot ? kRoot
                                         : edge.head - sentence.first_token},
             {"dep", edge.dependent - sentence.first_token},
             {"rel", edge.relation}});
      }
      jsentences.push_back({{"tokens", jtokens}, {"dependencies", jdeps}});
    }
    json jchains = json::array();
    for (const auto &chain : doc.coref_chains) {
      json jchain = json::array();
      for (const auto &span : chain.mentions) {
        jchain.push_back({{"sentence", span.sentence_id},
                          {"start", span.start},
                          {"end", span.end}});
      }
      jchains.push_back(std::move(jchain));
    }
    jdocs.push_back({{"doc_id", doc.doc_id},
                     {"sentences", jsentences},
                     {"coref_chains", jchains}});
  }
  json root = {{"documents", jdocs}};
  return root.dump();
}

void ValidateDocumentSet(const DocumentSet &documents) {
  std::set<std::string> seen_ids;
  // Token count of every global sentence, for mention bounds.
  std::vector<int> sentence_lengths;
  for (const auto &doc : documents.documents) {
    for (const auto &sentence : doc.sentences) {
      sentence_lengths.push_back(sentence.token_count);
    }
  }

  int expected_sentence = 0;
  for (size_t d = 0; d < documents.documents.size(); ++d) {
    const AnnotatedDocument &doc = documents.documents[d];
    if (!seen_ids.insert(doc.doc_id).second) {
      throw ValidationError(doc.doc_id, "duplicate doc_id", d, "");
    }
    int previous_sentence = -1;
    for (size_t i = 0; i < doc.tokens.size(); ++i) {
      const Token &token = doc.tokens[i];
      if (token.index != static_cast<int>(i)) {
        throw ValidationError(doc.doc_id, "token index", i,
                              "token index does not match its position");
      }
      if (token.sentence_id < previous_sentence) {
        throw ValidationError(doc.doc_id, "sentence order", i,
                              "sentence ids must be non-decreasing");
      }
      previous_sentence = token.sentence_id;
    }

    // Each sentence must be a contiguous, non-empty token block with a tree.
    int covered = 0;
    std::map<int, const Sentence *> by_id;
    for (const Sentence &sentence : doc.sentences) {
      if (sentence.sentence_id != expected_sentence++) {
        throw ValidationError(doc.doc_id, "sentence order",
                              sentence.first_token,
                              "sentence ids must be consecutive");
      }
      if (sentence.token_count <= 0) {
        throw ValidationError(doc.doc_id, "empty sentence",
                              sentence.sentence_id, "sentence has no tokens");
      }
      if (sentence.first_token != covered) {
        throw ValidationError(doc.doc_id, "sentence coverage",
                              sentence.first_token,
                              "sentences must tile the token list");
      }
      for (int i = 0; i < sentence.token_count; ++i) {
        if (doc.tokens[covered + i].sentence_id != sentence.sentence_id) {
          throw ValidationError(doc.doc_id, "sentence coverage", covered + i,
                                "token assigned to the wrong sentence");
        }
      }
      covered += sentence.token_count;
      by_id[sentence.sentence_id] = &sentence;
    }
    if (covered != static_cast<int>(doc.tokens.size())) {
      throw ValidationError(doc.doc_id, "sentence coverage", covered,
                            "tokens outside every sentence");
    }

    // Sentence-local head arrays, with -2 marking "no incoming edge yet".
    std::map<int, std::vector<int>> heads;
    for (const Sentence &sentence : doc.sentences) {
      heads[sentence.sentence_id].assign(sentence.token_count, -2);
    }
    const int n_tokens = doc.tokens.size();
    for (const DependencyEdge &edge : doc.dependency_edges) {
      if (edge.dependent < 0 || edge.dependent >= n_tokens ||
          (edge.head != kRoot && (edge.head < 0 || edge.head >= n_tokens))) {
        throw ValidationError(doc.doc_id, "dependency range", edge.dependent,
                              "edge endpoint outside document");
      }
      const int sid = doc.tokens[edge.dependent].sentence_id;
      if (edge.head != kRoot && doc.tokens[edge.head].sentence_id != sid) {
        throw ValidationError(doc.doc_id, "tree violation", edge.dependent,
                              "edge crosses sentences");
      }
      const Sentence &sentence = *by_id.at(sid);
      int &slot = heads[sid][edge.dependent - sentence.first_token];
      if (slot != -2) {
        throw ValidationError(doc.doc_id, "tree violation", edge.dependent,
                              "token has more than one head");
      }
      slot = edge.head == kRoot ? kRoot : edge.head - sentence.first_token;
    }
    for (const Sentence &sentence : doc.sentences) {
      const auto &local = heads[sentence.sentence_id];
      for (int i = 0; i < sentence.token_count; ++i) {
        if (local[i] == -2) {
          throw ValidationError(doc.doc_id, "tree violation",
                                sentence.first_token + i, "token has no head");
        }
      }
      CheckTree(doc.doc_id, sentence, local);
    }

    for (size_t c = 0; c < doc.coref_chains.size(); ++c) {
      const CoreferenceChain &chain = doc.coref_chains[c];
      if (chain.mentions.size() < 2) {
        throw ValidationError(doc.doc_id, "chain size", c,
                              "a chain needs at least two mentions");
      }
      for (const Span &span : chain.mentions) {
        if (span.start > span.end || span.start < 0) {
          throw ValidationError(doc.doc_id, "mention empty", c,
                                "span start after end");
        }
        if (span.sentence_id < 0 ||
            span.sentence_id >= static_cast<int>(sentence_lengths.size()) ||
            span.end >= sentence_lengths[span.sentence_id]) {
          throw ValidationError(doc.doc_id, "mention bounds", c,
                                "span outside the document set");
        }
      }
    }
  }
}

std::vector<CoreferenceChain> MergeCoreferenceChains(
    const std::vector<CoreferenceChain> &chains) {
  // Union-find over chains keyed by shared spans.
  std::vector<int> parent(chains.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::map<Span, int> owner;
  for (size_t c = 0; c < chains.size(); ++c) {
    for (const Span &span : chains[c].mentions) {
      auto [it, inserted] = owner.emplace(span, c);
      if (!inserted) {
        int a = find(it->second), b = find(c);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
  }
  std::map<int, std::set<Span>> groups;
  for (size_t c = 0; c < chains.size(); ++c) {
    auto &group = groups[find(c)];
    group.insert(chains[c].mentions.begin(), chains[c].mentions.end());
  }
  std::vector<CoreferenceChain> merged;
  for (auto &[root, spans] : groups) {
    merged.push_back({std::vector<Span>(spans.begin(), spans.end())});
  }
  std::sort(merged.begin(), merged.end(),
            [](const CoreferenceChain &a, const CoreferenceChain &b) {
              return a.mentions < b.mentions;
            });
  return merged;
}

DocumentSet ExtractDocument(const DocumentSet &documents, size_t index) {
  AnnotatedDocument doc = documents.documents.at(index);
  const int offset = doc.sentences.empty() ? 0 : doc.sentences[0].sentence_id;
  for (auto &token : doc.tokens) token.sentence_id -= offset;
  for (auto &sentence : doc.sentences) sentence.sentence_id -= offset;
  for (auto &chain : doc.coref_chains) {
    for (auto &mention : chain.mentions) mention.sentence_id -= offset;
  }
  DocumentSet out;
  out.documents.push_back(std::move(doc));
  return out;
}

}  // namespace unigraph
