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

#ifndef UNIGRAPH_GRAPH_BUILDER_H_
#define UNIGRAPH_GRAPH_BUILDER_H_

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "unigraph/annotation.h"
#include "unigraph/graph.h"

namespace unigraph {

// Flat view of a document set. Global token positions concatenate the
// documents in order, which is also the order of the model's text input.
class DocumentIndex {
 public:
  explicit DocumentIndex(const DocumentSet &documents);

  int token_count() const { return tokens_.size(); }
  int sentence_count() const { return sentence_begin_.size(); }

  const Token &token(int global) const { return *tokens_[global]; }
  int document_of(int global) const { return document_[global]; }
  int sentence_begin(int sentence_id) const {
    return sentence_begin_[sentence_id];
  }
  int sentence_length(int sentence_id) const {
    return sentence_length_[sentence_id];
  }
  // Global head of a token, or kRoot.
  int head(int global) const { return heads_[global]; }
  const std::string &relation(int global) const { return relations_[global]; }

  // Global positions covered by a span, punctuation included.
  std::vector<int> SpanTokens(const Span &span) const;

 private:
  std::vector<const Token *> tokens_;
  std::vector<int> document_;
  std::vector<int> heads_;
  std::vector<std::string> relations_;
  std::vector<int> sentence_begin_;
  std::vector<int> sentence_length_;
};

// A group of tokens that acts as one vertex of a sentence tree. `chain` is
// the coreference chain of a collapsed mention, or -1.
struct TreeUnit {
  std::vector<int> tokens;  // ascending global positions
  int head_token = 0;
  int chain = -1;

  bool operator==(const TreeUnit &) const = default;
};

// Arc between units of one sentence tree, oriented head -> dependent.
struct UnitArc {
  int head_unit = 0;
  int dependent_unit = 0;
  std::string relation;

  bool operator==(const UnitArc &) const = default;
};

// Token-level dependency forest of one sentence plus a partition of its
// tokens into units. Arcs between units are the quotient of token arcs.
struct SentenceTree {
  int sentence_id = 0;
  std::vector<int> tokens;              // surviving tokens, surface order
  std::map<int, int> head;              // token -> head token or kRoot
  std::map<int, std::string> relation;  // token -> relation to its head
  std::vector<TreeUnit> units;

  int UnitOf(int token) const;
  std::vector<UnitArc> Arcs() const;
};

// Phrases of one sentence and the dependency edges between them.
struct PhraseEdge {
  int head_phrase = 0;
  int dependent_phrase = 0;
  std::string relation;
};

struct SentencePhrases {
  int sentence_id = 0;
  std::vector<Phrase> phrases;
  std::vector<int> chains;  // chain per phrase, -1 if none
  std::vector<PhraseEdge> edges;
};

struct GraphStats {
  int node_count = 0;
  int edge_count = 0;
  int input_token_count = 0;
  int component_count = 0;

  bool operator==(const GraphStats &) const = default;
};

// Relations whose dependents fold into their head when adjacent. Matched on
// the full label and on the part before ':' (so "compound:prt" matches
// "compound").
const std::set<std::string, std::less<>> &MergeableRelations();
bool IsMergeableRelation(std::string_view relation,
                         const std::set<std::string, std::less<>> &table =
                             MergeableRelations());

// Noun for NOUN/PROPN/PRON, verb for VERB/AUX, other otherwise. Tags outside
// the universal set map to other and add a diagnostic.
NodeType NodeTypeForTag(std::string_view pos_tag, Diagnostics *diagnostics);

// One unit per token, arcs from the dependency tree.
SentenceTree MakeSentenceTree(const DocumentIndex &index, int sentence_id);

// Node type of every token in the tree, keyed by global position.
std::map<int, NodeType> IdentifyNodeTypes(const SentenceTree &tree,
                                          const DocumentIndex &index,
                                          Diagnostics *diagnostics);

// Drops punctuation tokens and their arcs. Children of a dropped token
// become roots, so the result may be a forest.
SentenceTree PrunePunctuation(const SentenceTree &tree,
                              const DocumentIndex &index);

// Collapses every mention of `chains` that falls in this sentence into one
// unit. A mention that strictly contains another mention is skipped, and of
// two partially overlapping mentions the later-starting one is skipped; both
// cases add a diagnostic.
SentenceTree MergeCorefPhrases(const SentenceTree &tree,
                               const std::vector<CoreferenceChain> &chains,
                               const DocumentIndex &index,
                               Diagnostics *diagnostics);

// Depth-first phrase merging. Children are visited in surface order and
// merged bottom-up: a unit folds into its head when its relation is
// mergeable and the two token runs are adjacent.
SentencePhrases MergeNodes(const SentenceTree &tree,
                           const std::map<int, NodeType> &types,
                           const DocumentIndex &index,
                           const std::set<std::string, std::less<>> &table =
                               MergeableRelations());

// Unions phrases that share a coreference chain or are identical noun
// phrases (case-folded, whitespace-normalized, not headed by a pronoun) into
// graph nodes.
SemanticGraph MergePhrasesAcross(const std::vector<SentencePhrases> &sentences,
                                 const DocumentIndex &index);

// Full construction pipeline. Deterministic for a fixed input.
SemanticGraph BuildGraph(const DocumentSet &documents,
                         Diagnostics *diagnostics = nullptr);

GraphStats ComputeGraphStats(const SemanticGraph &graph, int input_len);

// All simple paths over ORIGINAL edges whose node types match `pattern`
// (length 2 or 3). Dependency arcs point from head to dependent, so a
// subject and an object both hang off their verb; each hop may therefore
// follow an ORIGINAL edge in either direction.
std::vector<std::vector<int>> EnumerateMetaPaths(
    const SemanticGraph &graph, const std::vector<NodeType> &pattern);

// Lowercased text with runs of whitespace collapsed.
std::string NormalizePhraseText(std::string_view text);

}  // namespace unigraph

#endif  // UNIGRAPH_GRAPH_BUILDER_H_
