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

#ifndef UNIGRAPH_ANNOTATION_H_
#define UNIGRAPH_ANNOTATION_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace unigraph {

// Thrown when the annotation bytes are not well-formed JSON or do not match
// the schema shape. byte_offset() is the position reported by the JSON
// reader, or 0 for shape errors.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string &message, size_t byte_offset)
      : std::runtime_error(message), byte_offset_(byte_offset) {}
  size_t byte_offset() const { return byte_offset_; }

 private:
  size_t byte_offset_;
};

// Thrown when a structurally valid document violates an annotation invariant.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string doc_id, std::string rule, long index,
                  const std::string &detail);
  const std::string &doc_id() const { return doc_id_; }
  const std::string &rule() const { return rule_; }
  long index() const { return index_; }

 private:
  std::string doc_id_;
  std::string rule_;
  long index_;
};

// Head index used for the root of a sentence tree.
inline constexpr int kRoot = -1;

struct Token {
  int index = 0;        // position within the document
  std::string text;
  std::string pos_tag;  // universal POS tag
  int sentence_id = 0;  // global sentence number within the document set
  bool is_punct = false;

  bool operator==(const Token &) const = default;
};

// Head and dependent are document token indices; head == kRoot for the root.
struct DependencyEdge {
  int head = kRoot;
  int dependent = 0;
  std::string relation;

  bool operator==(const DependencyEdge &) const = default;
};

// Token span inside one sentence. start/end are sentence-local token
// positions, end inclusive.
struct Span {
  int sentence_id = 0;
  int start = 0;
  int end = 0;

  int length() const { return end - start + 1; }
  auto operator<=>(const Span &) const = default;
};

struct CoreferenceChain {
  std::vector<Span> mentions;

  bool operator==(const CoreferenceChain &) const = default;
};

struct Sentence {
  int sentence_id = 0;
  int first_token = 0;  // document token index of the first token
  int token_count = 0;

  bool operator==(const Sentence &) const = default;
};

struct AnnotatedDocument {
  std::string doc_id;
  std::vector<Token> tokens;
  std::vector<Sentence> sentences;
  std::vector<DependencyEdge> dependency_edges;
  std::vector<CoreferenceChain> coref_chains;

  bool operator==(const AnnotatedDocument &) const = default;
};

struct DocumentSet {
  std::vector<AnnotatedDocument> documents;

  int sentence_count() const;
  int token_count() const;

  bool operator==(const DocumentSet &) const = default;
};

// True if a token with this tag counts as punctuation when the annotation
// does not say otherwise.
bool IsPunctuationTag(std::string_view pos_tag);

// True for the 17 universal POS tags.
bool IsUniversalTag(std::string_view pos_tag);

// Parses and validates one annotation file. Sentence numbers in coreference
// mentions are global over the document set, in document order.
DocumentSet ParseAnnotationFile(std::string_view bytes);
DocumentSet ReadAnnotationFile(const std::string &path);

// Inverse of ParseAnnotationFile.
std::string SerializeAnnotations(const DocumentSet &documents);

// Checks every document invariant; throws ValidationError on the first
// violation found.
void ValidateDocumentSet(const DocumentSet &documents);

// Unions chains that share an identical span. Output mentions are sorted and
// deduplicated, and chains are ordered by their first mention.
std::vector<CoreferenceChain> MergeCoreferenceChains(
    const std::vector<CoreferenceChain> &chains);

// The document at `index` as a set of its own, with sentences renumbered
// from 0.
DocumentSet ExtractDocument(const DocumentSet &documents, size_t index);

}  // namespace unigraph

#endif  // UNIGRAPH_ANNOTATION_H_
