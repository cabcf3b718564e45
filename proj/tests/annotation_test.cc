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

#include <gtest/gtest.h>

#include <map>
#include <queue>
#include <random>
#include <set>

#include "test_util.h"

namespace unigraph {
namespace {

constexpr char kMinimal[] = R"({"documents":[{"doc_id":"d","sentences":[
  {"tokens":[{"text":"Dogs","pos":"NOUN","is_punct":false},
             {"text":"bark","pos":"VERB","is_punct":false},
             {"text":".","pos":"PUNCT","is_punct":true}],
   "dependencies":[{"head":1,"dep":0,"rel":"nsubj"},
                   {"head":-1,"dep":1,"rel":"root"},
                   {"head":1,"dep":2,"rel":"punct"}]}],
  "coref_chains":[]}]})";

std::string WithDependencies(const std::string &deps) {
  return R"({"documents":[{"doc_id":"d","sentences":[
    {"tokens":[{"text":"a","pos":"NOUN"},{"text":"b","pos":"VERB"}],
     "dependencies":)" +
         deps + "}]}]}";
}

std::string ValidationRule(const std::string &json) {
  try {
    ValidateDocumentSet(ParseAnnotationFile(json));
  } catch (const ValidationError &e) {
    return e.rule();
  }
  return "";
}

TEST(AnnotationTest, ParsesMinimalDocument) {
  const DocumentSet set = ParseAnnotationFile(kMinimal);
  ValidateDocumentSet(set);
  ASSERT_EQ(set.documents.size(), 1u);
  const AnnotatedDocument &doc = set.documents[0];
  EXPECT_EQ(doc.doc_id, "d");
  ASSERT_EQ(doc.tokens.size(), 3u);
  EXPECT_EQ(doc.tokens[1].text, "bark");
  EXPECT_TRUE(doc.tokens[2].is_punct);
  ASSERT_EQ(doc.dependency_edges.size(), 3u);
  EXPECT_EQ(doc.dependency_edges[1].head, kRoot);
  EXPECT_EQ(set.sentence_count(), 1);
  EXPECT_EQ(set.token_count(), 3);
}

TEST(AnnotationTest, EmptyDocumentSetIsValid) {
  const DocumentSet set = ParseAnnotationFile(R"({"documents":[]})");
  ValidateDocumentSet(set);
  EXPECT_TRUE(set.documents.empty());
}

TEST(AnnotationTest, MalformedJsonReportsOffset) {
  try {
    ParseAnnotationFile(R"({"documents":[ )");
    FAIL() << "expected ParseError";
  } catch (const ParseError &e) {
    EXPECT_GT(e.byte_offset(), 0u);
  }
}

TEST(AnnotationTest, TwoCycleIsTreeViolation) {
  EXPECT_EQ(ValidationRule(WithDependencies(
                R"([{"head":1,"dep":0,"rel":"x"},{"head":0,"dep":1,"rel":"y"}])")),
            "tree violation");
}

TEST(AnnotationTest, TwoRootsIsTreeViolation) {
  EXPECT_EQ(ValidationRule(WithDependencies(
                R"([{"head":-1,"dep":0,"rel":"x"},{"head":-1,"dep":1,"rel":"y"}])")),
            "tree violation");
}

TEST(AnnotationTest, MissingHeadIsTreeViolation) {
  EXPECT_EQ(ValidationRule(WithDependencies(R"([{"head":-1,"dep":1,"rel":"r"}])")),
            "tree violation");
}

TEST(AnnotationTest, OutOfRangeDependency) {
  EXPECT_EQ(ValidationRule(WithDependencies(
                R"([{"head":-1,"dep":1,"rel":"r"},{"head":7,"dep":0,"rel":"x"}])")),
            "dependency range");
}

TEST(AnnotationTest, DuplicateDocIdRejected) {
  const std::string doc =
      R"({"doc_id":"same","sentences":[{"tokens":[{"text":"a","pos":"X"}],
          "dependencies":[{"head":-1,"dep":0,"rel":"root"}]}]})";
  EXPECT_EQ(ValidationRule(R"({"documents":[)" + doc + "," + doc + "]}"),
            "duplicate doc_id");
}

TEST(AnnotationTest, MentionOutsideDocumentSetRejected) {
  std::string json = kMinimal;
  json.replace(json.find(R"("coref_chains":[])"), 17,
               R"("coref_chains":[[{"sentence":0,"start":0,"end":0},
                  {"sentence":0,"start":1,"end":5}]])");
  EXPECT_EQ(ValidationRule(json), "mention bounds");
}

TEST(AnnotationTest, SingleMentionChainRejected) {
  std::string json = kMinimal;
  json.replace(json.find(R"("coref_chains":[])"), 17,
               R"("coref_chains":[[{"sentence":0,"start":0,"end":0}]])");
  EXPECT_EQ(ValidationRule(json), "chain size");
}

TEST(AnnotationTest, MissingFieldIsSchemaError) {
  EXPECT_EQ(ValidationRule(R"({"documents":[{"sentences":[]}]})"), "schema");
}

TEST(AnnotationTest, PunctuationTagDecidesWhenFlagAbsent) {
  const DocumentSet set = ParseAnnotationFile(R"({"documents":[{"doc_id":"d",
    "sentences":[{"tokens":[{"text":"a","pos":"NOUN"},{"text":"!","pos":"PUNCT"}],
    "dependencies":[{"head":-1,"dep":0,"rel":"root"},{"head":0,"dep":1,"rel":"punct"}]}]}]})");
  EXPECT_FALSE(set.documents[0].tokens[0].is_punct);
  EXPECT_TRUE(set.documents[0].tokens[1].is_punct);
}

TEST(AnnotationTest, MissingFileSaysNoSuchInput) {
  try {
    ReadAnnotationFile("/nonexistent/annotations.json");
    FAIL() << "expected failure";
  } catch (const std::ios_base::failure &e) {
    EXPECT_NE(std::string(e.what()).find("no such input"), std::string::npos);
  }
}

TEST(AnnotationTest, RoundTripRandomDocuments) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const DocumentSet set = testing::RandomDocumentSet(rng);
    ValidateDocumentSet(set);
    const DocumentSet again = ParseAnnotationFile(SerializeAnnotations(set));
    ASSERT_EQ(again, set) << "trial " << trial;
    EXPECT_EQ(SerializeAnnotations(again), SerializeAnnotations(set));
  }
}

TEST(AnnotationTest, FixturesValidate) {
  for (const char *name : {"einstein.json", "corpus.json",
                           "nested_prefix.json", "empty_doc.json"}) {
    EXPECT_NO_THROW(
        ValidateDocumentSet(ReadAnnotationFile(testing::FixturePath(name))))
        << name;
  }
  EXPECT_THROW(ValidateDocumentSet(ReadAnnotationFile(
                   testing::FixturePath("invalid_cycle.json"))),
               ValidationError);
}

TEST(AnnotationTest, ExtractDocumentRenumbersSentences) {
  const DocumentSet corpus =
      ReadAnnotationFile(testing::FixturePath("corpus.json"));
  const DocumentSet second = ExtractDocument(corpus, 1);
  ValidateDocumentSet(second);
  ASSERT_EQ(second.documents.size(), 1u);
  EXPECT_EQ(second.documents[0].doc_id, corpus.documents[1].doc_id);
  EXPECT_EQ(second.documents[0].sentences[0].sentence_id, 0);
  EXPECT_EQ(second.documents[0].coref_chains[0].mentions[0].sentence_id, 0);
}

// Connected components of the "shares a span" relation, by breadth-first
// search over chains.
std::set<std::set<Span>> ComponentOracle(
    const std::vector<CoreferenceChain> &chains) {
  const int n = chains.size();
  std::vector<int> component(n, -1);
  std::set<std::set<Span>> out;
  for (int start = 0; start < n; ++start) {
    if (component[start] >= 0) continue;
    std::set<Span> spans;
    std::queue<int> frontier;
    frontier.push(start);
    component[start] = start;
    while (!frontier.empty()) {
      const int c = frontier.front();
      frontier.pop();
      spans.insert(chains[c].mentions.begin(), chains[c].mentions.end());
      for (int other = 0; other < n; ++other) {
        if (component[other] >= 0) continue;
        for (const Span &s : chains[other].mentions) {
          if (std::count(chains[c].mentions.begin(), chains[c].mentions.end(),
                         s)) {
            component[other] = start;
            frontier.push(other);
            break;
          }
        }
      }
    }
    out.insert(spans);
  }
  return out;
}

TEST(AnnotationTest, MergeChainsMatchesComponentOracle) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> small(0, 5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<CoreferenceChain> chains(1 + small(rng));
    for (auto &chain : chains) {
      const int size = 1 + small(rng) % 3;
      for (int m = 0; m < size; ++m) {
        const int sentence = small(rng) % 3;
        const int start = small(rng);
        chain.mentions.push_back({sentence, start, start + small(rng) % 2});
      }
    }
    const auto merged = MergeCoreferenceChains(chains);
    std::set<std::set<Span>> actual;
    for (const auto &chain : merged) {
      EXPECT_TRUE(std::is_sorted(chain.mentions.begin(), chain.mentions.end()));
      actual.insert({chain.mentions.begin(), chain.mentions.end()});
    }
    EXPECT_EQ(actual, ComponentOracle(chains)) << "trial " << trial;
    EXPECT_EQ(MergeCoreferenceChains(merged), merged) << "idempotence";
  }
}

}  // namespace
}  // namespace unigraph
