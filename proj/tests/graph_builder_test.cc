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

#include "unigraph/graph_builder.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <queue>
#include <random>
#include <set>

#include "test_util.h"
#include "unigraph/graph_augment.h"

namespace unigraph {
namespace {

using testing::FixturePath;
using testing::RandomDocumentSet;
using testing::SentencePhrasesOf;

SemanticGraph Fixture(const std::string &name) {
  return BuildGraph(ReadAnnotationFile(FixturePath(name)));
}

int NodeWithPhrase(const SemanticGraph &g, const std::string &text) {
  for (const auto &node : g.nodes()) {
    for (const auto &p : node.phrases) {
      if (p.text == text) return node.id;
    }
  }
  return -1;
}

TEST(NodeTypeTest, UniversalTagMapping) {
  Diagnostics diags;
  EXPECT_EQ(NodeTypeForTag("NOUN", &diags), NodeType::kNoun);
  EXPECT_EQ(NodeTypeForTag("PROPN", &diags), NodeType::kNoun);
  EXPECT_EQ(NodeTypeForTag("PRON", &diags), NodeType::kNoun);
  EXPECT_EQ(NodeTypeForTag("VERB", &diags), NodeType::kVerb);
  EXPECT_EQ(NodeTypeForTag("AUX", &diags), NodeType::kVerb);
  for (const char *tag : {"ADJ", "ADP", "ADV", "CCONJ", "DET", "INTJ", "NUM",
                          "PART", "SCONJ", "SYM", "X", "PUNCT"}) {
    EXPECT_EQ(NodeTypeForTag(tag, &diags), NodeType::kOther) << tag;
  }
  EXPECT_TRUE(diags.empty());
  EXPECT_EQ(NodeTypeForTag("NNP", &diags), NodeType::kOther);
  ASSERT_EQ(diags.size(), 1u);
  EXPECT_EQ(diags[0].code, "unknown-pos");
}

TEST(MergeableTest, LabelsAndSubtypes) {
  EXPECT_TRUE(IsMergeableRelation("det"));
  EXPECT_TRUE(IsMergeableRelation("compound:prt"));
  EXPECT_TRUE(IsMergeableRelation("case"));
  EXPECT_FALSE(IsMergeableRelation("nsubj"));
  EXPECT_FALSE(IsMergeableRelation("obj"));
  EXPECT_FALSE(IsMergeableRelation("nmod:poss"));
}

TEST(PruneTest, MatchesDirectOracle) {
  std::mt19937_64 rng(3);
  testing::RandomDocOptions options;
  options.punct_prob = 0.3;
  for (int trial = 0; trial < 50; ++trial) {
    const DocumentSet set = RandomDocumentSet(rng, options);
    const DocumentIndex index(set);
    for (int s = 0; s < index.sentence_count(); ++s) {
      const SentenceTree tree = MakeSentenceTree(index, s);
      const SentenceTree pruned = PrunePunctuation(tree, index);
      std::vector<int> expected;
      for (int t : tree.tokens) {
        if (!index.token(t).is_punct) expected.push_back(t);
      }
      EXPECT_EQ(pruned.tokens, expected);
      ASSERT_EQ(pruned.units.size(), expected.size());
      for (int t : expected) {
        const int h = index.head(t);
        const int want = (h == kRoot || index.token(h).is_punct) ? kRoot : h;
        EXPECT_EQ(pruned.head.at(t), want);
      }
    }
  }
}

TEST(CorefCollapseTest, MentionBecomesOneUnitAndArcsAreQuotient) {
  std::mt19937_64 rng(8);
  testing::RandomDocOptions options;
  options.documents = 1;
  options.max_sentences = 1;
  options.max_tokens = 10;
  options.max_chains = 0;
  options.punct_prob = 0.0;
  int tested = 0;
  for (int trial = 0; trial < 200; ++trial) {
    DocumentSet set = RandomDocumentSet(rng, options);
    if (set.sentence_count() == 0) continue;
    const int n = set.documents[0].sentences[0].token_count;
    if (n < 4) continue;
    // Two disjoint contiguous mentions in one chain.
    const int a_end = std::uniform_int_distribution<int>(0, n / 2 - 1)(rng);
    const int b_start =
        std::uniform_int_distribution<int>(a_end + 1, n - 1)(rng);
    const std::vector<CoreferenceChain> chains = {
        {{{0, 0, a_end}, {0, b_start, n - 1}}}};
    const DocumentIndex index(set);
    Diagnostics diags;
    const SentenceTree tree = MergeCorefPhrases(
        PrunePunctuation(MakeSentenceTree(index, 0), index), chains, index,
        &diags);
    ++tested;
    std::set<int> first, second;
    for (int t = 0; t <= a_end; ++t) first.insert(tree.UnitOf(t));
    for (int t = b_start; t < n; ++t) second.insert(tree.UnitOf(t));
    ASSERT_EQ(first.size(), 1u);
    ASSERT_EQ(second.size(), 1u);
    EXPECT_EQ(tree.units[*first.begin()].chain, 0);
    EXPECT_EQ(tree.units[*second.begin()].chain, 0);
    // Units partition the tokens.
    std::multiset<int> covered;
    for (const auto &unit : tree.units) {
      covered.insert(unit.tokens.begin(), unit.tokens.end());
    }
    EXPECT_EQ(covered, std::multiset<int>(tree.tokens.begin(),
                                          tree.tokens.end()));
    // Unit arcs are the quotient of token arcs.
    std::set<std::pair<int, int>> expected, actual;
    for (int t : tree.tokens) {
      const int h = tree.head.at(t);
      if (h == kRoot) continue;
      if (tree.UnitOf(h) != tree.UnitOf(t)) {
        expected.emplace(tree.UnitOf(h), tree.UnitOf(t));
      }
    }
    for (const auto &arc : tree.Arcs()) {
      actual.emplace(arc.head_unit, arc.dependent_unit);
    }
    EXPECT_EQ(actual, expected);
  }
  EXPECT_GT(tested, 50);
}

TEST(CorefCollapseTest, NestedMentionKeepsInner) {
  const DocumentSet set =
      ReadAnnotationFile(FixturePath("corpus.json"));
  Diagnostics diags;
  const SemanticGraph g = BuildGraph(set, &diags);
  ASSERT_FALSE(diags.empty());
  EXPECT_EQ(diags[0].code, "nested-mention");
  // "Local farmers" and "They" remain one node; the outer mention did not
  // swallow "fresh vegetables".
  EXPECT_EQ(NodeWithPhrase(g, "Local farmers"), NodeWithPhrase(g, "They"));
  EXPECT_EQ(NodeWithPhrase(g, "fresh vegetables"), NodeWithPhrase(g, "them"));
  EXPECT_NE(NodeWithPhrase(g, "Local farmers"),
            NodeWithPhrase(g, "fresh vegetables"));
}

TEST(CorefCollapseTest, MentionOfOnlyPunctuationIsSkipped) {
  DocumentSet set = ParseAnnotationFile(R"({"documents":[{"doc_id":"d",
    "sentences":[{"tokens":[{"text":"Rain","pos":"NOUN"},{"text":"fell","pos":"VERB"},
                            {"text":".","pos":"PUNCT"}],
      "dependencies":[{"head":1,"dep":0,"rel":"nsubj"},{"head":-1,"dep":1,"rel":"root"},
                      {"head":1,"dep":2,"rel":"punct"}]}],
    "coref_chains":[[{"sentence":0,"start":0,"end":0},{"sentence":0,"start":2,"end":2}]]}]})");
  Diagnostics diags;
  const SemanticGraph g = BuildGraph(set, &diags);
  EXPECT_EQ(g.node_count(), 2);
  ASSERT_EQ(diags.size(), 1u);
  EXPECT_EQ(diags[0].code, "empty-mention");
}

// For projective chain-free sentences the merge pass is a fixpoint: no
// mergeable edge joins two adjacent phrases.
TEST(MergeNodesTest, FixpointOnProjectiveTrees) {
  std::mt19937_64 rng(21);
  testing::RandomDocOptions options;
  options.projective = true;
  options.max_chains = 0;
  options.max_tokens = 12;
  for (int trial = 0; trial < 200; ++trial) {
    const DocumentSet set = RandomDocumentSet(rng, options);
    const DocumentIndex index(set);
    for (const SentencePhrases &sp : SentencePhrasesOf(set, index)) {
      // Phrases partition the sentence and are contiguous.
      std::vector<int> all;
      for (const Phrase &p : sp.phrases) {
        for (size_t i = 1; i < p.tokens.size(); ++i) {
          EXPECT_EQ(p.tokens[i], p.tokens[i - 1] + 1);
        }
        EXPECT_TRUE(std::count(p.tokens.begin(), p.tokens.end(),
                               p.head_token));
        all.insert(all.end(), p.tokens.begin(), p.tokens.end());
      }
      std::sort(all.begin(), all.end());
      const int first = index.sentence_begin(sp.sentence_id);
      const int n = index.sentence_length(sp.sentence_id);
      ASSERT_EQ(static_cast<int>(all.size()), n);
      for (int i = 0; i < n; ++i) EXPECT_EQ(all[i], first + i);
      for (const PhraseEdge &e : sp.edges) {
        const Phrase &h = sp.phrases[e.head_phrase];
        const Phrase &d = sp.phrases[e.dependent_phrase];
        const bool adjacent = h.tokens.back() + 1 == d.tokens.front() ||
                              d.tokens.back() + 1 == h.tokens.front();
        EXPECT_FALSE(adjacent && IsMergeableRelation(e.relation))
            << "unmerged " << e.relation << " edge between '" << h.text
            << "' and '" << d.text << "'";
      }
    }
  }
}

TEST(MergeNodesTest, HandExample) {
  const SemanticGraph g = Fixture("einstein.json");
  EXPECT_GE(NodeWithPhrase(g, "the physics Nobel Prize"), 0);
  EXPECT_GE(NodeWithPhrase(g, "of the photoelectric effect"), 0);
  EXPECT_GE(NodeWithPhrase(g, "the theory"), 0);
  EXPECT_EQ(NodeWithPhrase(g, "."), -1);
}

// Connected components over "same chain" and "same normalized non-pronoun
// noun text", by breadth-first search.
TEST(MergePhrasesAcrossTest, MatchesComponentOracle) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const DocumentSet set = RandomDocumentSet(rng);
    const DocumentIndex index(set);
    const auto sentences = SentencePhrasesOf(set, index);
    struct Item {
      Phrase phrase;
      int chain;
    };
    std::vector<Item> items;
    for (const auto &sp : sentences) {
      for (size_t p = 0; p < sp.phrases.size(); ++p) {
        items.push_back({sp.phrases[p], sp.chains[p]});
      }
    }
    auto linked = [&](const Item &a, const Item &b) {
      if (a.chain >= 0 && a.chain == b.chain) return true;
      auto textual = [&](const Item &x) {
        return x.phrase.phrase_type == NodeType::kNoun &&
               index.token(x.phrase.head_token).pos_tag != "PRON";
      };
      return textual(a) && textual(b) &&
             NormalizePhraseText(a.phrase.text) ==
                 NormalizePhraseText(b.phrase.text);
    };
    std::vector<int> comp(items.size(), -1);
    std::set<std::set<int>> expected;
    for (size_t s = 0; s < items.size(); ++s) {
      if (comp[s] >= 0) continue;
      std::set<int> heads;
      std::queue<int> q;
      q.push(s);
      comp[s] = s;
      while (!q.empty()) {
        const int x = q.front();
        q.pop();
        heads.insert(items[x].phrase.head_token);
        for (size_t y = 0; y < items.size(); ++y) {
          if (comp[y] < 0 && linked(items[x], items[y])) {
            comp[y] = s;
            q.push(y);
          }
        }
      }
      expected.insert(heads);
    }
    const SemanticGraph g = MergePhrasesAcross(sentences, index);
    std::set<std::set<int>> actual;
    for (const auto &node : g.nodes()) {
      std::set<int> heads;
      for (const auto &p : node.phrases) heads.insert(p.head_token);
      actual.insert(heads);
    }
    ASSERT_EQ(actual, expected) << "trial " << trial;
  }
}

TEST(MergePhrasesAcrossTest, NodeTypeAndCanonical) {
  const SemanticGraph g = Fixture("einstein.json");
  const int einstein = NodeWithPhrase(g, "He");
  ASSERT_GE(einstein, 0);
  const GraphNode &node = g.nodes()[einstein];
  EXPECT_EQ(node.node_type, NodeType::kNoun);
  EXPECT_EQ(node.canonical_text, "Albert Einstein");
  EXPECT_EQ(node.phrases.size(), 3u);
  const int prize = NodeWithPhrase(g, "The great prize");
  EXPECT_EQ(g.nodes()[prize].canonical_text, "the physics Nobel Prize");
}

TEST(BuildGraphTest, EinsteinExample) {
  const SemanticGraph g = Fixture("einstein.json");
  const int einstein = NodeWithPhrase(g, "Albert Einstein");
  EXPECT_EQ(einstein, NodeWithPhrase(g, "his"));
  EXPECT_EQ(einstein, NodeWithPhrase(g, "He"));
  const int won = NodeWithPhrase(g, "won");
  const int prize = NodeWithPhrase(g, "the physics Nobel Prize");
  const auto paths = EnumerateMetaPaths(
      g, {NodeType::kNoun, NodeType::kVerb, NodeType::kNoun});
  EXPECT_TRUE(std::count(paths.begin(), paths.end(),
                         std::vector<int>{einstein, won, prize}));
  EXPECT_TRUE(g.HasEdge(won, einstein, EdgeKind::kOriginal));
  EXPECT_TRUE(g.HasEdge(won, prize, EdgeKind::kOriginal));
}

TEST(BuildGraphTest, EmptyInputGivesEmptyGraph) {
  EXPECT_EQ(BuildGraph(DocumentSet{}).node_count(), 0);
  const SemanticGraph g = Fixture("empty_doc.json");
  EXPECT_EQ(g.node_count(), 0);
  EXPECT_EQ(g.edge_count(), 0);
}

TEST(BuildGraphTest, DeterministicOnCorpus) {
  const std::string first = SerializeGraph(Fixture("corpus.json"));
  for (int run = 0; run < 2; ++run) {
    EXPECT_EQ(SerializeGraph(Fixture("corpus.json")), first);
  }
}

TEST(BuildGraphTest, StructuralInvariantsOnRandomInputs) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    const DocumentSet set = RandomDocumentSet(rng);
    const DocumentIndex index(set);
    const SemanticGraph g = BuildGraph(set);
    int content = 0;
    for (int t = 0; t < index.token_count(); ++t) {
      const bool punct = index.token(t).is_punct;
      content += !punct;
      const auto it = g.alignment().find(t);
      if (punct) {
        EXPECT_EQ(it, g.alignment().end());
        continue;
      }
      // Every content token aligns to the one node holding it.
      ASSERT_NE(it, g.alignment().end());
      int holders = 0;
      for (const auto &node : g.nodes()) {
        for (const auto &p : node.phrases) {
          if (std::count(p.tokens.begin(), p.tokens.end(), t)) {
            ++holders;
            EXPECT_EQ(node.id, it->second);
          }
        }
      }
      EXPECT_EQ(holders, 1);
    }
    EXPECT_LE(g.node_count(), content);
    std::set<std::tuple<int, int, EdgeKind>> seen;
    for (const auto &e : g.edges()) {
      EXPECT_NE(e.src, e.dst);
      EXPECT_EQ(e.kind, EdgeKind::kOriginal);
      EXPECT_TRUE(seen.emplace(e.src, e.dst, e.kind).second);
    }
    EXPECT_EQ(ParseGraph(SerializeGraph(g)), g);
  }
}

// Adding a chain between existing mentions never adds nodes.
TEST(BuildGraphTest, ExtraChainNeverIncreasesNodeCount) {
  std::mt19937_64 rng(31);
  testing::RandomDocOptions options;
  options.max_chains = 0;
  for (int trial = 0; trial < 100; ++trial) {
    DocumentSet set = RandomDocumentSet(rng, options);
    const DocumentIndex index(set);
    std::vector<int> content;
    for (int t = 0; t < index.token_count(); ++t) {
      if (!index.token(t).is_punct) content.push_back(t);
    }
    if (content.size() < 2) continue;
    std::shuffle(content.begin(), content.end(), rng);
    auto span_of = [&](int t) {
      const int s = index.token(t).sentence_id;
      const int local = t - index.sentence_begin(s);
      return Span{s, local, local};
    };
    const int before = BuildGraph(set).node_count();
    set.documents[0].coref_chains.push_back(
        {{span_of(content[0]), span_of(content[1])}});
    EXPECT_LE(BuildGraph(set).node_count(), before);
  }
}

TEST(MetaPathTest, MatchesExhaustiveOracle) {
  std::mt19937_64 rng(41);
  const std::vector<std::vector<NodeType>> patterns = {
      {NodeType::kNoun, NodeType::kVerb, NodeType::kNoun},
      {NodeType::kNoun, NodeType::kVerb},
      {NodeType::kVerb, NodeType::kNoun, NodeType::kOther},
      {NodeType::kNoun, NodeType::kNoun, NodeType::kNoun}};
  for (int trial = 0; trial < 30; ++trial) {
    SemanticGraph g;
    const int n = 3 + trial % 9;
    std::uniform_int_distribution<int> type(0, 2);
    for (int i = 0; i < n; ++i) {
      g.AddNode(static_cast<NodeType>(type(rng)), {}, "n");
    }
    std::bernoulli_distribution coin(0.3);
    for (int u = 0; u < n; ++u) {
      for (int v = 0; v < n; ++v) {
        if (u != v && coin(rng)) g.AddEdge({u, v, EdgeKind::kOriginal, "r"});
      }
    }
    auto adjacent = [&](int a, int b) {
      return g.HasEdge(a, b, EdgeKind::kOriginal) ||
             g.HasEdge(b, a, EdgeKind::kOriginal);
    };
    for (const auto &pattern : patterns) {
      std::set<std::vector<int>> expected;
      const int k = pattern.size();
      std::vector<int> seq(k, 0);
      // Odometer over all n^k sequences.
      while (true) {
        bool ok = true;
        for (int i = 0; i < k && ok; ++i) {
          ok = g.nodes()[seq[i]].node_type == pattern[i];
          for (int j = 0; j < i && ok; ++j) ok = seq[i] != seq[j];
          if (i > 0 && ok) ok = adjacent(seq[i - 1], seq[i]);
        }
        if (ok) expected.insert(seq);
        int pos = 0;
        while (pos < k && ++seq[pos] == n) seq[pos++] = 0;
        if (pos == k) break;
      }
      const auto paths = EnumerateMetaPaths(g, pattern);
      const std::set<std::vector<int>> actual(paths.begin(), paths.end());
      EXPECT_EQ(actual.size(), paths.size()) << "duplicates";
      EXPECT_EQ(actual, expected);
    }
  }
}

TEST(MetaPathTest, RejectsBadPatternLength) {
  SemanticGraph g;
  EXPECT_THROW(EnumerateMetaPaths(g, {NodeType::kNoun}),
               std::invalid_argument);
  EXPECT_THROW(EnumerateMetaPaths(g, {NodeType::kNoun, NodeType::kNoun,
                                      NodeType::kNoun, NodeType::kNoun}),
               std::invalid_argument);
}

TEST(GraphStatsTest, ComponentsMatchBfs) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 50; ++trial) {
    const SemanticGraph g = BuildGraph(RandomDocumentSet(rng));
    std::vector<std::vector<int>> adj(g.node_count());
    for (const auto &e : g.edges()) {
      adj[e.src].push_back(e.dst);
      adj[e.dst].push_back(e.src);
    }
    std::vector<bool> seen(g.node_count(), false);
    int components = 0;
    for (int s = 0; s < g.node_count(); ++s) {
      if (seen[s]) continue;
      ++components;
      std::queue<int> q;
      q.push(s);
      seen[s] = true;
      while (!q.empty()) {
        const int x = q.front();
        q.pop();
        for (int y : adj[x]) {
          if (!seen[y]) {
            seen[y] = true;
            q.push(y);
          }
        }
      }
    }
    const GraphStats stats = ComputeGraphStats(g, 7);
    EXPECT_EQ(stats.component_count, components);
    EXPECT_EQ(stats.node_count, g.node_count());
    EXPECT_EQ(stats.edge_count, g.edge_count());
    EXPECT_EQ(stats.input_token_count, 7);
  }
}

TEST(GraphStatsTest, NestedPrefixesGrowMonotonically) {
  const DocumentSet set =
      ReadAnnotationFile(FixturePath("nested_prefix.json"));
  GraphStats previous;
  for (size_t d = 0; d < set.documents.size(); ++d) {
    const DocumentSet prefix = ExtractDocument(set, d);
    const GraphStats stats =
        ComputeGraphStats(BuildGraph(prefix), prefix.token_count());
    EXPECT_GE(stats.node_count, previous.node_count);
    EXPECT_GE(stats.edge_count, previous.edge_count);
    EXPECT_GT(stats.input_token_count, previous.input_token_count);
    const double ratio =
        static_cast<double>(stats.edge_count) / stats.node_count;
    EXPECT_GE(ratio, 0.9);
    EXPECT_LE(ratio, 2.0);
    previous = stats;
  }
}

TEST(GraphFormatTest, JsonShape) {
  const std::string text = SerializeGraph(Fixture("einstein.json"));
  EXPECT_EQ(text.rfind(R"({"nodes":[{"id":0,"type":"N","phrases":[)", 0), 0u);
  EXPECT_NE(text.find(R"("edges":[{"src":1,"dst":0,"kind":"ORIGINAL","rel":"nsubj"})"),
            std::string::npos);
  EXPECT_NE(text.find(R"("alignment":{"0":0,)"), std::string::npos);
}

TEST(GraphFormatTest, CommittedGoldenGraph) {
  // Pretty-printed output as written by `unigraph build-graph`.
  EXPECT_EQ(SerializeGraph(Fixture("einstein.json"), 2) + "\n",
            testing::ReadText(FixturePath("einstein.graph.json")));
}

TEST(GraphFormatTest, DotShapesAndStyles) {
  const SemanticGraph g = Augment(Fixture("einstein.json"));
  EXPECT_EQ(ParseGraph(SerializeGraph(g)), g);
  const std::string dot = ExportDot(g);
  EXPECT_NE(dot.find("shape=box"), std::string::npos);
  EXPECT_NE(dot.find("shape=ellipse"), std::string::npos);
  EXPECT_NE(dot.find("style=dashed"), std::string::npos);
  EXPECT_NE(dot.find("style=solid"), std::string::npos);
  SemanticGraph other;
  other.AddNode(NodeType::kOther, {}, "and");
  EXPECT_NE(ExportDot(other).find("shape=diamond"), std::string::npos);
}

}  // namespace
}  // namespace unigraph
