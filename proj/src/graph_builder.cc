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

#include <algorithm>
#include <cctype>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace unigraph {
namespace {

// Minimal union-find with path halving. The smaller index stays the root
// unless the caller picks the root explicitly.
class DisjointSets {
 public:
  explicit DisjointSets(int n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int Find(int x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  // Attaches the set of `child` under the set of `root`.
  void Attach(int child, int root) { parent_[Find(child)] = Find(root); }
  void Union(int a, int b) {
    a = Find(a);
    b = Find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<int> parent_;
};

int Depth(const SentenceTree &tree, int token) {
  int depth = 0;
  for (int cursor = tree.head.at(token); cursor != kRoot;
       cursor = tree.head.at(cursor)) {
    ++depth;
  }
  return depth;
}

// Token of `tokens` closest to the root; earliest on ties.
int ChooseHead(const SentenceTree &tree, const std::vector<int> &tokens) {
  int best = tokens.front();
  int best_depth = Depth(tree, best);
  for (int token : tokens) {
    int depth = Depth(tree, token);
    if (depth < best_depth) {
      best = token;
      best_depth = depth;
    }
  }
  return best;
}

std::string JoinText(const DocumentIndex &index, const std::vector<int> &tokens) {
  std::string text;
  for (int token : tokens) {
    if (!text.empty()) text.push_back(' ');
    text += index.token(token).text;
  }
  return text;
}

}  // namespace

DocumentIndex::DocumentIndex(const DocumentSet &documents) {
  for (size_t d = 0; d < documents.documents.size(); ++d) {
    const AnnotatedDocument &doc = documents.documents[d];
    const int offset = tokens_.size();
    for (const Token &token : doc.tokens) {
      tokens_.push_back(&token);
      document_.push_back(d);
    }
    heads_.resize(tokens_.size(), kRoot);
    relations_.resize(tokens_.size());
    for (const DependencyEdge &edge : doc.dependency_edges) {
      heads_[offset + edge.dependent] =
          edge.head == kRoot ? kRoot : offset + edge.head;
      relations_[offset + edge.dependent] = edge.relation;
    }
    for (const Sentence &sentence : doc.sentences) {
      sentence_begin_.push_back(offset + sentence.first_token);
      sentence_length_.push_back(sentence.token_count);
    }
  }
}

std::vector<int> DocumentIndex::SpanTokens(const Span &span) const {
  std::vector<int> tokens;
  const int begin = sentence_begin(span.sentence_id);
  for (int i = span.start; i <= span.end; ++i) tokens.push_back(begin + i);
  return tokens;
}

int SentenceTree::UnitOf(int token) const {
  for (size_t u = 0; u < units.size(); ++u) {
    if (std::binary_search(units[u].tokens.begin(), units[u].tokens.end(),
                           token)) {
      return u;
    }
  }
  return -1;
}

std::vector<UnitArc> SentenceTree::Arcs() const {
  std::vector<UnitArc> arcs;
  std::set<std::pair<int, int>> seen;
  for (int token : tokens) {
    const int h = head.at(token);
    if (h == kRoot) continue;
    const int head_unit = UnitOf(h);
    const int dependent_unit = UnitOf(token);
    if (head_unit == dependent_unit) continue;
    if (seen.emplace(head_unit, dependent_unit).second) {
      arcs.push_back({head_unit, dependent_unit, relation.at(token)});
    }
  }
  return arcs;
}

const std::set<std::string, std::less<>> &MergeableRelations() {
  // Determiners, adjectival/numeric modifiers, compounds, possessive and
  // case markers, multiword expressions, particles, auxiliaries, copulas
  // and negation. Both UD and Stanford labels are listed.
  static const std::set<std::string, std::less<>> kTable = {
      "det",   "predet", "amod",     "compound", "nn",  "nummod",
      "num",   "possessive", "case", "flat",   "fixed", "mwe",
      "goeswith", "prt", "aux",      "auxpass",  "cop", "neg"};
  return kTable;
}

bool IsMergeableRelation(std::string_view relation,
                         const std::set<std::string, std::less<>> &table) {
  if (table.count(relation)) return true;
  const size_t colon = relation.find(':');
  return colon != std::string_view::npos &&
         table.count(relation.substr(0, colon)) > 0;
}

NodeType NodeTypeForTag(std::string_view pos_tag, Diagnostics *diagnostics) {
  if (pos_tag == "NOUN" || pos_tag == "PROPN" || pos_tag == "PRON") {
    return NodeType::kNoun;
  }
  if (pos_tag == "VERB" || pos_tag == "AUX") return NodeType::kVerb;
  if (!IsUniversalTag(pos_tag) && diagnostics != nullptr) {
    diagnostics->push_back(
        {"unknown-pos", "unknown POS tag '" + std::string(pos_tag) +
                            "' treated as other"});
  }
  return NodeType::kOther;
}

SentenceTree MakeSentenceTree(const DocumentIndex &index, int sentence_id) {
  SentenceTree tree;
  tree.sentence_id = sentence_id;
  const int begin = index.sentence_begin(sentence_id);
  for (int i = 0; i < index.sentence_length(sentence_id); ++i) {
    const int token = begin + i;
    tree.tokens.push_back(token);
    tree.head[token] = index.head(token);
    tree.relation[token] = index.relation(token);
    tree.units.push_back({{token}, token, -1});
  }
  return tree;
}

std::map<int, NodeType> IdentifyNodeTypes(const SentenceTree &tree,
                                          const DocumentIndex &index,
                                          Diagnostics *diagnostics) {
  std::map<int, NodeType> types;
  for (int token : tree.tokens) {
    types[token] = NodeTypeForTag(index.token(token).pos_tag, diagnostics);
  }
  return types;
}

SentenceTree PrunePunctuation(const SentenceTree &tree,
                              const DocumentIndex &index) {
  SentenceTree pruned;
  pruned.sentence_id = tree.sentence_id;
  auto keep = [&](int token) { return !index.token(token).is_punct; };
  for (int token : tree.tokens) {
    if (!keep(token)) continue;
    pruned.tokens.push_back(token);
    const int h = tree.head.at(token);
    pruned.head[token] = (h == kRoot || !keep(h)) ? kRoot : h;
    pruned.relation[token] = tree.relation.at(token);
  }
  for (const TreeUnit &unit : tree.units) {
    TreeUnit kept = unit;
    kept.tokens.clear();
    std::copy_if(unit.tokens.begin(), unit.tokens.end(),
                 std::back_inserter(kept.tokens), keep);
    if (kept.tokens.empty()) continue;
    if (!keep(unit.head_token)) kept.head_token = ChooseHead(pruned, kept.tokens);
    pruned.units.push_back(std::move(kept));
  }
  return pruned;
}

SentenceTree MergeCorefPhrases(const SentenceTree &tree,
                               const std::vector<CoreferenceChain> &chains,
                               const DocumentIndex &index,
                               Diagnostics *diagnostics) {
  auto report = [&](const char *code, const Span &span, const char *what) {
    if (diagnostics == nullptr) return;
    diagnostics->push_back(
        {code, "sentence " + std::to_string(span.sentence_id) + " span [" +
                   std::to_string(span.start) + "," +
                   std::to_string(span.end) + "]: " + what});
  };

  struct Mention {
    Span span;
    int chain;
    std::vector<int> tokens;
  };
  std::vector<Mention> mentions;
  std::set<Span> seen;
  const std::set<int> alive(tree.tokens.begin(), tree.tokens.end());
  for (size_t c = 0; c < chains.size(); ++c) {
    for (const Span &span : chains[c].mentions) {
      if (span.sentence_id != tree.sentence_id) continue;
      if (!seen.insert(span).second) continue;
      Mention mention{span, static_cast<int>(c), {}};
      for (int token : index.SpanTokens(span)) {
        if (alive.count(token)) mention.tokens.push_back(token);
      }
      if (mention.tokens.empty()) {
        report("empty-mention", span, "mention has no content tokens");
        continue;
      }
      mentions.push_back(std::move(mention));
    }
  }
  std::sort(mentions.begin(), mentions.end(),
            [](const Mention &a, const Mention &b) { return a.span < b.span; });

  auto contains = [](const Span &outer, const Span &inner) {
    return outer.start <= inner.start && inner.end <= outer.end &&
           outer != inner;
  };
  std::vector<const Mention *> accepted;
  for (const Mention &mention : mentions) {
    bool nested = std::any_of(
        mentions.begin(), mentions.end(),
        [&](const Mention &other) { return contains(mention.span, other.span); });
    if (nested) {
      report("nested-mention", mention.span,
             "mention contains another mention; keeping the inner one");
      continue;
    }
    bool overlaps = std::any_of(
        accepted.begin(), accepted.end(), [&](const Mention *other) {
          return mention.span.start <= other->span.end &&
                 other->span.start <= mention.span.end;
        });
    if (overlaps) {
      report("overlapping-mention", mention.span,
             "mention overlaps an earlier mention");
      continue;
    }
    // A mention may not split a unit formed earlier.
    bool splits = false;
    for (const TreeUnit &unit : tree.units) {
      int inside = 0;
      for (int token : unit.tokens) {
        inside += std::binary_search(mention.tokens.begin(),
                                     mention.tokens.end(), token);
      }
      if (inside != 0 && inside != static_cast<int>(unit.tokens.size())) {
        splits = true;
      }
    }
    if (splits) {
      report("unit-boundary", mention.span, "mention crosses a merged unit");
      continue;
    }
    accepted.push_back(&mention);
  }

  SentenceTree merged = tree;
  merged.units.clear();
  std::set<int> collapsed;
  for (const Mention *mention : accepted) {
    TreeUnit unit;
    unit.tokens = mention->tokens;
    unit.head_token = ChooseHead(tree, unit.tokens);
    unit.chain = mention->chain;
    collapsed.insert(unit.tokens.begin(), unit.tokens.end());
    merged.units.push_back(std::move(unit));
  }
  for (const TreeUnit &unit : tree.units) {
    if (!collapsed.count(unit.tokens.front())) merged.units.push_back(unit);
  }
  std::sort(merged.units.begin(), merged.units.end(),
            [](const TreeUnit &a, const TreeUnit &b) {
              return a.tokens.front() < b.tokens.front();
            });
  return merged;
}

SentencePhrases MergeNodes(const SentenceTree &tree,
                           const std::map<int, NodeType> &types,
                           const DocumentIndex &index,
                           const std::set<std::string, std::less<>> &table) {
  const int n = tree.units.size();
  std::map<int, int> rank;
  for (size_t i = 0; i < tree.tokens.size(); ++i) rank[tree.tokens[i]] = i;

  // Per-unit parent (through the head token), relation and rank interval.
  std::vector<int> parent(n, -1);
  std::vector<std::string> relation(n);
  std::vector<int> lo(n), hi(n), chain(n);
  std::vector<std::vector<int>> children(n);
  for (int u = 0; u < n; ++u) {
    const TreeUnit &unit = tree.units[u];
    lo[u] = rank.at(unit.tokens.front());
    hi[u] = rank.at(unit.tokens.back());
    chain[u] = unit.chain;
    const int h = tree.head.at(unit.head_token);
    if (h != kRoot) {
      parent[u] = tree.UnitOf(h);
      relation[u] = tree.relation.at(unit.head_token);
      children[parent[u]].push_back(u);
    }
  }
  for (auto &list : children) {
    std::sort(list.begin(), list.end(),
              [&](int a, int b) { return lo[a] < lo[b]; });
  }

  DisjointSets groups(n);
  auto can_merge = [&](int child, int head) {
    if (!IsMergeableRelation(relation[child], table)) return false;
    const int a = chain[groups.Find(child)];
    const int b = chain[groups.Find(head)];
    return a < 0 || b < 0 || a == b;
  };
  auto absorb = [&](int child, int head) {
    const int c = groups.Find(child), h = groups.Find(head);
    lo[h] = std::min(lo[h], lo[c]);
    hi[h] = std::max(hi[h], hi[c]);
    if (chain[h] < 0) chain[h] = chain[c];
    groups.Attach(c, h);
  };

  std::vector<bool> visited(n, false);
  std::function<void(int)> visit = [&](int u) {
    visited[u] = true;
    for (int c : children[u]) {
      if (!visited[c]) visit(c);
    }
    std::vector<int> left, right;
    for (int c : children[u]) {
      (hi[groups.Find(c)] < lo[groups.Find(u)] ? left : right).push_back(c);
    }
    std::sort(left.begin(), left.end(), [&](int a, int b) {
      return hi[groups.Find(a)] > hi[groups.Find(b)];
    });
    std::sort(right.begin(), right.end(), [&](int a, int b) {
      return lo[groups.Find(a)] < lo[groups.Find(b)];
    });
    for (int c : left) {
      if (!can_merge(c, u) || hi[groups.Find(c)] + 1 != lo[groups.Find(u)]) {
        break;
      }
      absorb(c, u);
    }
    for (int c : right) {
      if (!can_merge(c, u) || lo[groups.Find(c)] != hi[groups.Find(u)] + 1) {
        break;
      }
      absorb(c, u);
    }
  };
  std::vector<int> roots;
  for (int u = 0; u < n; ++u) {
    if (parent[u] < 0) roots.push_back(u);
  }
  std::sort(roots.begin(), roots.end(),
            [&](int a, int b) { return lo[a] < lo[b]; });
  for (int u : roots) visit(u);
  // Unreachable units cannot exist in a forest, but stay safe on odd input.
  for (int u = 0; u < n; ++u) {
    if (!visited[u]) visit(u);
  }

  // Groups become phrases in surface order.
  std::map<int, std::vector<int>> members;
  for (int u = 0; u < n; ++u) members[groups.Find(u)].push_back(u);
  std::vector<int> order;
  for (const auto &[root, list] : members) order.push_back(root);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return lo[a] < lo[b]; });

  SentencePhrases result;
  result.sentence_id = tree.sentence_id;
  std::vector<int> phrase_of_unit(n);
  const int begin = index.sentence_begin(tree.sentence_id);
  for (int root : order) {
    Phrase phrase;
    for (int u : members[root]) {
      phrase_of_unit[u] = result.phrases.size();
      const auto &tokens = tree.units[u].tokens;
      phrase.tokens.insert(phrase.tokens.end(), tokens.begin(), tokens.end());
    }
    std::sort(phrase.tokens.begin(), phrase.tokens.end());
    phrase.head_token = tree.units[root].head_token;
    phrase.phrase_type = types.at(phrase.head_token);
    phrase.span = {tree.sentence_id, phrase.tokens.front() - begin,
                   phrase.tokens.back() - begin};
    phrase.text = JoinText(index, phrase.tokens);
    result.phrases.push_back(std::move(phrase));
    result.chains.push_back(chain[root]);
  }

  std::set<std::pair<int, int>> seen;
  for (const UnitArc &arc : tree.Arcs()) {
    const int h = phrase_of_unit[arc.head_unit];
    const int d = phrase_of_unit[arc.dependent_unit];
    if (h == d || !seen.emplace(h, d).second) continue;
    result.edges.push_back({h, d, arc.relation});
  }
  return result;
}

std::string NormalizePhraseText(std::string_view text) {
  std::string out;
  bool pending_space = false;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

SemanticGraph MergePhrasesAcross(const std::vector<SentencePhrases> &sentences,
                                 const DocumentIndex &index) {
  struct Ref {
    int sentence;
    int phrase;
  };
  std::vector<Ref> refs;
  for (size_t s = 0; s < sentences.size(); ++s) {
    for (size_t p = 0; p < sentences[s].phrases.size(); ++p) {
      refs.push_back({static_cast<int>(s), static_cast<int>(p)});
    }
  }
  auto phrase = [&](const Ref &ref) -> const Phrase & {
    return sentences[ref.sentence].phrases[ref.phrase];
  };

  DisjointSets sets(refs.size());
  std::map<int, int> chain_owner;
  std::map<std::string, int> text_owner;
  for (size_t r = 0; r < refs.size(); ++r) {
    const int chain = sentences[refs[r].sentence].chains[refs[r].phrase];
    if (chain >= 0) {
      auto [it, inserted] = chain_owner.emplace(chain, r);
      if (!inserted) sets.Union(it->second, r);
    }
    const Phrase &p = phrase(refs[r]);
    // Pronouns only join nodes through coreference.
    if (p.phrase_type == NodeType::kNoun &&
        index.token(p.head_token).pos_tag != "PRON") {
      auto [it, inserted] = text_owner.emplace(NormalizePhraseText(p.text), r);
      if (!inserted) sets.Union(it->second, r);
    }
  }

  // Roots are the smallest member index, so node order follows the first
  // phrase of each node.
  std::map<int, std::vector<int>> members;
  for (size_t r = 0; r < refs.size(); ++r) members[sets.Find(r)].push_back(r);

  SemanticGraph graph;
  std::vector<int> node_of(refs.size());
  for (const auto &[root, list] : members) {
    std::vector<Phrase> phrases;
    int counts[3] = {0, 0, 0};
    for (int r : list) {
      phrases.push_back(phrase(refs[r]));
      counts[static_cast<int>(phrases.back().phrase_type)]++;
    }
    NodeType type = NodeType::kNoun;
    const int best = *std::max_element(counts, counts + 3);
    if (std::count(counts, counts + 3, best) == 1) {
      type = static_cast<NodeType>(std::max_element(counts, counts + 3) -
                                   counts);
    }
    // Longest non-pronominal mention; pronouns only if nothing else.
    const Phrase *canonical = nullptr;
    for (int pass = 0; pass < 2 && canonical == nullptr; ++pass) {
      for (const Phrase &p : phrases) {
        const bool pronoun = index.token(p.head_token).pos_tag == "PRON";
        if (pass == 0 && pronoun) continue;
        if (canonical == nullptr || p.text.size() > canonical->text.size()) {
          canonical = &p;
        }
      }
    }
    std::string canonical_text = canonical->text;
    const int id = graph.AddNode(type, std::move(phrases), canonical_text);
    for (int r : list) {
      node_of[r] = id;
      for (int token : phrase(refs[r]).tokens) graph.Align(token, id);
    }
  }

  std::vector<int> first_ref(sentences.size(), 0);
  for (size_t s = 1; s < sentences.size(); ++s) {
    first_ref[s] = first_ref[s - 1] + sentences[s - 1].phrases.size();
  }
  for (size_t s = 0; s < sentences.size(); ++s) {
    for (const PhraseEdge &edge : sentences[s].edges) {
      const int src = node_of[first_ref[s] + edge.head_phrase];
      const int dst = node_of[first_ref[s] + edge.dependent_phrase];
      if (src == dst) continue;
      graph.AddEdge({src, dst, EdgeKind::kOriginal, edge.relation});
    }
  }
  return graph;
}

SemanticGraph BuildGraph(const DocumentSet &documents,
                         Diagnostics *diagnostics) {
  DocumentIndex index(documents);
  std::vector<CoreferenceChain> all_chains;
  for (const auto &doc : documents.documents) {
    all_chains.insert(all_chains.end(), doc.coref_chains.begin(),
                      doc.coref_chains.end());
  }
  const std::vector<CoreferenceChain> chains =
      MergeCoreferenceChains(all_chains);

  std::vector<SentencePhrases> sentences;
  for (int s = 0; s < index.sentence_count(); ++s) {
    SentenceTree tree = MakeSentenceTree(index, s);
    const std::map<int, NodeType> types =
        IdentifyNodeTypes(tree, index, diagnostics);
    tree = PrunePunctuation(tree, index);
    tree = MergeCorefPhrases(tree, chains, index, diagnostics);
    sentences.push_back(MergeNodes(tree, types, index));
  }
  return MergePhrasesAcross(sentences, index);
}

GraphStats ComputeGraphStats(const SemanticGraph &graph, int input_len) {
  GraphStats stats;
  stats.node_count = graph.node_count();
  stats.edge_count = graph.edge_count();
  stats.input_token_count = input_len;
  DisjointSets sets(graph.node_count());
  for (const GraphEdge &edge : graph.edges()) {
    if (edge.kind == EdgeKind::kOriginal) sets.Union(edge.src, edge.dst);
  }
  for (int v = 0; v < graph.node_count(); ++v) {
    if (sets.Find(v) == v) ++stats.component_count;
  }
  return stats;
}

std::vector<std::vector<int>> EnumerateMetaPaths(
    const SemanticGraph &graph, const std::vector<NodeType> &pattern) {
  if (pattern.size() != 2 && pattern.size() != 3) {
    throw std::invalid_argument("meta-path pattern must have length 2 or 3");
  }
  std::vector<std::set<int>> neighbors(graph.node_count());
  for (const GraphEdge &edge : graph.edges()) {
    if (edge.kind != EdgeKind::kOriginal || edge.src == edge.dst) continue;
    neighbors[edge.src].insert(edge.dst);
    neighbors[edge.dst].insert(edge.src);
  }
  auto type_of = [&](int v) { return graph.nodes()[v].node_type; };

  std::vector<std::vector<int>> paths;
  for (int a = 0; a < graph.node_count(); ++a) {
    if (type_of(a) != pattern[0]) continue;
    for (int b : neighbors[a]) {
      if (type_of(b) != pattern[1]) continue;
      if (pattern.size() == 2) {
        paths.push_back({a, b});
        continue;
      }
      for (int c : neighbors[b]) {
        if (c == a || type_of(c) != pattern[2]) continue;
        paths.push_back({a, b, c});
      }
    }
  }
  return paths;
}

}  // namespace unigraph
