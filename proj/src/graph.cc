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

#include "unigraph/graph.h"

#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace unigraph {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string DotEscape(const std::string &text) {
  std::string out;
  for (char c : text) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::string_view NodeTypeName(NodeType type) {
  switch (type) {
    case NodeType::kNoun: return "N";
    case NodeType::kVerb: return "V";
    case NodeType::kOther: return "O";
    case NodeType::kSuper: return "SUPER";
  }
  return "O";
}

NodeType ParseNodeType(std::string_view name) {
  if (name == "N") return NodeType::kNoun;
  if (name == "V") return NodeType::kVerb;
  if (name == "O") return NodeType::kOther;
  if (name == "SUPER") return NodeType::kSuper;
  throw std::invalid_argument("unknown node type: " + std::string(name));
}

std::string_view EdgeKindName(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::kOriginal: return "ORIGINAL";
    case EdgeKind::kReverse: return "REVERSE";
    case EdgeKind::kSelfLoop: return "SELF_LOOP";
    case EdgeKind::kShortcut: return "SHORTCUT";
    case EdgeKind::kSuperLink: return "SUPER_LINK";
  }
  return "ORIGINAL";
}

EdgeKind ParseEdgeKind(std::string_view name) {
  for (EdgeKind kind : kAllEdgeKinds) {
    if (EdgeKindName(kind) == name) return kind;
  }
  throw std::invalid_argument("unknown edge kind: " + std::string(name));
}

int SemanticGraph::AddNode(NodeType type, std::vector<Phrase> phrases,
                           std::string canonical_text) {
  GraphNode node;
  node.id = nodes_.size();
  node.node_type = type;
  node.phrases = std::move(phrases);
  node.canonical_text = std::move(canonical_text);
  nodes_.push_back(std::move(node));
  return nodes_.back().id;
}

bool SemanticGraph::AddEdge(GraphEdge edge) {
  if (edge.src < 0 || edge.src >= node_count() || edge.dst < 0 ||
      edge.dst >= node_count()) {
    throw std::out_of_range("edge endpoint outside graph");
  }
  if (edge.kind != EdgeKind::kOriginal) edge.relation_label.reset();
  if (!edge_index_.emplace(edge.src, edge.dst, edge.kind).second) return false;
  pair_index_.emplace(edge.src, edge.dst);
  edges_.push_back(std::move(edge));
  return true;
}

bool SemanticGraph::HasEdge(int src, int dst, EdgeKind kind) const {
  return edge_index_.count({src, dst, kind}) > 0;
}

bool SemanticGraph::HasAnyEdge(int src, int dst) const {
  return pair_index_.count({src, dst}) > 0;
}

std::optional<int> SemanticGraph::SuperNode() const {
  for (const auto &node : nodes_) {
    if (node.node_type == NodeType::kSuper) return node.id;
  }
  return std::nullopt;
}

std::string SerializeGraph(const SemanticGraph &graph, int indent) {
  ordered_json jnodes = ordered_json::array();
  for (const GraphNode &node : graph.nodes()) {
    ordered_json jphrases = ordered_json::array();
    for (const Phrase &phrase : node.phrases) {
      jphrases.push_back({{"sentence", phrase.span.sentence_id},
                          {"start", phrase.span.start},
                          {"end", phrase.span.end},
                          {"head", phrase.head_token},
                          {"type", NodeTypeName(phrase.phrase_type)},
                          {"tokens", phrase.tokens},
                          {"text", phrase.text}});
    }
    jnodes.push_back({{"id", node.id},
                      {"type", NodeTypeName(node.node_type)},
                      {"phrases", jphrases},
                      {"canonical", node.canonical_text}});
  }
  ordered_json jedges = ordered_json::array();
  for (const GraphEdge &edge : graph.edges()) {
    ordered_json jedge = {{"src", edge.src},
                          {"dst", edge.dst},
                          {"kind", EdgeKindName(edge.kind)}};
    jedge["rel"] = edge.relation_label ? ordered_json(*edge.relation_label)
                                       : ordered_json(nullptr);
    jedges.push_back(std::move(jedge));
  }
  ordered_json jalign = ordered_json::object();
  for (const auto &[token, node] : graph.alignment()) {
    jalign[std::to_string(token)] = node;
  }
  ordered_json root = {
      {"nodes", jnodes}, {"edges", jedges}, {"alignment", jalign}};
  return root.dump(indent);
}

SemanticGraph ParseGraph(std::string_view json_text) {
  ordered_json root;
  try {
    root = ordered_json::parse(json_text.begin(), json_text.end());
  } catch (const ordered_json::parse_error &e) {
    throw ParseError(e.what(), e.byte);
  }
  SemanticGraph graph;
  try {
    for (const auto &jnode : root.at("nodes")) {
      std::vector<Phrase> phrases;
      for (const auto &jp : jnode.at("phrases")) {
        Phrase phrase;
        phrase.span = {jp.at("sentence").get<int>(), jp.at("start").get<int>(),
                       jp.at("end").get<int>()};
        phrase.head_token = jp.at("head").get<int>();
        phrase.phrase_type = ParseNodeType(jp.at("type").get<std::string>());
        phrase.tokens = jp.at("tokens").get<std::vector<int>>();
        phrase.text = jp.at("text").get<std::string>();
        phrases.push_back(std::move(phrase));
      }
      int id = graph.AddNode(ParseNodeType(jnode.at("type").get<std::string>()),
                             std::move(phrases),
                             jnode.at("canonical").get<std::string>());
      if (id != jnode.at("id").get<int>()) {
        throw ParseError("node ids must be dense and ordered", 0);
      }
    }
    for (const auto &jedge : root.at("edges")) {
      GraphEdge edge;
      edge.src = jedge.at("src").get<int>();
      edge.dst = jedge.at("dst").get<int>();
      edge.kind = ParseEdgeKind(jedge.at("kind").get<std::string>());
      if (jedge.contains("rel") && !jedge["rel"].is_null()) {
        edge.relation_label = jedge["rel"].get<std::string>();
      }
      graph.AddEdge(std::move(edge));
    }
    for (const auto &[token, node] : root.at("alignment").items()) {
      graph.Align(std::stoi(token), node.get<int>());
    }
  } catch (const ordered_json::exception &e) {
    throw ParseError(std::string("malformed graph: ") + e.what(), 0);
  } catch (const std::invalid_argument &e) {
    throw ParseError(std::string("malformed graph: ") + e.what(), 0);
  } catch (const std::out_of_range &e) {
    throw ParseError(std::string("malformed graph: ") + e.what(), 0);
  }
  return graph;
}

std::string ExportDot(const SemanticGraph &graph) {
  std::ostringstream out;
  out << "digraph unified_semantic_graph {\n";
  for (const GraphNode &node : graph.nodes()) {
    const char *shape = "diamond";
    if (node.node_type == NodeType::kNoun) shape = "box";
    if (node.node_type == NodeType::kVerb) shape = "ellipse";
    if (node.node_type == NodeType::kSuper) shape = "doublecircle";
    std::string label = node.node_type == NodeType::kSuper
                            ? std::string("SUPER")
                            : node.canonical_text;
    out << "  n" << node.id << " [shape=" << shape << ", label=\""
        << DotEscape(label) << "\"];\n";
  }
  for (const GraphEdge &edge : graph.edges()) {
    const char *style = "solid";
    switch (edge.kind) {
      case EdgeKind::kOriginal: style = "solid"; break;
      case EdgeKind::kShortcut: style = "dashed"; break;
      case EdgeKind::kReverse: style = "dotted"; break;
      case EdgeKind::kSelfLoop: style = "dotted"; break;
      case EdgeKind::kSuperLink: style = "bold"; break;
    }
    out << "  n" << edge.src << " -> n" << edge.dst << " [style=" << style;
    if (edge.relation_label) {
      out << ", label=\"" << DotEscape(*edge.relation_label) << "\"";
    }
    out << "];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace unigraph
