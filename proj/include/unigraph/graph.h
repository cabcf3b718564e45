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

#ifndef UNIGRAPH_GRAPH_H_
#define UNIGRAPH_GRAPH_H_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "unigraph/annotation.h"

namespace unigraph {

enum class NodeType { kNoun, kVerb, kOther, kSuper };

enum class EdgeKind { kOriginal, kReverse, kSelfLoop, kShortcut, kSuperLink };

inline constexpr EdgeKind kAllEdgeKinds[] = {
    EdgeKind::kOriginal, EdgeKind::kReverse, EdgeKind::kSelfLoop,
    EdgeKind::kShortcut, EdgeKind::kSuperLink};

// "N", "V", "O", "SUPER".
std::string_view NodeTypeName(NodeType type);
NodeType ParseNodeType(std::string_view name);

// "ORIGINAL", "REVERSE", "SELF_LOOP", "SHORTCUT", "SUPER_LINK".
std::string_view EdgeKindName(EdgeKind kind);
EdgeKind ParseEdgeKind(std::string_view name);

// Non-fatal message produced while building or augmenting a graph.
struct Diagnostic {
  std::string code;
  std::string message;
};
using Diagnostics = std::vector<Diagnostic>;

// Contiguous run of tokens inside one sentence. `tokens` holds global token
// positions (documents concatenated in order) and excludes punctuation.
struct Phrase {
  Span span;
  int head_token = 0;
  NodeType phrase_type = NodeType::kOther;
  std::vector<int> tokens;
  std::string text;

  bool operator==(const Phrase &) const = default;
};

struct GraphNode {
  int id = 0;
  NodeType node_type = NodeType::kOther;
  std::vector<Phrase> phrases;
  std::string canonical_text;

  bool operator==(const GraphNode &) const = default;
};

struct GraphEdge {
  int src = 0;
  int dst = 0;
  EdgeKind kind = EdgeKind::kOriginal;
  std::optional<std::string> relation_label;  // ORIGINAL edges only

  bool operator==(const GraphEdge &) const = default;
};

// Directed heterogeneous graph. Edges are unique per (src, dst, kind).
class SemanticGraph {
 public:
  const std::vector<GraphNode> &nodes() const { return nodes_; }
  const std::vector<GraphEdge> &edges() const { return edges_; }
  const std::map<int, int> &alignment() const { return alignment_; }

  int node_count() const { return nodes_.size(); }
  int edge_count() const { return edges_.size(); }

  // Appends a node and returns its id.
  int AddNode(NodeType type, std::vector<Phrase> phrases,
              std::string canonical_text);

  // Returns false if an edge with the same (src, dst, kind) already exists.
  bool AddEdge(GraphEdge edge);

  bool HasEdge(int src, int dst, EdgeKind kind) const;
  bool HasAnyEdge(int src, int dst) const;

  void Align(int token, int node) { alignment_[token] = node; }

  // Index of the SUPER node, if present.
  std::optional<int> SuperNode() const;

  bool operator==(const SemanticGraph &other) const {
    return nodes_ == other.nodes_ && edges_ == other.edges_ &&
           alignment_ == other.alignment_;
  }

 private:
  std::vector<GraphNode> nodes_;
  std::vector<GraphEdge> edges_;
  std::set<std::tuple<int, int, EdgeKind>> edge_index_;
  std::set<std::pair<int, int>> pair_index_;
  std::map<int, int> alignment_;
};

// JSON with nodes:[{id,type,phrases,canonical}], edges:[{src,dst,kind,rel}]
// and alignment:{token:node}. Key order is fixed so output is byte-stable.
std::string SerializeGraph(const SemanticGraph &graph, int indent = -1);
SemanticGraph ParseGraph(std::string_view json_text);

// Graphviz rendering. Node shape follows type (N box, V ellipse, O diamond),
// edge style follows kind.
std::string ExportDot(const SemanticGraph &graph);

}  // namespace unigraph

#endif  // UNIGRAPH_GRAPH_H_
