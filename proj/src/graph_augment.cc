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

#include "unigraph/graph_augment.h"

#include <numeric>
#include <stdexcept>
#include <vector>

namespace unigraph {

EdgeKindSet AllEdgeKinds() {
  return EdgeKindSet(std::begin(kAllEdgeKinds), std::end(kAllEdgeKinds));
}

SemanticGraph AddReverseAndSelfLoops(const SemanticGraph &graph) {
  SemanticGraph result = graph;
  for (const GraphEdge &edge : graph.edges()) {
    if (edge.kind == EdgeKind::kOriginal) {
      result.AddEdge({edge.dst, edge.src, EdgeKind::kReverse, std::nullopt});
    }
  }
  for (int v = 0; v < graph.node_count(); ++v) {
    result.AddEdge({v, v, EdgeKind::kSelfLoop, std::nullopt});
  }
  return result;
}

SemanticGraph AddSupernode(const SemanticGraph &graph) {
  if (graph.SuperNode()) return graph;
  SemanticGraph result = graph;
  const int super = result.AddNode(NodeType::kSuper, {}, "");
  for (int v = 0; v < super; ++v) {
    result.AddEdge({super, v, EdgeKind::kSuperLink, std::nullopt});
    result.AddEdge({v, super, EdgeKind::kSuperLink, std::nullopt});
  }
  return result;
}

SemanticGraph AddShortcutEdges(const SemanticGraph &graph) {
  std::vector<std::vector<int>> out(graph.node_count());
  for (const GraphEdge &edge : graph.edges()) {
    if ((edge.kind == EdgeKind::kOriginal || edge.kind == EdgeKind::kReverse) &&
        edge.src != edge.dst) {
      out[edge.src].push_back(edge.dst);
    }
  }
  SemanticGraph result = graph;
  for (int u = 0; u < graph.node_count(); ++u) {
    for (int v : out[u]) {
      for (int w : out[v]) {
        if (w == u || graph.HasAnyEdge(u, w)) continue;
        result.AddEdge({u, w, EdgeKind::kShortcut, std::nullopt});
      }
    }
  }
  return result;
}

SemanticGraph Augment(const SemanticGraph &graph,
                      const AugmentOptions &options) {
  SemanticGraph result = graph;
  if (options.reverse_and_self_loops) result = AddReverseAndSelfLoops(result);
  if (options.shortcut_edges) result = AddShortcutEdges(result);
  if (options.supernode) result = AddSupernode(result);
  if (options.reverse_and_self_loops) result = AddReverseAndSelfLoops(result);
  return result;
}

AdjacencyMatrix Adjacency(const SemanticGraph &graph,
                          const EdgeKindSet &kinds) {
  AdjacencyMatrix adjacency;
  adjacency.n = graph.node_count();
  adjacency.entries =
      AdjacencyMatrix::Entries::Constant(adjacency.n, adjacency.n, false);
  for (const GraphEdge &edge : graph.edges()) {
    if (kinds.count(edge.kind)) adjacency.entries(edge.dst, edge.src) = true;
  }
  return adjacency;
}

NormalizedAdjacency DegreeNormalize(const AdjacencyMatrix &adjacency) {
  NormalizedAdjacency normalized;
  normalized.n = adjacency.n;
  normalized.entries = adjacency.entries.cast<double>().matrix();
  for (int j = 0; j < adjacency.n; ++j) {
    const double degree = normalized.entries.col(j).sum();
    if (degree == 0) {
      throw std::domain_error("self-loop pass missing: node " +
                              std::to_string(j) + " has no out-edges");
    }
    normalized.entries.col(j) /= degree;
  }
  return normalized;
}

int WeakComponentCount(const SemanticGraph &graph, const EdgeKindSet &kinds) {
  std::vector<int> parent(graph.node_count());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const GraphEdge &edge : graph.edges()) {
    if (kinds.count(edge.kind)) parent[find(edge.src)] = find(edge.dst);
  }
  int count = 0;
  for (int v = 0; v < graph.node_count(); ++v) count += find(v) == v;
  return count;
}

}  // namespace unigraph
