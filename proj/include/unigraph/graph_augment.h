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

#ifndef UNIGRAPH_GRAPH_AUGMENT_H_
#define UNIGRAPH_GRAPH_AUGMENT_H_

#include <set>

#include <Eigen/Dense>

#include "unigraph/graph.h"

namespace unigraph {

using EdgeKindSet = std::set<EdgeKind>;
EdgeKindSet AllEdgeKinds();

// Boolean adjacency with column = source: entries(i, j) is true iff an edge
// j -> i is present.
struct AdjacencyMatrix {
  using Entries = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

  int n = 0;
  Entries entries;

  int nonzeros() const { return entries.count(); }
};

// Column-stochastic A D^-1, where D holds the out-degree of every source.
struct NormalizedAdjacency {
  int n = 0;
  Eigen::MatrixXd entries;
};

// For every ORIGINAL edge u->v adds v->u (REVERSE), and a SELF_LOOP on
// every node.
SemanticGraph AddReverseAndSelfLoops(const SemanticGraph &graph);

// Adds one SUPER node linked both ways to every other node. No-op if the
// graph already has one.
SemanticGraph AddSupernode(const SemanticGraph &graph);

// Adds u->w (SHORTCUT) for every two-hop path u->v->w over ORIGINAL and
// REVERSE edges with distinct endpoints, unless u->w already exists.
SemanticGraph AddShortcutEdges(const SemanticGraph &graph);

struct AugmentOptions {
  bool reverse_and_self_loops = true;
  bool shortcut_edges = true;
  bool supernode = true;

  bool operator==(const AugmentOptions &) const = default;
};

// Runs the enabled passes in the order loops, shortcuts, supernode; the
// loop pass runs again at the end so the supernode carries a self-loop.
// Shortcuts are computed before the supernode exists.
SemanticGraph Augment(const SemanticGraph &graph,
                      const AugmentOptions &options = {});

AdjacencyMatrix Adjacency(const SemanticGraph &graph,
                          const EdgeKindSet &kinds = AllEdgeKinds());

// Throws std::domain_error if a column is empty.
NormalizedAdjacency DegreeNormalize(const AdjacencyMatrix &adjacency);

// Number of weakly connected components over the given edge kinds.
int WeakComponentCount(const SemanticGraph &graph, const EdgeKindSet &kinds);

}  // namespace unigraph

#endif  // UNIGRAPH_GRAPH_AUGMENT_H_
