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

#ifndef UNIGRAPH_GRAPH_STATS_H_
#define UNIGRAPH_GRAPH_STATS_H_

#include <string>
#include <vector>

#include "unigraph/graph_builder.h"

namespace unigraph {

// Average graph size of the inputs whose length falls in
// [length_bucket, length_bucket + bucket_size).
struct StatsRow {
  int length_bucket = 0;
  int inputs = 0;
  double avg_nodes = 0;
  double avg_edges = 0;
};

std::vector<StatsRow> BucketStats(const std::vector<GraphStats> &inputs,
                                  int bucket_size);

std::string FormatStatsCsv(const std::vector<StatsRow> &rows);
std::string FormatStatsTable(const std::vector<StatsRow> &rows);

}  // namespace unigraph

#endif  // UNIGRAPH_GRAPH_STATS_H_
