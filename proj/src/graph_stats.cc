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

#include "unigraph/graph_stats.h"

#include <cstdio>
#include <map>
#include <stdexcept>

namespace unigraph {

std::vector<StatsRow> BucketStats(const std::vector<GraphStats> &inputs,
                                  int bucket_size) {
  if (bucket_size < 1) throw std::invalid_argument("bucket size must be >= 1");
  std::map<int, StatsRow> rows;
  for (const GraphStats &stats : inputs) {
    const int bucket = stats.input_token_count / bucket_size * bucket_size;
    StatsRow &row = rows[bucket];
    row.length_bucket = bucket;
    row.inputs++;
    row.avg_nodes += stats.node_count;
    row.avg_edges += stats.edge_count;
  }
  std::vector<StatsRow> result;
  for (auto &[bucket, row] : rows) {
    row.avg_nodes /= row.inputs;
    row.avg_edges /= row.inputs;
    result.push_back(row);
  }
  return result;
}

std::string FormatStatsCsv(const std::vector<StatsRow> &rows) {
  std::string out = "length_bucket,inputs,avg_nodes,avg_edges\n";
  char line[128];
  for (const StatsRow &row : rows) {
    std::snprintf(line, sizeof(line), "%d,%d,%g,%g\n", row.length_bucket,
                  row.inputs, row.avg_nodes, row.avg_edges);
    out += line;
  }
  return out;
}

std::string FormatStatsTable(const std::vector<StatsRow> &rows) {
  std::string out = "  length  inputs   avg nodes   avg edges\n";
  char line[128];
  for (const StatsRow &row : rows) {
    std::snprintf(line, sizeof(line), "%8d  %6d  %10.2f  %10.2f\n",
                  row.length_bucket, row.inputs, row.avg_nodes,
                  row.avg_edges);
    out += line;
  }
  return out;
}

}  // namespace unigraph
