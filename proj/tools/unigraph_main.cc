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

// unigraph: build semantic graphs from annotations, inspect them, and train
// or run the toy graph summarizer.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "unigraph/annotation.h"
#include "unigraph/beam_search.h"
#include "unigraph/checkpoint.h"
#include "unigraph/graph.h"
#include "unigraph/graph_augment.h"
#include "unigraph/graph_builder.h"
#include "unigraph/graph_stats.h"
#include "unigraph/model.h"
#include "unigraph/selfcheck.h"
#include "unigraph/threads.h"
#include "unigraph/toy_task.h"
#include "unigraph/train.h"

namespace unigraph {
namespace {

using json = nlohmann::ordered_json;

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsageError = 2;

struct Common {
  bool json = false;
  uint64_t seed = 0;
};

// Error raised for bad flag combinations found after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void AddCommon(CLI::App *app, Common &common) {
  app->add_flag("--json", common.json, "Machine-readable output");
  app->add_option("--seed", common.seed, "Seed for every random choice");
}

std::string ReadFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("no such input: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteOutput(const std::string &path, const std::string &text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot write: " + path);
  out << text;
}

void PrintDiagnostics(const Diagnostics &diagnostics, bool as_json) {
  for (const auto &d : diagnostics) {
    if (as_json) {
      std::cerr << json{{"diagnostic", d.code}, {"message", d.message}}.dump()
                << "\n";
    } else {
      std::cerr << "warning: " << d.code << ": " << d.message << "\n";
    }
  }
}

// A graph file is a JSON object with a "nodes" member; anything else is
// read as annotations.
bool LooksLikeGraph(const std::string &bytes) {
  try {
    const json j = json::parse(bytes);
    return j.is_object() && j.contains("nodes");
  } catch (const json::exception &) {
    return false;
  }
}

AugmentOptions AugmentFlags(bool no_reverse, bool no_shortcut,
                            bool no_supernode) {
  AugmentOptions options;
  options.reverse_and_self_loops = !no_reverse;
  options.shortcut_edges = !no_shortcut;
  options.supernode = !no_supernode;
  return options;
}

struct GraphFlags {
  std::string input;
  std::string out;
  bool augment = false;
  bool no_reverse = false;
  bool no_shortcut = false;
  bool no_supernode = false;

  void Add(CLI::App *app) {
    app->add_option("input", input, "Annotation JSON (or graph JSON)")
        ->required();
    app->add_option("-o,--out", out, "Output path (default stdout)");
    app->add_flag("--augment", augment,
                  "Add reverse, self-loop, shortcut and supernode edges");
    app->add_flag("--no-reverse", no_reverse, "Skip reverse/self-loop edges");
    app->add_flag("--no-shortcut", no_shortcut, "Skip shortcut edges");
    app->add_flag("--no-supernode", no_supernode, "Skip the supernode");
  }

  SemanticGraph Load(const Common &common) const {
    const std::string bytes = ReadFile(input);
    SemanticGraph graph;
    if (LooksLikeGraph(bytes)) {
      graph = ParseGraph(bytes);
    } else {
      const DocumentSet documents = ParseAnnotationFile(bytes);
      ValidateDocumentSet(documents);
      Diagnostics diagnostics;
      graph = BuildGraph(documents, &diagnostics);
      PrintDiagnostics(diagnostics, common.json);
    }
    if (augment) {
      graph = Augment(graph, AugmentFlags(no_reverse, no_shortcut,
                                          no_supernode));
    }
    return graph;
  }
};

int BuildGraphCommand(const GraphFlags &flags, const std::string &dot_path,
                      const Common &common) {
  const SemanticGraph graph = flags.Load(common);
  WriteOutput(flags.out, SerializeGraph(graph, common.json ? -1 : 2) + "\n");
  if (!dot_path.empty()) WriteOutput(dot_path, ExportDot(graph));
  return kOk;
}

int ExportDotCommand(const GraphFlags &flags, const Common &common) {
  WriteOutput(flags.out, ExportDot(flags.Load(common)));
  return kOk;
}

int StatsCommand(const std::vector<std::string> &inputs, int bucket_size,
                 bool table, const Common &common) {
  std::vector<GraphStats> stats;
  for (const auto &path : inputs) {
    const std::string bytes = ReadFile(path);
    if (LooksLikeGraph(bytes)) {
      const SemanticGraph graph = ParseGraph(bytes);
      stats.push_back(ComputeGraphStats(
          graph, static_cast<int>(graph.alignment().size())));
      continue;
    }
    const DocumentSet documents = ParseAnnotationFile(bytes);
    ValidateDocumentSet(documents);
    for (size_t i = 0; i < documents.documents.size(); ++i) {
      const DocumentSet single = ExtractDocument(documents, i);
      Diagnostics diagnostics;
      const SemanticGraph graph = BuildGraph(single, &diagnostics);
      PrintDiagnostics(diagnostics, common.json);
      stats.push_back(ComputeGraphStats(graph, single.token_count()));
    }
  }
  const std::vector<StatsRow> rows = BucketStats(stats, bucket_size);
  if (common.json) {
    json out = json::array();
    for (const auto &row : rows) {
      out.push_back({{"length_bucket", row.length_bucket},
                     {"inputs", row.inputs},
                     {"avg_nodes", row.avg_nodes},
                     {"avg_edges", row.avg_edges}});
    }
    std::cout << out.dump() << "\n";
  } else {
    std::cout << (table ? FormatStatsTable(rows) : FormatStatsCsv(rows));
  }
  return kOk;
}

int SelfCheckCommand(bool inject_fault, const Common &common) {
  SelfCheckOptions options;
  options.seed = common.seed;
  options.inject_propagation_fault = inject_fault;
  const std::vector<PropertyResult> results = RunSelfCheck(options);
  bool all = true;
  json out = json::array();
  for (const auto &r : results) {
    all = all && r.passed;
    if (common.json) {
      out.push_back(
          {{"property", r.name}, {"passed", r.passed}, {"detail", r.detail}});
    } else {
      std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << "  "
                << r.detail << "\n";
    }
  }
  if (common.json) {
    std::cout << json{{"passed", all}, {"properties", out}}.dump() << "\n";
  } else {
    std::cout << (all ? "all properties passed" : "self-check failed")
              << "\n";
  }
  return all ? kOk : kCheckFailed;
}

struct TrainFlags {
  int steps = 500;
  int examples = 50;
  int batch_size = 0;
  double learning_rate = 1e-3;
  std::string out;
  std::string loss_csv;
  std::vector<std::string> overrides;
};

ModelConfig ApplyOverrides(ModelConfig config,
                           const std::vector<std::string> &overrides) {
  for (const auto &item : overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw UsageError("--set expects key=value, got '" + item + "'");
    }
    try {
      SetConfigValue(config, item.substr(0, eq), item.substr(eq + 1));
    } catch (const std::invalid_argument &e) {
      throw UsageError(e.what());
    }
  }
  return config;
}

int TrainCommand(const TrainFlags &flags, const Common &common) {
  const ToyTask task = MakePlantedCorefTask(flags.examples, common.seed);
  ModelConfig config;
  config.vocab_size = task.vocabulary.size();
  config = ApplyOverrides(config, flags.overrides);
  config.Validate();
  GraphSummarizer model(config, common.seed);
  const std::vector<TrainingExample> examples = PrepareExamples(task, config);

  TrainOptions options;
  options.steps = flags.steps;
  options.learning_rate = flags.learning_rate;
  options.batch_size = flags.batch_size;
  options.seed = common.seed;
  const auto curve = Train(model, examples, options, [&](const StepRecord &r) {
    if (!common.json && (r.step % 50 == 0 || r.step + 1 == flags.steps)) {
      std::fprintf(stderr, "step %d loss %.6f grad_norm %.4f\n", r.step,
                   r.loss, r.grad_norm);
    }
  });
  WriteCheckpoint(flags.out, MakeCheckpoint(model, task.vocabulary.words()));
  if (!flags.loss_csv.empty()) WriteOutput(flags.loss_csv, FormatLossCsv(curve));
  if (common.json) {
    json out{{"checkpoint", flags.out}, {"steps", curve.size()}};
    if (!curve.empty()) {
      out["initial_loss"] = curve.front().loss;
      out["final_loss"] = curve.back().loss;
    }
    std::cout << out.dump() << "\n";
  } else {
    std::cout << "wrote " << flags.out << " after " << curve.size()
              << " steps\n";
  }
  return kOk;
}

struct GenerateFlags {
  std::string checkpoint;
  std::string input;
  std::string out;
  int examples = 50;
  int beam = 5;
  bool greedy = false;
  double length_penalty = 0.9;
  double omega = 0.9;
  int steps = 2;
  int max_len = 32;
  bool no_trigram_block = false;
};

struct GenerationInput {
  std::string id;
  std::vector<int> ids;
  SemanticGraph graph;
};

int GenerateCommand(const GenerateFlags &flags, const Common &common) {
  const Checkpoint checkpoint = ReadCheckpoint(flags.checkpoint);
  GraphSummarizer model(checkpoint.config, common.seed);
  LoadWeights(model, checkpoint);
  model.SetPropagation(flags.omega, flags.steps, true);
  const Vocabulary vocabulary(checkpoint.vocabulary);

  std::vector<GenerationInput> inputs;
  if (!flags.input.empty()) {
    const DocumentSet documents = ReadAnnotationFile(flags.input);
    ValidateDocumentSet(documents);
    for (size_t i = 0; i < documents.documents.size(); ++i) {
      const DocumentSet single = ExtractDocument(documents, i);
      inputs.push_back({single.documents[0].doc_id,
                        EncodeDocuments(single, vocabulary),
                        BuildGraph(single)});
    }
  } else {
    ToyTask task = MakePlantedCorefTask(flags.examples, common.seed);
    for (auto &e : task.examples) {
      inputs.push_back({e.input_id, e.input_ids, std::move(e.graph)});
    }
  }

  BeamOptions options;
  options.beam_size = flags.greedy ? 1 : flags.beam;
  options.length_penalty = flags.length_penalty;
  options.max_len = flags.max_len;
  options.trigram_blocking = !flags.no_trigram_block;
  options.eos = Vocabulary::kEos;
  if (options.beam_size < 1) throw UsageError("--beam must be at least 1");

  std::vector<std::string> lines(inputs.size());
  ParallelFor(static_cast<int>(inputs.size()), [&](int i) {
    const GenerationInput &in = inputs[i];
    json record{{"input_id", in.id}};
    if (in.ids.empty()) {
      record["tokens"] = json::array();
      record["score"] = 0.0;
    } else {
      const GraphInput graph = PrepareGraph(
          in.graph, static_cast<int>(in.ids.size()), model.config());
      const auto encoded = model.Encode(in.ids, graph);
      const BeamResult result = BeamSearch(
          ModelScorer(model, encoded, Vocabulary::kBos), options);
      json tokens = json::array();
      for (int id : result.tokens) tokens.push_back(vocabulary.Word(id));
      record["tokens"] = tokens;
      record["score"] = result.score;
    }
    lines[i] = record.dump() + "\n";
  });
  std::string text;
  for (const auto &line : lines) text += line;
  WriteOutput(flags.out, text);
  return kOk;
}

void ReportError(const std::string &kind, const std::string &message,
                 const Common &common, json extra = json::object()) {
  if (common.json) {
    json out{{"error", kind}, {"message", message}};
    out.update(extra);
    std::cout << out.dump() << "\n";
  }
  std::cerr << "error: " << message << "\n";
}

int Main(int argc, char **argv) {
  CLI::App app{"Unified semantic graphs and graph-propagation summarizer"};
  app.require_subcommand(1);
  Common common;
  // Accepted before or after the subcommand name.
  AddCommon(&app, common);

  GraphFlags build_flags;
  std::string dot_path;
  CLI::App *build = app.add_subcommand("build-graph",
                                       "Annotations to graph JSON");
  build_flags.Add(build);
  build->add_option("--dot", dot_path, "Also write Graphviz DOT here");
  AddCommon(build, common);

  std::vector<std::string> stats_inputs;
  int bucket_size = 100;
  bool table = false;
  CLI::App *stats = app.add_subcommand(
      "stats", "Average node and edge counts per input-length bucket");
  stats->add_option("inputs", stats_inputs,
                    "Annotation or graph JSON files")
      ->required();
  stats->add_option("--bucket-size", bucket_size, "Tokens per bucket");
  stats->add_flag("--table", table, "Aligned text instead of CSV");
  AddCommon(stats, common);

  GraphFlags dot_flags;
  CLI::App *dot = app.add_subcommand("export-dot", "Graph to Graphviz DOT");
  dot_flags.Add(dot);
  AddCommon(dot, common);

  bool inject_fault = false;
  CLI::App *check =
      app.add_subcommand("selfcheck", "Run the numerical property suite");
  check->add_flag("--inject-fault", inject_fault,
                  "Flip the restart sign in iterative propagation");
  AddCommon(check, common);

  TrainFlags train_flags;
  CLI::App *train =
      app.add_subcommand("train", "Train on the planted-coreference task");
  train->add_option("--steps", train_flags.steps, "Optimizer steps");
  train->add_option("--examples", train_flags.examples, "Task size");
  train->add_option("--batch-size", train_flags.batch_size,
                    "Examples per step (0: all)");
  train->add_option("--lr", train_flags.learning_rate, "Learning rate");
  train->add_option("-o,--out", train_flags.out, "Checkpoint path")
      ->required();
  train->add_option("--loss-csv", train_flags.loss_csv,
                    "Write the loss curve (step,loss)");
  train->add_option("--set", train_flags.overrides,
                    "Model config override key=value");
  AddCommon(train, common);

  GenerateFlags gen_flags;
  CLI::App *generate =
      app.add_subcommand("generate", "Decode summaries from a checkpoint");
  generate->add_option("--checkpoint", gen_flags.checkpoint)->required();
  generate->add_option("--input", gen_flags.input,
                       "Annotation JSON (default: the toy task)");
  generate->add_option("--examples", gen_flags.examples, "Toy task size");
  generate->add_option("-o,--out", gen_flags.out, "JSON lines output");
  generate->add_option("--beam", gen_flags.beam, "Beam size");
  generate->add_flag("--greedy", gen_flags.greedy, "Greedy decoding");
  generate->add_option("--length-penalty", gen_flags.length_penalty);
  generate->add_option("--omega", gen_flags.omega, "Teleport probability");
  generate->add_option("--p", gen_flags.steps, "Propagation steps");
  generate->add_option("--max-len", gen_flags.max_len);
  generate->add_flag("--no-trigram-block", gen_flags.no_trigram_block);
  AddCommon(generate, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (*build) return BuildGraphCommand(build_flags, dot_path, common);
    if (*stats) {
      if (bucket_size < 1) throw UsageError("--bucket-size must be >= 1");
      return StatsCommand(stats_inputs, bucket_size, table, common);
    }
    if (*dot) return ExportDotCommand(dot_flags, common);
    if (*check) return SelfCheckCommand(inject_fault, common);
    if (*train) return TrainCommand(train_flags, common);
    if (*generate) return GenerateCommand(gen_flags, common);
  } catch (const std::ios_base::failure &e) {
    ReportError("io", e.what(), common);
    return kUsageError;
  } catch (const UsageError &e) {
    ReportError("usage", e.what(), common);
    return kUsageError;
  } catch (const ParseError &e) {
    ReportError("parse", e.what(), common,
                {{"byte_offset", e.byte_offset()}});
    return kCheckFailed;
  } catch (const ValidationError &e) {
    ReportError("validation", e.what(), common,
                {{"doc_id", e.doc_id()}, {"rule", e.rule()},
                 {"index", e.index()}});
    return kCheckFailed;
  } catch (const NonFiniteLossError &e) {
    ReportError("non-finite-loss", e.what(), common);
    return kCheckFailed;
  } catch (const std::exception &e) {
    ReportError("invalid", e.what(), common);
    return kCheckFailed;
  }
  return kUsageError;
}

}  // namespace
}  // namespace unigraph

int main(int argc, char **argv) { return unigraph::Main(argc, argv); }
