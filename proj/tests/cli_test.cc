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

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <string>

#include "json.hpp"
#include "test_util.h"
#include "unigraph/checkpoint.h"
#include "unigraph/toy_task.h"

namespace unigraph {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
};

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("unigraph_cli_" +
            std::string(
                ::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Path(const std::string &name) const { return (dir_ / name).string(); }

  CliRun Cli(const std::string &args) const {
    const std::string err_path = Path("stderr.txt");
    const std::string command =
        std::string(UNIGRAPH_CLI_PATH) + " " + args + " 2>" + err_path;
    CliRun run;
    FILE *pipe = popen(command.c_str(), "r");
    if (!pipe) return run;
    char buffer[4096];
    size_t n;
    while ((n = fread(buffer, 1, sizeof buffer, pipe)) > 0) run.out.append(buffer, n);
    const int status = pclose(pipe);
    run.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    run.err = testing::ReadText(err_path);
    return run;
  }

  fs::path dir_;
};

std::string Fixture(const std::string &name) {
  return testing::FixturePath(name);
}

TEST_F(CliTest, GoldenGraphIsByteIdentical) {
  const CliRun run = Cli("build-graph " + Fixture("einstein.json"));
  ASSERT_EQ(run.code, 0) << run.err;
  EXPECT_EQ(run.out, testing::ReadText(Fixture("einstein.graph.json")));
  const CliRun again = Cli("build-graph " + Fixture("einstein.json") + " -o " +
                        Path("g.json"));
  ASSERT_EQ(again.code, 0);
  EXPECT_EQ(testing::ReadText(Path("g.json")), run.out);
}

TEST_F(CliTest, MissingInputExitsTwo) {
  for (const std::string sub : {"build-graph", "stats", "export-dot"}) {
    const CliRun run = Cli(sub + " " + Path("missing.json"));
    EXPECT_EQ(run.code, 2) << sub;
    EXPECT_NE(run.err.find("no such input"), std::string::npos) << run.err;
  }
  const CliRun json_run = Cli("--json build-graph " + Path("missing.json"));
  EXPECT_EQ(json_run.code, 2);
  EXPECT_EQ(json::parse(json_run.out).at("error"), "io");
}

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(Cli("").code, 2);
  EXPECT_EQ(Cli("no-such-command").code, 2);
  EXPECT_EQ(Cli("build-graph").code, 2);
  EXPECT_EQ(Cli("train --set nonsense -o " + Path("m.bin")).code, 2);
}

TEST_F(CliTest, InvalidAnnotationsExitOne) {
  const CliRun run = Cli("--json build-graph " + Fixture("invalid_cycle.json"));
  EXPECT_EQ(run.code, 1);
  EXPECT_TRUE(json::parse(run.out).contains("error"));
  std::FILE *f = std::fopen(Path("broken.json").c_str(), "w");
  std::fputs("{\"documents\": [", f);
  std::fclose(f);
  EXPECT_EQ(Cli("build-graph " + Path("broken.json")).code, 1);
}

TEST_F(CliTest, EmptyDocumentSetGivesEmptyGraph) {
  std::FILE *f = std::fopen(Path("empty.json").c_str(), "w");
  std::fputs("{\"documents\": []}", f);
  std::fclose(f);
  const CliRun run = Cli("--json build-graph " + Path("empty.json"));
  ASSERT_EQ(run.code, 0) << run.err;
  const json graph = json::parse(run.out);
  EXPECT_TRUE(graph.at("nodes").empty());
  EXPECT_TRUE(graph.at("edges").empty());
}

TEST_F(CliTest, StatsOnEmptyDocument) {
  const CliRun run = Cli("stats " + Fixture("empty_doc.json"));
  ASSERT_EQ(run.code, 0) << run.err;
  EXPECT_EQ(run.out.rfind("length_bucket,inputs,avg_nodes,avg_edges\n", 0), 0u);
  EXPECT_NE(run.out.find("0,0\n"), std::string::npos) << run.out;
}

TEST_F(CliTest, StatsOverNestedPrefixes) {
  const CliRun run =
      Cli("stats --bucket-size 1 " + Fixture("nested_prefix.json"));
  ASSERT_EQ(run.code, 0) << run.err;
  EXPECT_EQ(run.out,
            "length_bucket,inputs,avg_nodes,avg_edges\n"
            "9,1,4,4\n18,1,8,8\n31,1,12,13\n40,1,14,17\n");
}

TEST_F(CliTest, ExportDot) {
  const CliRun run = Cli("export-dot --augment " + Fixture("einstein.json"));
  ASSERT_EQ(run.code, 0) << run.err;
  EXPECT_EQ(run.out.rfind("digraph", 0), 0u);
  EXPECT_NE(run.out.find("SUPER"), std::string::npos);
  // Graph JSON is accepted as input too.
  const CliRun from_graph = Cli("export-dot " + Fixture("einstein.graph.json"));
  ASSERT_EQ(from_graph.code, 0) << from_graph.err;
  EXPECT_EQ(from_graph.out, Cli("export-dot " + Fixture("einstein.json")).out);
}

TEST_F(CliTest, AugmentedBuildAddsSupernode) {
  const CliRun run = Cli("--json build-graph --augment " + Fixture("einstein.json"));
  ASSERT_EQ(run.code, 0);
  const json graph = json::parse(run.out);
  EXPECT_EQ(graph.at("nodes").size(), 10u);
  EXPECT_EQ(graph.at("nodes").back().at("type"), "SUPER");
  const CliRun plain = Cli("--json build-graph --augment --no-supernode " +
                        Fixture("einstein.json"));
  EXPECT_EQ(json::parse(plain.out).at("nodes").size(), 9u);
}

TEST_F(CliTest, SelfCheckAndInjectedFault) {
  const CliRun run = Cli("selfcheck");
  EXPECT_EQ(run.code, 0) << run.out;
  int passes = 0;
  for (size_t pos = 0; (pos = run.out.find("PASS ", pos)) != std::string::npos;
       ++pos) {
    ++passes;
  }
  EXPECT_GE(passes, 6);
  EXPECT_EQ(run.out.find("FAIL"), std::string::npos);

  const CliRun faulty = Cli("selfcheck --inject-fault");
  EXPECT_EQ(faulty.code, 1);
  EXPECT_NE(faulty.out.find("FAIL propagation-equivalence"), std::string::npos)
      << faulty.out;
  const CliRun as_json = Cli("--json selfcheck --inject-fault");
  EXPECT_EQ(as_json.code, 1);
  bool found = false;
  const json report = json::parse(as_json.out);
  for (const auto &p : report.at("properties")) {
    if (p.at("property") == "propagation-equivalence") {
      found = true;
      EXPECT_FALSE(p.at("passed").get<bool>());
    }
  }
  EXPECT_TRUE(found);
}

TEST_F(CliTest, ZeroStepTrainingSavesInitialization) {
  const CliRun run =
      Cli("--seed 17 train --steps 0 --examples 3 -o " + Path("m.bin"));
  ASSERT_EQ(run.code, 0) << run.err;
  const ToyTask task = MakePlantedCorefTask(3, 17);
  ModelConfig config;
  config.vocab_size = task.vocabulary.size();
  GraphSummarizer fresh(config, 17);
  WriteCheckpoint(Path("fresh.bin"),
                  MakeCheckpoint(fresh, task.vocabulary.words()));
  EXPECT_EQ(testing::ReadText(Path("m.bin")),
            testing::ReadText(Path("fresh.bin")));
}

TEST_F(CliTest, TrainThenGenerate) {
  const std::string small =
      "--set d_model=16 --set n_heads=2 --set ffn_width=32 "
      "--set enc_layers=1 --set graph_enc_layers=1 --set dec_layers=1";
  const CliRun train = Cli("--json --seed 3 train --steps 30 --examples 6 --lr 0.01 " +
                        small + " -o " + Path("m.bin") + " --loss-csv " +
                        Path("loss.csv"));
  ASSERT_EQ(train.code, 0) << train.err;
  const json summary = json::parse(train.out);
  EXPECT_EQ(summary.at("steps"), 30);
  EXPECT_LT(summary.at("final_loss").get<double>(),
            summary.at("initial_loss").get<double>());
  EXPECT_EQ(testing::ReadText(Path("loss.csv")).rfind("step,loss\n0,", 0), 0u);

  // Same seed, same curve.
  Cli("--seed 3 train --steps 30 --examples 6 --lr 0.01 " + small + " -o " +
      Path("m2.bin") + " --loss-csv " + Path("loss2.csv"));
  EXPECT_EQ(testing::ReadText(Path("loss.csv")),
            testing::ReadText(Path("loss2.csv")));
  EXPECT_EQ(testing::ReadText(Path("m.bin")), testing::ReadText(Path("m2.bin")));

  const std::string gen = "generate --examples 6 --checkpoint " + Path("m.bin");
  const CliRun p0 = Cli(gen + " --p 0");
  const CliRun p2 = Cli(gen + " --p 2");
  ASSERT_EQ(p0.code, 0) << p0.err;
  ASSERT_EQ(p2.code, 0) << p2.err;
  EXPECT_NE(p0.out, p2.out);
  int lines = 0;
  for (size_t pos = 0; (pos = p2.out.find('\n', pos)) != std::string::npos; ++pos) {
    ++lines;
  }
  EXPECT_EQ(lines, 6);
  const json first = json::parse(p2.out.substr(0, p2.out.find('\n')));
  EXPECT_EQ(first.at("input_id"), "toy-0");
  EXPECT_TRUE(first.at("tokens").is_array());

  EXPECT_EQ(Cli(gen + " --beam 1").out, Cli(gen + " --greedy").out);
  EXPECT_EQ(Cli(gen + " --beam 0").code, 2);
  EXPECT_EQ(Cli(gen + " --omega 0").code, 1);

  // Annotation input: one line per document, empty doc included.
  const CliRun on_corpus =
      Cli("generate --checkpoint " + Path("m.bin") + " --input " +
          Fixture("corpus.json"));
  ASSERT_EQ(on_corpus.code, 0) << on_corpus.err;
  EXPECT_NE(on_corpus.out.find("\"input_id\":\"einstein\""), std::string::npos);
}

TEST_F(CliTest, GenerateWithMissingCheckpoint) {
  const CliRun run = Cli("generate --checkpoint " + Path("none.bin"));
  EXPECT_EQ(run.code, 2);
  EXPECT_NE(run.err.find("no such input"), std::string::npos);
}

}  // namespace
}  // namespace unigraph
