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

#include "unigraph/checkpoint.h"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <stdexcept>

#include "json.hpp"

namespace unigraph {
namespace {

constexpr char kMagic[8] = {'U', 'G', 'C', 'K', 'P', 'T', '0', '1'};

static_assert(std::endian::native == std::endian::little,
              "checkpoint IO assumes a little-endian host");

}  // namespace

Checkpoint MakeCheckpoint(const GraphSummarizer &model,
                          const std::vector<std::string> &vocabulary) {
  Checkpoint checkpoint;
  checkpoint.config = model.config();
  checkpoint.vocabulary = vocabulary;
  for (const auto &[name, tensor] : model.parameters()) {
    checkpoint.tensors.emplace_back(name, tensor->value);
  }
  return checkpoint;
}

void WriteCheckpoint(const std::string &path, const Checkpoint &checkpoint) {
  nlohmann::ordered_json header;
  header["config"] = ConfigToText(checkpoint.config);
  header["vocabulary"] = checkpoint.vocabulary;
  header["tensors"] = nlohmann::ordered_json::array();
  uint64_t offset = 0;
  for (const auto &[name, value] : checkpoint.tensors) {
    header["tensors"].push_back({{"name", name},
                                 {"rows", value.rows()},
                                 {"cols", value.cols()},
                                 {"offset", offset}});
    offset += value.size() * sizeof(double);
  }
  const std::string text = header.dump();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot write " + path);
  out.write(kMagic, sizeof(kMagic));
  const uint64_t size = text.size();
  out.write(reinterpret_cast<const char *>(&size), sizeof(size));
  out.write(text.data(), text.size());
  for (const auto &[name, value] : checkpoint.tensors) {
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>
        row_major = value;
    out.write(reinterpret_cast<const char *>(row_major.data()),
              row_major.size() * sizeof(double));
  }
  if (!out) throw std::ios_base::failure("write failed for " + path);
}

Checkpoint ReadCheckpoint(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("no such input: " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw std::runtime_error(path + " is not a checkpoint");
  }
  uint64_t size = 0;
  in.read(reinterpret_cast<char *>(&size), sizeof(size));
  std::string text(size, '\0');
  in.read(text.data(), size);
  if (!in) throw std::runtime_error(path + ": truncated header");
  const nlohmann::json header = nlohmann::json::parse(text);

  Checkpoint checkpoint;
  checkpoint.config = ConfigFromText(header.at("config").get<std::string>());
  checkpoint.vocabulary =
      header.at("vocabulary").get<std::vector<std::string>>();
  const std::streampos data_start = in.tellg();
  for (const auto &entry : header.at("tensors")) {
    const long rows = entry.at("rows").get<long>();
    const long cols = entry.at("cols").get<long>();
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>
        row_major(rows, cols);
    in.seekg(data_start +
             static_cast<std::streamoff>(entry.at("offset").get<uint64_t>()));
    in.read(reinterpret_cast<char *>(row_major.data()),
            row_major.size() * sizeof(double));
    if (!in) throw std::runtime_error(path + ": truncated tensor data");
    checkpoint.tensors.emplace_back(entry.at("name").get<std::string>(),
                                    Eigen::MatrixXd(row_major));
  }
  return checkpoint;
}

void LoadWeights(GraphSummarizer &model, const Checkpoint &checkpoint) {
  std::map<std::string, const Eigen::MatrixXd *> by_name;
  for (const auto &[name, value] : checkpoint.tensors) by_name[name] = &value;
  if (by_name.size() != model.parameters().size()) {
    throw std::runtime_error("checkpoint tensor count does not match model");
  }
  for (auto &[name, tensor] : model.parameters()) {
    auto it = by_name.find(name);
    if (it == by_name.end()) {
      throw std::runtime_error("checkpoint lacks tensor " + name);
    }
    if (it->second->rows() != tensor->value.rows() ||
        it->second->cols() != tensor->value.cols()) {
      throw std::runtime_error("shape mismatch for tensor " + name);
    }
    tensor->value = *it->second;
  }
}

}  // namespace unigraph
