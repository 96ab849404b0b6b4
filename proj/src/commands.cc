// Copyright 2026 The FedVote Simulator Authors. All Rights Reserved.
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
// =============================================================================

#include "fedvote/commands.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "fedvote/errors.h"
#include "fedvote/federation.h"

namespace fedvote {
namespace {

std::ofstream OpenForWrite(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

void CreateDirectories(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create " + dir.string() + ": " + ec.message());
  }
}

}  // namespace

std::size_t WriteExperimentArtifacts(const ExperimentConfig& config,
                                     const std::filesystem::path& output_dir) {
  config.Validate();
  CreateDirectories(output_dir);
  {
    std::ofstream resolved = OpenForWrite(output_dir / "resolved_config.json");
    resolved << ConfigToJson(config).dump(2) << '\n';
  }
  std::ofstream metrics = OpenForWrite(output_dir / "metrics.jsonl");
  std::size_t written = 0;
  RunExperiment(config, [&](const RoundMetrics& record) {
    metrics << record.ToJson().dump() << '\n';
    metrics.flush();
    ++written;
  });
  return written;
}

nlohmann::json WritePartition(const Dataset& data, const PartitionSpec& spec,
                              std::uint64_t seed,
                              const std::filesystem::path& out_dir) {
  RandomStream rng = RandomStream::Derive(seed, StreamPurpose::kPartition);
  const std::vector<DatasetShard> shards = Partition(data, spec, rng);
  CreateDirectories(out_dir);
  nlohmann::json manifest;
  manifest["kind"] = ToString(spec.kind);
  manifest["alpha"] = spec.alpha;
  manifest["clients"] = spec.clients;
  manifest["classes"] = data.classes;
  manifest["seed"] = seed;
  manifest["shards"] = nlohmann::json::array();
  for (std::size_t m = 0; m < shards.size(); ++m) {
    const std::string stem = "client_" + std::to_string(m);
    WriteIdx(shards[m], out_dir / (stem + "-images.idx"),
             out_dir / (stem + "-labels.idx"));
    manifest["shards"].push_back({{"client", m},
                                  {"images", stem + "-images.idx"},
                                  {"labels", stem + "-labels.idx"},
                                  {"size", shards[m].size()},
                                  {"class_histogram", ClassHistogram(shards[m])}});
  }
  std::ofstream out = OpenForWrite(out_dir / "manifest.json");
  out << manifest.dump(2) << '\n';
  return manifest;
}

OpCountComparison CompareOpCounts(const ExperimentConfig& config) {
  config.Validate();
  ModelSpec spec;
  if (config.dataset.kind == "synthetic") {
    spec.input_dim = config.dataset.input_dim;
    spec.classes = config.dataset.classes;
  } else {
    const Dataset train =
        LoadIdx(config.dataset.train_images, config.dataset.train_labels);
    spec.input_dim = train.inputs.cols();
    spec.classes = train.classes;
  }
  spec.hidden_dims = config.model.hidden;
  spec.activation = config.model.activation;
  spec.static_bn = config.model.static_bn;
  spec.bn_epsilon = config.model.bn_epsilon;
  const Model model = Model::Create(
      spec, RandomStream::Derive(config.master_seed, StreamPurpose::kInit, 0));
  return {CountForwardOps(model, WeightType::kFloat, config.batch_size),
          CountForwardOps(model, WeightType::kBinary, config.batch_size)};
}

std::string FormatLemmaReports(const std::vector<LemmaReport>& reports) {
  std::ostringstream out;
  for (const LemmaReport& r : reports) {
    out << (r.passed ? "PASS " : "FAIL ") << r.name << '\n';
    for (const std::string& line : r.lines) out << "  " << line << '\n';
  }
  return out.str();
}

std::string FormatOpCounts(const OpCountComparison& counts) {
  std::ostringstream out;
  char buf[160];
  out << "layer             float_adds   float_muls  binary_adds  binary_muls\n";
  for (std::size_t l = 0; l < counts.float_ops.layers.size(); ++l) {
    const LayerOps& f = counts.float_ops.layers[l];
    const LayerOps& b = counts.binary_ops.layers[l];
    std::snprintf(buf, sizeof(buf), "%-14s %12zu %12zu %12zu %12zu\n",
                  f.name.c_str(), f.adds, f.muls, b.adds, b.muls);
    out << buf;
  }
  std::snprintf(buf, sizeof(buf), "%-14s %12zu %12zu %12zu %12zu\n", "total",
                counts.float_ops.adds, counts.float_ops.muls,
                counts.binary_ops.adds, counts.binary_ops.muls);
  out << buf;
  std::snprintf(buf, sizeof(buf),
                "energy_mj float=%.6g binary=%.6g ratio=%.4f\n",
                counts.float_ops.energy_mj, counts.binary_ops.energy_mj,
                counts.float_ops.energy_mj / counts.binary_ops.energy_mj);
  out << buf;
  return out.str();
}

}  // namespace fedvote
