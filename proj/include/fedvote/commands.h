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

#ifndef FEDVOTE_COMMANDS_H_
#define FEDVOTE_COMMANDS_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fedvote/config.h"
#include "fedvote/data.h"
#include "fedvote/lemmas.h"
#include "fedvote/nn.h"
#include "json.hpp"

namespace fedvote {

// Runs the experiment, writing `metrics.jsonl` (one record per round,
// flushed as produced) and `resolved_config.json` under `output_dir`.
// Returns the number of records written.
std::size_t WriteExperimentArtifacts(const ExperimentConfig& config,
                                     const std::filesystem::path& output_dir);

// Splits the dataset and writes client_<m>-images.idx /
// client_<m>-labels.idx per client plus manifest.json holding per-client
// class histograms. Returns the manifest.
nlohmann::json WritePartition(const Dataset& data, const PartitionSpec& spec,
                              std::uint64_t seed,
                              const std::filesystem::path& out_dir);

struct OpCountComparison {
  OpCount float_ops;
  OpCount binary_ops;
};

// Forward-pass op counts of the configured model for one training batch.
OpCountComparison CompareOpCounts(const ExperimentConfig& config);

std::string FormatLemmaReports(const std::vector<LemmaReport>& reports);
std::string FormatOpCounts(const OpCountComparison& counts);

}  // namespace fedvote

#endif  // FEDVOTE_COMMANDS_H_
