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

#ifndef FEDVOTE_CONFIG_H_
#define FEDVOTE_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "fedvote/adversary.h"
#include "fedvote/data.h"
#include "fedvote/nn.h"
#include "fedvote/normalization.h"
#include "fedvote/quantize.h"

namespace fedvote {

enum class AggregatorKind {
  kFedVoteOptionI,
  kFedVoteOptionII,
  kFedAvg,
  kSignSgd,
  kFedPaq,
  kCoordMedian,
  kKrum,
};

std::string ToString(AggregatorKind kind);
AggregatorKind ParseAggregatorKind(const std::string& name);
inline bool IsFedVote(AggregatorKind kind) {
  return kind == AggregatorKind::kFedVoteOptionI ||
         kind == AggregatorKind::kFedVoteOptionII;
}

enum class OptimizerKind { kSgd, kAdam };

std::string ToString(OptimizerKind kind);
OptimizerKind ParseOptimizerKind(const std::string& name);

// How the quantized global model is scored each evaluation.
enum class QuantizedEval { kStochastic, kSign };

struct DatasetConfig {
  std::string kind = "synthetic";  // "synthetic" | "idx"
  // synthetic
  std::size_t n_train = 2000;
  std::size_t n_test = 1000;
  std::size_t input_dim = 20;
  std::size_t classes = 2;
  double separation = 10.0;
  // idx
  std::string train_images;
  std::string train_labels;
  std::string test_images;
  std::string test_labels;
  std::size_t max_train = 0;  // 0 keeps everything
  std::size_t max_test = 0;
};

struct ModelConfig {
  std::vector<std::size_t> hidden = {32};
  Activation activation = Activation::kReLU;
  bool static_bn = true;
  double bn_epsilon = 1e-5;
  double init_scale = 0.1;  // latent init U(-s, s)
};

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::kAdam;
  double eta = 0.01;
  double server_eta = 0.001;  // signSGD server step
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
};

struct ExperimentConfig {
  DatasetConfig dataset;
  ModelConfig model;
  PartitionKind partition_kind = PartitionKind::kIID;
  double partition_alpha = 0.5;
  std::size_t clients = 8;
  double participation = 1.0;
  std::size_t rounds = 30;
  std::size_t tau = 40;
  std::size_t batch_size = 100;
  OptimizerConfig optimizer;
  NormalizationFn phi = NormalizationFn::Tanh(1.5);
  Levels quantizer = Levels::kBinary;
  AggregatorKind aggregator = AggregatorKind::kFedVoteOptionI;
  ClipBounds clip;
  double reputation_beta = 0.5;
  AttackKind attack = AttackKind::kNone;
  std::size_t num_attackers = 0;
  std::uint64_t master_seed = 1;
  std::size_t eval_every = 1;
  std::uint64_t eval_seed = 20220217;
  QuantizedEval eval_quantized = QuantizedEval::kStochastic;
  std::string output_dir = "out";

  // Every violation found, empty when valid. `check_files` also requires IDX
  // paths to exist.
  std::vector<std::string> Violations(bool check_files = true) const;
  void Validate(bool check_files = true) const;  // throws ConfigError
};

// Parses and validates. Unknown keys and bad values are reported together.
ExperimentConfig ConfigFromJson(const nlohmann::json& j);
// Fully materialized form; ConfigFromJson(ConfigToJson(c)) == c.
nlohmann::json ConfigToJson(const ExperimentConfig& config);

class ConfigNotFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Throws ConfigNotFound, or ConfigError for parse/schema problems.
ExperimentConfig LoadConfig(const std::filesystem::path& path);

}  // namespace fedvote

#endif  // FEDVOTE_CONFIG_H_
