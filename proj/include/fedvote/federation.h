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

#ifndef FEDVOTE_FEDERATION_H_
#define FEDVOTE_FEDERATION_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "fedvote/adversary.h"
#include "fedvote/config.h"
#include "fedvote/data.h"
#include "fedvote/matrix.h"
#include "fedvote/nn.h"
#include "fedvote/quantize.h"
#include "fedvote/rng.h"
#include "fedvote/vote.h"
#include "json.hpp"

namespace fedvote {

struct LocalTrainOptions {
  std::size_t tau = 40;
  std::size_t batch_size = 100;
  OptimizerConfig optimizer;
  NormalizationFn phi = NormalizationFn::Tanh(1.5);
};

// Latent and normalized weights tracked together; `normalized` is phi(latent)
// except that untouched coordinates keep their broadcast value exactly.
struct ClientWeights {
  std::vector<double> latent;
  std::vector<double> normalized;
};

// Client start of round: h = phi^{-1}(2 clip(p) - 1) and w = 2 clip(p) - 1.
ClientWeights InitialClientWeights(std::span<const double> p,
                                   const ClipBounds& clip,
                                   const NormalizationFn& phi);

struct LocalTrainResult {
  ClientWeights weights;
  double mean_loss = 0.0;
};

// Exactly `tau` minibatch steps of SGD or Adam on the latent weights.
// Optimizer state starts fresh. Minibatches come from `batches`.
LocalTrainResult TrainLatent(const Model& model, const DatasetShard& shard,
                             ClientWeights start,
                             const LocalTrainOptions& options,
                             RandomStream batches);

struct ClientState {
  std::size_t id = 0;
  const DatasetShard* shard = nullptr;
  std::uint64_t master_seed = 0;
};

// Worker side of one voting round: rebuild latents from the broadcast soft
// vote, train, then stochastically round phi(h). Batch and rounding draws
// come from the client's own (id, round) streams.
QuantizedWeights LocalTrain(const Model& model, const ClientState& client,
                            std::span<const double> p,
                            const LocalTrainOptions& options, Levels levels,
                            const ClipBounds& clip, std::size_t round,
                            double* mean_loss = nullptr);

// Coordinate-wise mean of the rows.
std::vector<double> FedAvgAggregate(const Matrix& weights);

// Mean of single-level QSGD quantizations of each row; row m uses
// stream.Split(m).
std::vector<double> FedPaqRoundUpdate(const Matrix& updates,
                                      const RandomStream& stream);

struct ServerState {
  std::size_t round = 0;
  std::vector<double> soft_vote;  // voting aggregators, clipped
  std::vector<double> weights;    // real-valued baselines
  std::optional<ReputationState> reputation;
  AggregatorKind aggregator = AggregatorKind::kFedVoteOptionI;
};

struct RoundMetrics {
  std::size_t round = 0;
  std::optional<double> train_loss;
  std::optional<double> test_accuracy;
  std::optional<double> test_accuracy_quantized;
  std::size_t uplink_bytes_total = 0;
  std::optional<double> grad_norm_sq;
  std::vector<double> per_client_cr;

  nlohmann::json ToJson() const;
};

class Federation {
 public:
  // Builds data, model, shards and attack plan from the config.
  explicit Federation(const ExperimentConfig& config);
  // Uses the given train/test sets instead of the config's dataset section.
  Federation(const ExperimentConfig& config, Dataset train, Dataset test);

  const ExperimentConfig& config() const { return config_; }
  const Model& model() const { return model_; }
  const std::vector<DatasetShard>& shards() const { return shards_; }
  const Dataset& test_set() const { return test_; }
  const AttackPlan& attack_plan() const { return attack_; }
  const ServerState& server() const { return server_; }

  // Normalized weights of the global model: 2p - 1, or the baseline weights.
  std::vector<double> GlobalNormalized() const;

  // Clients taking part in `round`, ascending.
  std::vector<std::size_t> SampleParticipants(std::size_t round) const;

  // One communication round; advances server state.
  RoundMetrics Step();

  // Remaining rounds; `sink` sees each record as soon as it exists.
  std::vector<RoundMetrics> Run(
      const std::function<void(const RoundMetrics&)>& sink = {});

  struct Evaluation {
    double train_loss = 0.0;
    double grad_norm_sq = 0.0;
    double test_accuracy = 0.0;
    std::optional<double> test_accuracy_quantized;
  };
  Evaluation Evaluate(std::size_t round) const;

 private:
  void Setup(Dataset train);
  void StepVoting(const std::vector<std::size_t>& participants,
                  RoundMetrics& metrics);
  void StepBaseline(const std::vector<std::size_t>& participants,
                    RoundMetrics& metrics);
  LocalTrainOptions TrainOptions(const NormalizationFn& phi) const;
  const DatasetShard& ShardFor(std::size_t client) const;

  ExperimentConfig config_;
  Model model_;
  std::vector<DatasetShard> shards_;
  std::vector<DatasetShard> poisoned_;
  Dataset test_;
  Dataset train_eval_;
  AttackPlan attack_;
  ServerState server_;
};

// Builds the train/test datasets described by the config.
std::pair<Dataset, Dataset> LoadDatasets(const ExperimentConfig& config);

// Full experiment: `config.rounds` records, a pure function of the config.
std::vector<RoundMetrics> RunExperiment(
    const ExperimentConfig& config,
    const std::function<void(const RoundMetrics&)>& sink = {});

}  // namespace fedvote

#endif  // FEDVOTE_FEDERATION_H_
