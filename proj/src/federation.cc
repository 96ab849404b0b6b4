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

#include "fedvote/federation.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>

#include "fedvote/errors.h"

namespace fedvote {
namespace {

// Number of training examples used for the train-loss and gradient-norm
// diagnostics.
constexpr std::size_t kTrainEvalSize = 2000;

// Runs body(j) for j in [0, n) on the OpenMP pool; rethrows the first
// exception after the loop.
template <typename Body>
void ParallelFor(std::size_t n, const Body& body) {
  std::exception_ptr failure;
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t j = 0; j < count; ++j) {
    try {
      body(static_cast<std::size_t>(j));
    } catch (...) {
#pragma omp critical(fedvote_parallel_for_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

// Draws minibatch indices without replacement from a persistent permutation.
class BatchSampler {
 public:
  BatchSampler(std::size_t shard_size, std::size_t batch_size,
               RandomStream stream)
      : stream_(stream), order_(shard_size) {
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    take_ = std::min(batch_size, shard_size);
  }

  std::vector<std::size_t> Next() {
    const std::size_t n = order_.size();
    for (std::size_t i = 0; i < take_; ++i) {
      const std::size_t j = i + stream_.UniformInt(n - i);
      std::swap(order_[i], order_[j]);
    }
    std::vector<std::size_t> picked(order_.begin(),
                                    order_.begin() + static_cast<long>(take_));
    // Batch statistics need two rows; a one-example shard is repeated.
    if (picked.size() == 1) picked.push_back(picked.front());
    return picked;
  }

 private:
  RandomStream stream_;
  std::vector<std::size_t> order_;
  std::size_t take_ = 0;
};

Matrix RowsToMatrix(const std::vector<std::vector<double>>& rows,
                    std::size_t cols) {
  Matrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
  }
  return m;
}

Matrix QuantizeRows(const Matrix& updates, const RandomStream& stream) {
  Matrix out(updates.rows(), updates.cols());
  for (std::size_t m = 0; m < updates.rows(); ++m) {
    const auto q = QsgdQuantize(updates.row(m), stream.Split(m));
    std::copy(q.begin(), q.end(), out.row(m).begin());
  }
  return out;
}

QuantizedWeights SignsOf(std::span<const double> delta) {
  QuantizedWeights out{Levels::kBinary, std::vector<std::int8_t>(delta.size())};
  for (std::size_t i = 0; i < delta.size(); ++i) {
    out.values[i] = delta[i] >= 0.0 ? 1 : -1;
  }
  return out;
}

std::optional<double> OptionalOf(double v) { return v; }

}  // namespace

ClientWeights InitialClientWeights(std::span<const double> p,
                                   const ClipBounds& clip,
                                   const NormalizationFn& phi) {
  ClientWeights w;
  w.latent = ReconstructFromSoftVote(p, clip, phi);
  w.normalized.resize(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    w.normalized[i] = 2.0 * clip.Clip(p[i]) - 1.0;
  }
  return w;
}

LocalTrainResult TrainLatent(const Model& model, const DatasetShard& shard,
                             ClientWeights start,
                             const LocalTrainOptions& options,
                             RandomStream batches) {
  if (shard.size() == 0) throw InvalidArgument("local_train: empty shard");
  if (options.tau == 0) throw InvalidArgument("local_train: tau must be >= 1");
  if (!(options.optimizer.eta >= 0.0)) {
    throw InvalidArgument("local_train: eta must be >= 0");
  }
  LocalTrainResult result;
  result.weights = std::move(start);
  std::vector<double>& h = result.weights.latent;
  std::vector<double>& w = result.weights.normalized;
  const std::size_t d = h.size();
  const OptimizerConfig& opt = options.optimizer;
  const bool adam = opt.kind == OptimizerKind::kAdam;
  std::vector<double> first_moment(adam ? d : 0, 0.0);
  std::vector<double> second_moment(adam ? d : 0, 0.0);
  double beta1_power = 1.0;
  double beta2_power = 1.0;

  BatchSampler sampler(shard.size(), options.batch_size, batches);
  double loss_sum = 0.0;
  for (std::size_t t = 0; t < options.tau; ++t) {
    const Batch batch = Subset(shard, sampler.Next()).AsBatch();
    const LossAndGrad lg = LossAndGradNormalized(model, w, batch);
    loss_sum += lg.loss;
    const std::vector<double> grad = LatentGradient(lg.grad, h, options.phi);
    if (adam) {
      beta1_power *= opt.adam_beta1;
      beta2_power *= opt.adam_beta2;
    }
    for (std::size_t i = 0; i < d; ++i) {
      double step;
      if (adam) {
        first_moment[i] =
            opt.adam_beta1 * first_moment[i] + (1.0 - opt.adam_beta1) * grad[i];
        second_moment[i] = opt.adam_beta2 * second_moment[i] +
                           (1.0 - opt.adam_beta2) * grad[i] * grad[i];
        const double m_hat = first_moment[i] / (1.0 - beta1_power);
        const double v_hat = second_moment[i] / (1.0 - beta2_power);
        step = opt.eta * m_hat / (std::sqrt(v_hat) + opt.adam_epsilon);
      } else {
        step = opt.eta * grad[i];
      }
      if (step != 0.0) {
        h[i] -= step;
        w[i] = options.phi.Apply(h[i]);
      }
    }
  }
  result.mean_loss = loss_sum / static_cast<double>(options.tau);
  return result;
}

QuantizedWeights LocalTrain(const Model& model, const ClientState& client,
                            std::span<const double> p,
                            const LocalTrainOptions& options, Levels levels,
                            const ClipBounds& clip, std::size_t round,
                            double* mean_loss) {
  if (client.shard == nullptr || client.shard->size() == 0) {
    throw InvalidArgument("local_train: client " + std::to_string(client.id) +
                          " has an empty shard");
  }
  LocalTrainResult trained = TrainLatent(
      model, *client.shard, InitialClientWeights(p, clip, options.phi), options,
      RandomStream::Derive(client.master_seed, StreamPurpose::kClientBatch,
                           client.id, round));
  if (mean_loss) *mean_loss = trained.mean_loss;
  return StochasticRound(
      trained.weights.normalized, levels,
      RandomStream::Derive(client.master_seed, StreamPurpose::kClientRounding,
                           client.id, round));
}

std::vector<double> FedAvgAggregate(const Matrix& weights) {
  if (weights.rows() == 0) throw InvalidArgument("fedavg: empty update set");
  const std::size_t rows = weights.rows();
  const std::size_t d = weights.cols();
  std::vector<double> mean(d);
  const auto n = static_cast<std::ptrdiff_t>(d);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t m = 0; m < rows; ++m) s += weights(m, i);
    mean[i] = s / static_cast<double>(rows);
  }
  return mean;
}

std::vector<double> FedPaqRoundUpdate(const Matrix& updates,
                                      const RandomStream& stream) {
  if (updates.rows() == 0) throw InvalidArgument("fedpaq: empty update set");
  return FedAvgAggregate(QuantizeRows(updates, stream));
}

nlohmann::json RoundMetrics::ToJson() const {
  auto opt = [](const std::optional<double>& v) -> nlohmann::json {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  nlohmann::json j;
  j["round"] = round;
  j["train_loss"] = opt(train_loss);
  j["test_accuracy"] = opt(test_accuracy);
  j["test_accuracy_quantized"] = opt(test_accuracy_quantized);
  j["uplink_bytes_total"] = uplink_bytes_total;
  j["grad_norm_sq"] = opt(grad_norm_sq);
  j["per_client_CR"] = per_client_cr.empty() ? nlohmann::json(nullptr)
                                             : nlohmann::json(per_client_cr);
  return j;
}

std::pair<Dataset, Dataset> LoadDatasets(const ExperimentConfig& config) {
  const DatasetConfig& dc = config.dataset;
  if (dc.kind == "synthetic") {
    RandomStream rng =
        RandomStream::Derive(config.master_seed, StreamPurpose::kData);
    Dataset all = SyntheticClassification(dc.n_train + dc.n_test, dc.input_dim,
                                          dc.classes, dc.separation, rng);
    std::vector<std::size_t> train_idx(dc.n_train);
    std::vector<std::size_t> test_idx(dc.n_test);
    std::iota(train_idx.begin(), train_idx.end(), std::size_t{0});
    std::iota(test_idx.begin(), test_idx.end(), dc.n_train);
    return {Subset(all, train_idx), Subset(all, test_idx)};
  }
  Dataset train = LoadIdx(dc.train_images, dc.train_labels);
  Dataset test = LoadIdx(dc.test_images, dc.test_labels);
  auto truncate = [](Dataset& d, std::size_t limit) {
    if (limit == 0 || limit >= d.size()) return;
    std::vector<std::size_t> idx(limit);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    d = Subset(d, idx);
  };
  truncate(train, dc.max_train);
  truncate(test, dc.max_test);
  const std::size_t classes = std::max(train.classes, test.classes);
  train.classes = test.classes = classes;
  return {std::move(train), std::move(test)};
}

Federation::Federation(const ExperimentConfig& config) : config_(config) {
  config_.Validate();
  auto [train, test] = LoadDatasets(config_);
  test_ = std::move(test);
  Setup(std::move(train));
}

Federation::Federation(const ExperimentConfig& config, Dataset train,
                       Dataset test)
    : config_(config), test_(std::move(test)) {
  config_.Validate(/*check_files=*/false);
  Setup(std::move(train));
}

void Federation::Setup(Dataset train) {
  const std::uint64_t seed = config_.master_seed;
  if (train.inputs.cols() != test_.inputs.cols()) {
    throw ConfigError("dataset: train and test feature counts differ");
  }
  ModelSpec spec;
  spec.input_dim = train.inputs.cols();
  spec.hidden_dims = config_.model.hidden;
  spec.classes = std::max(train.classes, test_.classes);
  spec.activation = config_.model.activation;
  spec.static_bn = config_.model.static_bn;
  spec.bn_epsilon = config_.model.bn_epsilon;
  model_ =
      Model::Create(spec, RandomStream::Derive(seed, StreamPurpose::kInit, 0));

  RandomStream partition_rng =
      RandomStream::Derive(seed, StreamPurpose::kPartition);
  shards_ = Partition(train,
                      {config_.partition_kind, config_.partition_alpha,
                       config_.clients},
                      partition_rng);

  RandomStream attack_rng = RandomStream::Derive(seed, StreamPurpose::kAttack);
  attack_ = MakeAttackPlan(config_.attack, config_.num_attackers,
                           config_.clients, attack_rng);
  attack_.Validate(config_.clients);
  poisoned_.assign(shards_.size(), DatasetShard{});
  if (attack_.kind == AttackKind::kDataPoison) {
    for (std::size_t id : attack_.attackers) {
      poisoned_[id] = PoisonLabels(shards_[id], spec.classes);
    }
  }

  std::vector<std::size_t> eval_idx(train.size());
  std::iota(eval_idx.begin(), eval_idx.end(), std::size_t{0});
  RandomStream eval_rng = RandomStream::Derive(seed, StreamPurpose::kEval);
  std::shuffle(eval_idx.begin(), eval_idx.end(), eval_rng);
  eval_idx.resize(std::min(eval_idx.size(), kTrainEvalSize));
  std::sort(eval_idx.begin(), eval_idx.end());
  train_eval_ = Subset(train, eval_idx);

  RandomStream init_rng = RandomStream::Derive(seed, StreamPurpose::kInit, 1);
  const LatentWeights h0 = model_.InitLatent(init_rng, config_.model.init_scale);
  const std::vector<double> w0 = Normalize(h0.values, config_.phi);

  server_ = ServerState{};
  server_.aggregator = config_.aggregator;
  if (IsFedVote(config_.aggregator)) {
    server_.soft_vote.resize(w0.size());
    for (std::size_t i = 0; i < w0.size(); ++i) {
      server_.soft_vote[i] = config_.clip.Clip(0.5 * (w0[i] + 1.0));
    }
    if (config_.aggregator == AggregatorKind::kFedVoteOptionII) {
      server_.reputation =
          ReputationState::Initial(config_.clients, config_.reputation_beta);
    }
  } else {
    server_.weights = w0;
  }
}

const DatasetShard& Federation::ShardFor(std::size_t client) const {
  if (attack_.kind == AttackKind::kDataPoison && attack_.IsAttacker(client)) {
    return poisoned_[client];
  }
  return shards_[client];
}

LocalTrainOptions Federation::TrainOptions(const NormalizationFn& phi) const {
  LocalTrainOptions options;
  options.tau = config_.tau;
  options.batch_size = config_.batch_size;
  options.optimizer = config_.optimizer;
  options.phi = phi;
  return options;
}

std::vector<double> Federation::GlobalNormalized() const {
  if (!IsFedVote(server_.aggregator)) return server_.weights;
  std::vector<double> w(server_.soft_vote.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = 2.0 * server_.soft_vote[i] - 1.0;
  }
  return w;
}

std::vector<std::size_t> Federation::SampleParticipants(
    std::size_t round) const {
  const std::size_t clients = config_.clients;
  std::vector<std::size_t> ids(clients);
  std::iota(ids.begin(), ids.end(), std::size_t{0});
  const auto wanted = static_cast<std::size_t>(std::clamp<long long>(
      std::llround(config_.participation * static_cast<double>(clients)), 1,
      static_cast<long long>(clients)));
  if (wanted == clients) return ids;
  RandomStream rng = RandomStream::Derive(
      config_.master_seed, StreamPurpose::kParticipation, round);
  for (std::size_t i = 0; i < wanted; ++i) {
    const std::size_t j = i + rng.UniformInt(clients - i);
    std::swap(ids[i], ids[j]);
  }
  ids.resize(wanted);
  std::sort(ids.begin(), ids.end());
  return ids;
}

void Federation::StepVoting(const std::vector<std::size_t>& participants,
                            RoundMetrics& metrics) {
  const std::size_t round = server_.round;
  const std::uint64_t seed = config_.master_seed;
  const std::size_t d = model_.num_weights();
  const Levels levels = config_.quantizer;
  const LocalTrainOptions options = TrainOptions(config_.phi);

  std::vector<QuantizedWeights> payloads(participants.size());
  ParallelFor(participants.size(), [&](std::size_t j) {
    const std::size_t id = participants[j];
    const bool attacker = attack_.IsAttacker(id);
    if (attacker && attack_.kind == AttackKind::kRandomPerturbation) {
      payloads[j] = RandomPerturbation(
          levels, d,
          RandomStream::Derive(seed, StreamPurpose::kAttack, id + 1, round));
      return;
    }
    if (attacker && attack_.kind == AttackKind::kOmniscientOpposite) return;
    const ClientState client{id, &ShardFor(id), seed};
    payloads[j] = LocalTrain(model_, client, server_.soft_vote, options, levels,
                             config_.clip, round);
    if (attacker && attack_.kind == AttackKind::kInverseSign) {
      payloads[j] = InverseSign(payloads[j]);
    }
  });

  if (attack_.kind == AttackKind::kOmniscientOpposite) {
    std::vector<QuantizedWeights> honest;
    for (std::size_t j = 0; j < participants.size(); ++j) {
      if (!attack_.IsAttacker(participants[j])) honest.push_back(payloads[j]);
    }
    for (std::size_t j = 0; j < participants.size(); ++j) {
      const std::size_t id = participants[j];
      if (!attack_.IsAttacker(id)) continue;
      if (honest.empty()) {
        payloads[j] = RandomPerturbation(
            levels, d,
            RandomStream::Derive(seed, StreamPurpose::kAttack, id + 1, round));
      } else {
        payloads[j] = OmniscientOpposite(Plurality(
            VoteBatch(honest), RandomStream::Derive(
                                   seed, StreamPurpose::kServerTieBreak,
                                   round, 1)));
      }
    }
  }

  for (const QuantizedWeights& q : payloads) {
    metrics.uplink_bytes_total += PackQuantized(q).size();
  }
  const VoteBatch votes(payloads, participants);
  std::vector<double> p;
  if (config_.aggregator == AggregatorKind::kFedVoteOptionI) {
    p = SoftVote(votes);
  } else {
    ReputationState& reputation = *server_.reputation;
    const std::vector<double> lambda = ReputationWeights(reputation);
    p = WeightedSoftVote(votes, lambda);
    const QuantizedWeights decision = Plurality(
        votes,
        RandomStream::Derive(seed, StreamPurpose::kServerTieBreak, round, 0));
    std::vector<double> scores(participants.size());
    for (std::size_t j = 0; j < participants.size(); ++j) {
      scores[j] = CredibilityScore(votes.row(j), decision);
    }
    reputation = UpdateReputation(reputation, scores);
    metrics.per_client_cr = scores;
  }
  for (double& v : p) v = config_.clip.Clip(v);
  server_.soft_vote = std::move(p);
}

void Federation::StepBaseline(const std::vector<std::size_t>& participants,
                              RoundMetrics& metrics) {
  const std::size_t round = server_.round;
  const std::uint64_t seed = config_.master_seed;
  const std::size_t d = model_.num_weights();
  const std::size_t count = participants.size();
  const LocalTrainOptions options = TrainOptions(NormalizationFn::Identity());
  const std::vector<double>& theta = server_.weights;

  std::vector<std::vector<double>> deltas(count);
  ParallelFor(count, [&](std::size_t j) {
    const std::size_t id = participants[j];
    const bool attacker = attack_.IsAttacker(id);
    if (attacker && attack_.SkipsTraining()) return;
    LocalTrainResult trained = TrainLatent(
        model_, ShardFor(id), ClientWeights{theta, theta}, options,
        RandomStream::Derive(seed, StreamPurpose::kClientBatch, id, round));
    std::vector<double> delta(d);
    for (std::size_t i = 0; i < d; ++i) {
      delta[i] = theta[i] - trained.weights.normalized[i];
    }
    if (attacker && attack_.kind == AttackKind::kInverseSign) {
      delta = InverseSign(delta);
    }
    deltas[j] = std::move(delta);
  });

  std::vector<std::vector<double>> honest;
  for (std::size_t j = 0; j < count; ++j) {
    if (!attack_.IsAttacker(participants[j])) honest.push_back(deltas[j]);
  }
  const bool sign_sgd = config_.aggregator == AggregatorKind::kSignSgd;
  const RandomStream tie =
      RandomStream::Derive(seed, StreamPurpose::kServerTieBreak, round, 0);

  if (attack_.SkipsTraining()) {
    std::optional<PayloadStats> stats;
    if (!honest.empty()) stats = PayloadStats::Of(honest);
    std::vector<double> honest_mean(d, 0.0);
    if (!honest.empty()) honest_mean = FedAvgAggregate(RowsToMatrix(honest, d));
    for (std::size_t j = 0; j < count; ++j) {
      const std::size_t id = participants[j];
      if (!attack_.IsAttacker(id)) continue;
      RandomStream stream =
          RandomStream::Derive(seed, StreamPurpose::kAttack, id + 1, round);
      if (attack_.kind == AttackKind::kRandomPerturbation) {
        deltas[j] = RandomPerturbation(d, stats, stream);
      } else {
        deltas[j] = InverseSign(honest_mean);
      }
    }
  }

  std::vector<double> update;
  if (sign_sgd) {
    std::vector<QuantizedWeights> signs(count);
    for (std::size_t j = 0; j < count; ++j) {
      const std::size_t id = participants[j];
      const bool attacker = attack_.IsAttacker(id);
      if (attacker && attack_.kind == AttackKind::kRandomPerturbation) {
        signs[j] = RandomPerturbation(
            Levels::kBinary, d,
            RandomStream::Derive(seed, StreamPurpose::kAttack, id + 1, round));
      } else {
        signs[j] = SignsOf(deltas[j]);
      }
    }
    if (attack_.kind == AttackKind::kOmniscientOpposite) {
      std::vector<QuantizedWeights> honest_signs;
      for (const auto& h : honest) honest_signs.push_back(SignsOf(h));
      if (!honest_signs.empty()) {
        const QuantizedWeights opposite = OmniscientOpposite(
            SignSgdMajority(VoteBatch(honest_signs), tie.Split(1)));
        for (std::size_t j = 0; j < count; ++j) {
          if (attack_.IsAttacker(participants[j])) signs[j] = opposite;
        }
      }
    }
    for (const auto& s : signs) metrics.uplink_bytes_total += PackQuantized(s).size();
    const QuantizedWeights majority =
        SignSgdMajority(VoteBatch(signs, participants), tie);
    update.resize(d);
    for (std::size_t i = 0; i < d; ++i) {
      update[i] = config_.optimizer.server_eta * majority.values[i];
    }
  } else {
    const Matrix delta_matrix = RowsToMatrix(deltas, d);
    switch (config_.aggregator) {
      case AggregatorKind::kFedPaq: {
        const Matrix quantized = QuantizeRows(
            delta_matrix,
            RandomStream::Derive(seed, StreamPurpose::kBaselineQuantizer,
                                 round));
        for (std::size_t j = 0; j < count; ++j) {
          metrics.uplink_bytes_total += PackQsgd(quantized.row(j)).size();
        }
        update = FedAvgAggregate(quantized);
        break;
      }
      case AggregatorKind::kCoordMedian:
        update = CoordinateMedian(delta_matrix);
        break;
      case AggregatorKind::kKrum: {
        const std::size_t pick = KrumSelect(
            delta_matrix, std::min(config_.num_attackers, count - 3));
        update.assign(delta_matrix.row(pick).begin(),
                      delta_matrix.row(pick).end());
        break;
      }
      default:
        update = FedAvgAggregate(delta_matrix);
        break;
    }
    if (config_.aggregator != AggregatorKind::kFedPaq) {
      for (const auto& delta : deltas) {
        metrics.uplink_bytes_total += PackDense(delta).size();
      }
    }
  }
  for (std::size_t i = 0; i < d; ++i) server_.weights[i] -= update[i];
}

Federation::Evaluation Federation::Evaluate(std::size_t round) const {
  Evaluation e;
  const std::vector<double> w = GlobalNormalized();
  const LossAndGrad lg =
      LossAndGradNormalized(model_, w, train_eval_.AsBatch());
  e.train_loss = lg.loss;
  e.grad_norm_sq = 0.0;
  for (double g : lg.grad) e.grad_norm_sq += g * g;
  const Batch test = test_.AsBatch();
  e.test_accuracy = Accuracy(Forward(model_, w, test), test.labels);
  if (IsFedVote(server_.aggregator)) {
    const QuantizedWeights q =
        config_.eval_quantized == QuantizedEval::kStochastic
            ? StochasticRound(w, config_.quantizer,
                              RandomStream::Derive(config_.eval_seed,
                                                   StreamPurpose::kEval, round))
            : ThresholdRound(w, config_.quantizer);
    e.test_accuracy_quantized =
        Accuracy(Forward(model_, ToDouble(q), test), test.labels);
  }
  return e;
}

RoundMetrics Federation::Step() {
  const std::size_t round = server_.round;
  const std::vector<std::size_t> participants = SampleParticipants(round);
  RoundMetrics metrics;
  metrics.round = round;
  if (IsFedVote(server_.aggregator)) {
    StepVoting(participants, metrics);
  } else {
    StepBaseline(participants, metrics);
  }
  server_.round = round + 1;
  const bool last = server_.round == config_.rounds;
  if (last || server_.round % config_.eval_every == 0) {
    const Evaluation e = Evaluate(round);
    metrics.train_loss = e.train_loss;
    metrics.grad_norm_sq = e.grad_norm_sq;
    metrics.test_accuracy = OptionalOf(e.test_accuracy);
    metrics.test_accuracy_quantized = e.test_accuracy_quantized;
  }
  return metrics;
}

std::vector<RoundMetrics> Federation::Run(
    const std::function<void(const RoundMetrics&)>& sink) {
  std::vector<RoundMetrics> series;
  while (server_.round < config_.rounds) {
    series.push_back(Step());
    if (sink) sink(series.back());
  }
  return series;
}

std::vector<RoundMetrics> RunExperiment(
    const ExperimentConfig& config,
    const std::function<void(const RoundMetrics&)>& sink) {
  Federation federation(config);
  return federation.Run(sink);
}

}  // namespace fedvote
