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

#include "fedvote/adversary.h"

#include <cmath>
#include <numeric>
#include <random>

#include "fedvote/errors.h"

namespace fedvote {

std::string ToString(AttackKind kind) {
  switch (kind) {
    case AttackKind::kNone:
      return "none";
    case AttackKind::kInverseSign:
      return "inverse_sign";
    case AttackKind::kDataPoison:
      return "data_poison";
    case AttackKind::kRandomPerturbation:
      return "random_perturbation";
    case AttackKind::kOmniscientOpposite:
      return "omniscient_opposite";
  }
  return "?";
}

AttackKind ParseAttackKind(const std::string& name) {
  for (AttackKind k :
       {AttackKind::kNone, AttackKind::kInverseSign, AttackKind::kDataPoison,
        AttackKind::kRandomPerturbation, AttackKind::kOmniscientOpposite}) {
    if (ToString(k) == name) return k;
  }
  throw InvalidArgument("unknown attack kind '" + name + "'");
}

void AttackPlan::Validate(std::size_t clients) const {
  std::vector<std::string> problems;
  for (std::size_t id : attackers) {
    if (id >= clients) {
      problems.push_back("attack: attacker id " + std::to_string(id) +
                         " outside [0, " + std::to_string(clients) + ")");
    }
  }
  if (!attackers.empty() && attackers.size() >= clients) {
    problems.push_back("attack: attackers must be fewer than clients");
  }
  if (!problems.empty()) throw ConfigError(problems);
}

AttackPlan MakeAttackPlan(AttackKind kind, std::size_t count,
                          std::size_t clients, RandomStream& rng) {
  if (count >= clients && count > 0) {
    throw ConfigError("attack: num_attackers must be < M");
  }
  std::vector<std::size_t> ids(clients);
  std::iota(ids.begin(), ids.end(), std::size_t{0});
  // Partial Fisher-Yates.
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + rng.UniformInt(clients - i);
    std::swap(ids[i], ids[j]);
  }
  AttackPlan plan;
  plan.kind = kind;
  plan.attackers.insert(ids.begin(), ids.begin() + static_cast<long>(count));
  return plan;
}

QuantizedWeights InverseSign(const QuantizedWeights& payload) {
  QuantizedWeights out = payload;
  for (auto& v : out.values) v = static_cast<std::int8_t>(-v);
  return out;
}

std::vector<double> InverseSign(std::span<const double> payload) {
  std::vector<double> out(payload.size());
  for (std::size_t i = 0; i < payload.size(); ++i) out[i] = -payload[i];
  return out;
}

DatasetShard PoisonLabels(const DatasetShard& shard, std::size_t classes) {
  if (classes < 2) throw InvalidArgument("poison: need at least 2 classes");
  DatasetShard out = shard;
  for (int& y : out.labels) y = static_cast<int>(classes) - 1 - y;
  return out;
}

QuantizedWeights RandomPerturbation(Levels levels, std::size_t dim,
                                    const RandomStream& stream) {
  QuantizedWeights out{levels, std::vector<std::int8_t>(dim)};
  for (std::size_t i = 0; i < dim; ++i) {
    const double u = stream.UniformAt(i);
    if (levels == Levels::kBinary) {
      out.values[i] = u < 0.5 ? 1 : -1;
    } else {
      out.values[i] = static_cast<std::int8_t>(static_cast<int>(u * 3.0) - 1);
    }
  }
  return out;
}

PayloadStats PayloadStats::Of(std::span<const std::vector<double>> payloads) {
  double sum = 0.0;
  double count = 0.0;
  for (const auto& p : payloads) {
    for (double v : p) sum += v;
    count += static_cast<double>(p.size());
  }
  PayloadStats stats;
  if (count == 0.0) return stats;
  stats.mean = sum / count;
  double sq = 0.0;
  for (const auto& p : payloads) {
    for (double v : p) sq += (v - stats.mean) * (v - stats.mean);
  }
  stats.stddev = std::sqrt(sq / count);
  return stats;
}

std::vector<double> RandomPerturbation(std::size_t dim,
                                       const std::optional<PayloadStats>& stats,
                                       RandomStream& stream) {
  if (!stats) {
    throw ConfigError(
        "attack: gaussian random perturbation needs honest payload statistics");
  }
  std::normal_distribution<double> gauss(stats->mean, stats->stddev);
  std::vector<double> out(dim);
  if (stats->stddev == 0.0) {
    std::fill(out.begin(), out.end(), stats->mean);
    return out;
  }
  for (double& v : out) v = gauss(stream);
  return out;
}

QuantizedWeights OmniscientOpposite(const QuantizedWeights& honest_plurality) {
  return InverseSign(honest_plurality);
}

}  // namespace fedvote
