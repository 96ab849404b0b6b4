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

#ifndef FEDVOTE_ADVERSARY_H_
#define FEDVOTE_ADVERSARY_H_

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "fedvote/data.h"
#include "fedvote/quantize.h"
#include "fedvote/rng.h"

namespace fedvote {

enum class AttackKind {
  kNone,
  kInverseSign,
  kDataPoison,
  kRandomPerturbation,
  kOmniscientOpposite,
};

std::string ToString(AttackKind kind);
AttackKind ParseAttackKind(const std::string& name);

struct AttackPlan {
  AttackKind kind = AttackKind::kNone;
  std::set<std::size_t> attackers;

  bool IsAttacker(std::size_t client) const {
    return kind != AttackKind::kNone && attackers.count(client) > 0;
  }
  // True when attacker payloads replace local training entirely.
  bool SkipsTraining() const {
    return kind == AttackKind::kRandomPerturbation ||
           kind == AttackKind::kOmniscientOpposite;
  }
  // Throws ConfigError unless attackers is a strict subset of [0, clients).
  void Validate(std::size_t clients) const;
};

// Picks `count` distinct attacker ids uniformly from [0, clients).
AttackPlan MakeAttackPlan(AttackKind kind, std::size_t count,
                          std::size_t clients, RandomStream& rng);

QuantizedWeights InverseSign(const QuantizedWeights& payload);
std::vector<double> InverseSign(std::span<const double> payload);

// y -> C - 1 - y on every example; inputs untouched.
DatasetShard PoisonLabels(const DatasetShard& shard, std::size_t classes);

// Uniform over the level set, independent of any honest payload.
QuantizedWeights RandomPerturbation(Levels levels, std::size_t dim,
                                    const RandomStream& stream);

// Moments of the honest real-valued payloads in a round.
struct PayloadStats {
  double mean = 0.0;
  double stddev = 0.0;

  static PayloadStats Of(std::span<const std::vector<double>> payloads);
};

// Gaussian payload matching honest statistics. Missing stats -> ConfigError.
std::vector<double> RandomPerturbation(std::size_t dim,
                                       const std::optional<PayloadStats>& stats,
                                       RandomStream& stream);

QuantizedWeights OmniscientOpposite(const QuantizedWeights& honest_plurality);

}  // namespace fedvote

#endif  // FEDVOTE_ADVERSARY_H_
