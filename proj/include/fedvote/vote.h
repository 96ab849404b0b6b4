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

#ifndef FEDVOTE_VOTE_H_
#define FEDVOTE_VOTE_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fedvote/matrix.h"
#include "fedvote/quantize.h"
#include "fedvote/rng.h"

namespace fedvote {

// M x d matrix of quantized votes, one row per client. Immutable once built.
class VoteBatch {
 public:
  VoteBatch(const std::vector<QuantizedWeights>& rows,
            std::vector<std::size_t> client_ids);
  explicit VoteBatch(const std::vector<QuantizedWeights>& rows);

  std::size_t clients() const { return clients_; }
  std::size_t dim() const { return dim_; }
  Levels levels() const { return levels_; }
  const std::vector<std::size_t>& client_ids() const { return client_ids_; }

  std::span<const std::int8_t> row(std::size_t m) const {
    return {votes_.data() + m * dim_, dim_};
  }
  std::int8_t at(std::size_t m, std::size_t i) const {
    return votes_[m * dim_ + i];
  }
  const std::vector<std::int8_t>& data() const { return votes_; }

 private:
  std::size_t clients_ = 0;
  std::size_t dim_ = 0;
  Levels levels_ = Levels::kBinary;
  std::vector<std::int8_t> votes_;
  std::vector<std::size_t> client_ids_;
};

// Per-coordinate most-voted level; ties broken uniformly at random using
// draw i of `tie_break` for coordinate i.
QuantizedWeights Plurality(const VoteBatch& votes,
                           const RandomStream& tie_break);

// Same rule applied to gradient signs (signSGD with majority vote).
QuantizedWeights SignSgdMajority(const VoteBatch& grad_signs,
                                 const RandomStream& tie_break);

// Fraction of +1 votes per coordinate. For ternary votes a 0 counts as half a
// +1 vote, so 2p - 1 is always the mean vote.
std::vector<double> SoftVote(const VoteBatch& votes);

// Reputation-weighted soft vote. Weights must be non-negative and sum to 1
// within 1e-9. Uniform weights reproduce SoftVote exactly.
std::vector<double> WeightedSoftVote(const VoteBatch& votes,
                                     std::span<const double> weights);

// Fraction of coordinates where the client agrees with the global decision.
double CredibilityScore(std::span<const std::int8_t> client_votes,
                        const QuantizedWeights& global);

struct ReputationState {
  std::vector<double> credibility;  // EMA per client, in [0, 1]
  double beta = 0.5;

  // Uniform credibility 1/M for every client, i.e. uniform voting weights.
  static ReputationState Initial(std::size_t clients, double beta);
};

// nu <- beta * nu + (1 - beta) * score, elementwise.
ReputationState UpdateReputation(const ReputationState& state,
                                 std::span<const double> scores);

// lambda_m = nu_m / sum(nu). Throws DegenerateState when sum(nu) == 0.
std::vector<double> ReputationWeights(const ReputationState& state);

// [2 s exp(1 - 2 s)]^(M / 2), the majority-vote error bound for mean
// per-voter error s < 1/2.
double OneShotErrorBound(double s, std::size_t voters);

// Robust real-valued aggregators. Rows are clients.
std::vector<double> CoordinateMedian(const Matrix& updates);
std::vector<double> KrumScores(const Matrix& updates, std::size_t attackers);
std::size_t KrumSelect(const Matrix& updates, std::size_t attackers);

}  // namespace fedvote

#endif  // FEDVOTE_VOTE_H_
