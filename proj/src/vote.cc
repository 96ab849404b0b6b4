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

#include "fedvote/vote.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fedvote/errors.h"

namespace fedvote {

VoteBatch::VoteBatch(const std::vector<QuantizedWeights>& rows,
                     std::vector<std::size_t> client_ids)
    : client_ids_(std::move(client_ids)) {
  if (rows.empty()) throw InvalidArgument("vote: empty batch");
  if (client_ids_.size() != rows.size()) {
    throw InvalidArgument("vote: client id count differs from vote count");
  }
  clients_ = rows.size();
  dim_ = rows.front().dim();
  levels_ = rows.front().levels;
  votes_.reserve(clients_ * dim_);
  for (const QuantizedWeights& r : rows) {
    if (r.dim() != dim_ || r.levels != levels_) {
      throw InvalidArgument("vote: rows differ in length or level set");
    }
    votes_.insert(votes_.end(), r.values.begin(), r.values.end());
  }
}

VoteBatch::VoteBatch(const std::vector<QuantizedWeights>& rows)
    : VoteBatch(rows, [&] {
        std::vector<std::size_t> ids(rows.size());
        std::iota(ids.begin(), ids.end(), std::size_t{0});
        return ids;
      }()) {}

QuantizedWeights Plurality(const VoteBatch& votes,
                           const RandomStream& tie_break) {
  const std::size_t d = votes.dim();
  const std::size_t clients = votes.clients();
  const std::int8_t* data = votes.data().data();
  QuantizedWeights out{votes.levels(), std::vector<std::int8_t>(d)};
  const auto n = static_cast<std::ptrdiff_t>(d);
  if (votes.levels() == Levels::kBinary) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      long sum = 0;
      for (std::size_t m = 0; m < clients; ++m) sum += data[m * d + i];
      if (sum != 0) {
        out.values[i] = sum > 0 ? 1 : -1;
      } else {
        out.values[i] =
            tie_break.UniformAt(static_cast<std::uint64_t>(i)) < 0.5 ? 1 : -1;
      }
    }
  } else {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      std::size_t count[3] = {0, 0, 0};  // -1, 0, +1
      for (std::size_t m = 0; m < clients; ++m) ++count[data[m * d + i] + 1];
      const std::size_t best = std::max({count[0], count[1], count[2]});
      std::int8_t tied[3] = {0, 0, 0};
      std::size_t num_tied = 0;
      for (int level = 0; level < 3; ++level) {
        if (count[level] == best) tied[num_tied++] = std::int8_t(level - 1);
      }
      std::size_t pick = 0;
      if (num_tied > 1) {
        pick = static_cast<std::size_t>(
            tie_break.UniformAt(static_cast<std::uint64_t>(i)) *
            static_cast<double>(num_tied));
      }
      out.values[i] = tied[pick];
    }
  }
  return out;
}

QuantizedWeights SignSgdMajority(const VoteBatch& grad_signs,
                                 const RandomStream& tie_break) {
  if (grad_signs.levels() != Levels::kBinary) {
    throw InvalidArgument("signsgd: gradient signs must be binary");
  }
  return Plurality(grad_signs, tie_break);
}

std::vector<double> SoftVote(const VoteBatch& votes) {
  const std::size_t d = votes.dim();
  const std::size_t clients = votes.clients();
  const std::int8_t* data = votes.data().data();
  const double denom = static_cast<double>(clients);
  std::vector<double> p(d);
  const auto n = static_cast<std::ptrdiff_t>(d);
  if (votes.levels() == Levels::kBinary) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      std::size_t plus = 0;
      for (std::size_t m = 0; m < clients; ++m) plus += data[m * d + i] == 1;
      p[i] = static_cast<double>(plus) / denom;
    }
  } else {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      std::size_t half_votes = 0;  // two per +1, one per 0
      for (std::size_t m = 0; m < clients; ++m) {
        half_votes += static_cast<std::size_t>(data[m * d + i] + 1);
      }
      p[i] = static_cast<double>(half_votes) / (2.0 * denom);
    }
  }
  return p;
}

std::vector<double> WeightedSoftVote(const VoteBatch& votes,
                                     std::span<const double> weights) {
  if (weights.size() != votes.clients()) {
    throw InvalidArgument("weighted_soft_vote: need one weight per client");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) {
      throw InvalidArgument("weighted_soft_vote: negative weight");
    }
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw InvalidArgument("weighted_soft_vote: weights sum to " +
                          std::to_string(total) + ", expected 1");
  }
  if (std::all_of(weights.begin(), weights.end(),
                  [&](double w) { return w == weights.front(); })) {
    return SoftVote(votes);
  }
  const std::size_t d = votes.dim();
  const std::size_t clients = votes.clients();
  const std::int8_t* data = votes.data().data();
  std::vector<double> p(d);
  const auto n = static_cast<std::ptrdiff_t>(d);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t m = 0; m < clients; ++m) {
      const std::int8_t v = data[m * d + i];
      if (v == 1) {
        acc += weights[m];
      } else if (v == 0) {
        acc += 0.5 * weights[m];
      }
    }
    p[i] = std::min(1.0, acc);
  }
  return p;
}

double CredibilityScore(std::span<const std::int8_t> client_votes,
                        const QuantizedWeights& global) {
  if (client_votes.size() != global.dim()) {
    throw InvalidArgument("credibility: length mismatch");
  }
  if (client_votes.empty()) return 1.0;
  std::size_t agree = 0;
  for (std::size_t i = 0; i < client_votes.size(); ++i) {
    agree += client_votes[i] == global.values[i];
  }
  return static_cast<double>(agree) / static_cast<double>(client_votes.size());
}

ReputationState ReputationState::Initial(std::size_t clients, double beta) {
  if (!(beta > 0.0 && beta < 1.0)) {
    throw InvalidArgument("reputation: beta must lie in (0, 1)");
  }
  return {std::vector<double>(clients, 1.0 / static_cast<double>(clients)), beta};
}

ReputationState UpdateReputation(const ReputationState& state,
                                 std::span<const double> scores) {
  if (scores.size() != state.credibility.size()) {
    throw InvalidArgument("reputation: one score per client required");
  }
  ReputationState next = state;
  for (std::size_t m = 0; m < scores.size(); ++m) {
    if (!(scores[m] >= 0.0 && scores[m] <= 1.0)) {
      throw InvalidArgument("reputation: score outside [0,1]");
    }
    const double v = state.beta * state.credibility[m] +
                     (1.0 - state.beta) * scores[m];
    next.credibility[m] = std::clamp(v, 0.0, 1.0);
  }
  return next;
}

std::vector<double> ReputationWeights(const ReputationState& state) {
  double total = 0.0;
  for (double v : state.credibility) total += v;
  if (!(total > 0.0)) {
    throw DegenerateState("reputation: all credibility scores are zero");
  }
  std::vector<double> weights(state.credibility.size());
  for (std::size_t m = 0; m < weights.size(); ++m) {
    weights[m] = state.credibility[m] / total;
  }
  return weights;
}

double OneShotErrorBound(double s, std::size_t voters) {
  if (!(s > 0.0 && s < 0.5)) {
    throw DomainError("one_shot_error_bound: s must lie in (0, 0.5)");
  }
  if (voters == 0) throw InvalidArgument("one_shot_error_bound: M >= 1");
  const double base = 2.0 * s * std::exp(1.0 - 2.0 * s);
  return std::pow(base, 0.5 * static_cast<double>(voters));
}

std::vector<double> CoordinateMedian(const Matrix& updates) {
  if (updates.rows() == 0) throw InvalidArgument("median: empty update set");
  const std::size_t clients = updates.rows();
  const std::size_t d = updates.cols();
  std::vector<double> out(d);
  const auto n = static_cast<std::ptrdiff_t>(d);
#pragma omp parallel
  {
    std::vector<double> column(clients);
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      for (std::size_t m = 0; m < clients; ++m) column[m] = updates(m, i);
      const std::size_t mid = clients / 2;
      std::nth_element(column.begin(), column.begin() + mid, column.end());
      const double upper = column[mid];
      if (clients % 2 == 1) {
        out[i] = upper;
      } else {
        const double lower =
            *std::max_element(column.begin(), column.begin() + mid);
        out[i] = 0.5 * (lower + upper);
      }
    }
  }
  return out;
}

std::vector<double> KrumScores(const Matrix& updates, std::size_t attackers) {
  const std::size_t clients = updates.rows();
  if (clients < attackers + 3) {
    throw InvalidArgument("krum: need M >= f + 3 (M=" +
                          std::to_string(clients) +
                          ", f=" + std::to_string(attackers) + ")");
  }
  Matrix dist(clients, clients);
  const auto n = static_cast<std::ptrdiff_t>(clients);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t a = 0; a < n; ++a) {
    const auto ra = updates.row(a);
    for (std::size_t b = static_cast<std::size_t>(a) + 1; b < clients; ++b) {
      const auto rb = updates.row(b);
      double s = 0.0;
      for (std::size_t i = 0; i < ra.size(); ++i) {
        const double diff = ra[i] - rb[i];
        s += diff * diff;
      }
      dist(a, b) = s;
      dist(b, a) = s;
    }
  }
  const std::size_t neighbours = clients - attackers - 2;
  std::vector<double> scores(clients);
#pragma omp parallel
  {
    std::vector<double> others;
    others.reserve(clients);
#pragma omp for schedule(static)
    for (std::ptrdiff_t a = 0; a < n; ++a) {
      others.clear();
      for (std::size_t b = 0; b < clients; ++b) {
        if (b != static_cast<std::size_t>(a)) others.push_back(dist(a, b));
      }
      std::partial_sort(others.begin(), others.begin() + neighbours,
                        others.end());
      double s = 0.0;
      for (std::size_t k = 0; k < neighbours; ++k) s += others[k];
      scores[a] = s;
    }
  }
  return scores;
}

std::size_t KrumSelect(const Matrix& updates, std::size_t attackers) {
  const std::vector<double> scores = KrumScores(updates, attackers);
  return static_cast<std::size_t>(
      std::min_element(scores.begin(), scores.end()) - scores.begin());
}

}  // namespace fedvote
