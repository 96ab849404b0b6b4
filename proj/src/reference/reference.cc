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

#include "fedvote/reference.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fedvote::reference {

QuantizedWeights StochasticRoundBinary(std::span<const double> normalized,
                                       const RandomStream& stream) {
  QuantizedWeights out{Levels::kBinary, {}};
  for (std::size_t i = 0; i < normalized.size(); ++i) {
    const double prob_plus = (normalized[i] + 1.0) / 2.0;
    out.values.push_back(stream.UniformAt(i) < prob_plus ? 1 : -1);
  }
  return out;
}

QuantizedWeights StochasticRoundTernary(std::span<const double> normalized,
                                        const RandomStream& stream) {
  QuantizedWeights out{Levels::kTernary, {}};
  for (std::size_t i = 0; i < normalized.size(); ++i) {
    const double w = normalized[i];
    const double u = stream.UniformAt(i);
    std::int8_t v = 0;
    if (w > 0.0 && u < w) v = 1;
    if (w < 0.0 && u < -w) v = -1;
    out.values.push_back(v);
  }
  return out;
}

std::vector<double> QsgdQuantize(std::span<const double> x,
                                 const RandomStream& stream) {
  double sq = 0.0;
  for (double v : x) sq += v * v;
  const double norm = std::sqrt(sq);
  std::vector<double> out(x.size(), 0.0);
  if (norm == 0.0) return out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (stream.UniformAt(i) < std::abs(x[i]) / norm) {
      out[i] = x[i] > 0.0 ? norm : -norm;
    }
  }
  return out;
}

QuantizedWeights Plurality(const VoteBatch& votes,
                           const RandomStream& tie_break) {
  QuantizedWeights out{votes.levels(), {}};
  for (std::size_t i = 0; i < votes.dim(); ++i) {
    std::size_t count[3] = {0, 0, 0};
    for (std::size_t m = 0; m < votes.clients(); ++m) {
      ++count[votes.at(m, i) + 1];
    }
    std::vector<std::int8_t> tied;
    const std::size_t best = std::max({count[0], count[1], count[2]});
    for (int level = 0; level < 3; ++level) {
      if (count[level] == best) tied.push_back(std::int8_t(level - 1));
    }
    if (votes.levels() == Levels::kBinary) {
      // Ternary slot for 0 is always empty here, so `tied` is {-1, +1} on a
      // tie; map to the binary tie rule.
      if (tied.size() == 1) {
        out.values.push_back(tied[0]);
      } else {
        out.values.push_back(tie_break.UniformAt(i) < 0.5 ? 1 : -1);
      }
    } else {
      const auto pick = static_cast<std::size_t>(
          tie_break.UniformAt(i) * static_cast<double>(tied.size()));
      out.values.push_back(tied.size() == 1 ? tied[0] : tied[pick]);
    }
  }
  return out;
}

std::vector<double> SoftVote(const VoteBatch& votes) {
  std::vector<double> p;
  for (std::size_t i = 0; i < votes.dim(); ++i) {
    std::size_t numerator = 0;
    for (std::size_t m = 0; m < votes.clients(); ++m) {
      const int v = votes.at(m, i);
      numerator += votes.levels() == Levels::kBinary ? (v == 1)
                                                     : std::size_t(v + 1);
    }
    const double denom = votes.levels() == Levels::kBinary
                             ? double(votes.clients())
                             : 2.0 * double(votes.clients());
    p.push_back(double(numerator) / denom);
  }
  return p;
}

std::vector<double> WeightedSoftVote(const VoteBatch& votes,
                                     std::span<const double> weights) {
  bool uniform = true;
  for (double w : weights) uniform = uniform && w == weights.front();
  if (uniform) return reference::SoftVote(votes);
  std::vector<double> p;
  for (std::size_t i = 0; i < votes.dim(); ++i) {
    double acc = 0.0;
    for (std::size_t m = 0; m < votes.clients(); ++m) {
      if (votes.at(m, i) == 1) acc += weights[m];
      if (votes.at(m, i) == 0) acc += 0.5 * weights[m];
    }
    p.push_back(std::min(1.0, acc));
  }
  return p;
}

std::vector<double> CoordinateMedian(const Matrix& updates) {
  std::vector<double> out;
  for (std::size_t i = 0; i < updates.cols(); ++i) {
    std::vector<double> column;
    for (std::size_t m = 0; m < updates.rows(); ++m) {
      column.push_back(updates(m, i));
    }
    std::sort(column.begin(), column.end());
    const std::size_t n = column.size();
    out.push_back(n % 2 ? column[n / 2]
                        : 0.5 * (column[n / 2 - 1] + column[n / 2]));
  }
  return out;
}

std::size_t KrumSelect(const Matrix& updates, std::size_t attackers) {
  const std::size_t clients = updates.rows();
  const std::size_t neighbours = clients - attackers - 2;
  std::size_t best = 0;
  double best_score = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < clients; ++a) {
    std::vector<double> dists;
    for (std::size_t b = 0; b < clients; ++b) {
      if (a == b) continue;
      double s = 0.0;
      for (std::size_t i = 0; i < updates.cols(); ++i) {
        const double diff = updates(a, i) - updates(b, i);
        s += diff * diff;
      }
      dists.push_back(s);
    }
    std::sort(dists.begin(), dists.end());
    double score = 0.0;
    for (std::size_t k = 0; k < neighbours; ++k) score += dists[k];
    if (score < best_score) {
      best_score = score;
      best = a;
    }
  }
  return best;
}

}  // namespace fedvote::reference
