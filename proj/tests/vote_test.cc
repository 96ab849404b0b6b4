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
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "fedvote/errors.h"
#include "fedvote/reference.h"

namespace fedvote {
namespace {

// Votes given column-wise: columns[i][m] is client m's vote on coordinate i.
VoteBatch FromColumns(const std::vector<std::vector<int>>& columns,
                      Levels levels = Levels::kBinary) {
  const std::size_t clients = columns.front().size();
  std::vector<QuantizedWeights> rows(clients);
  for (std::size_t m = 0; m < clients; ++m) {
    rows[m].levels = levels;
    for (const auto& col : columns) rows[m].values.push_back(std::int8_t(col[m]));
  }
  return VoteBatch(rows);
}

VoteBatch RandomBinaryBatch(std::size_t clients, std::size_t dim,
                            RandomStream& rng) {
  std::vector<QuantizedWeights> rows(clients);
  for (auto& r : rows) {
    r.levels = Levels::kBinary;
    for (std::size_t i = 0; i < dim; ++i) r.values.push_back(rng.Uniform() < 0.5 ? 1 : -1);
  }
  return VoteBatch(rows);
}

TEST(PluralityTest, StrictMajority) {
  const auto out = Plurality(FromColumns({{1, 1, -1}}), RandomStream(1));
  EXPECT_EQ(out.values[0], 1);
}

TEST(PluralityTest, TieIsFairCoin) {
  const std::size_t trials = 10000;
  std::vector<std::vector<int>> columns(trials, {1, -1});
  const auto out = Plurality(FromColumns(columns), RandomStream(2));
  const double plus = std::count(out.values.begin(), out.values.end(), 1);
  EXPECT_NEAR(plus / trials, 0.5, 0.02);
}

TEST(PluralityTest, SingleVoterWins) {
  const auto out = Plurality(FromColumns({{1}, {-1}, {-1}}), RandomStream(3));
  EXPECT_EQ(out.values, (std::vector<std::int8_t>{1, -1, -1}));
}

TEST(PluralityTest, TernaryArgmaxAndLevelSet) {
  const auto out = Plurality(
      FromColumns({{0, 0, 1}, {-1, -1, 0}, {1, 1, 1}}, Levels::kTernary),
      RandomStream(4));
  EXPECT_EQ(out.levels, Levels::kTernary);
  EXPECT_EQ(out.values, (std::vector<std::int8_t>{0, -1, 1}));
}

TEST(PluralityTest, TernaryThreeWayTieIsUniform) {
  const std::size_t trials = 30000;
  std::vector<std::vector<int>> columns(trials, {-1, 0, 1});
  const auto out = Plurality(FromColumns(columns, Levels::kTernary), RandomStream(5));
  for (int level : {-1, 0, 1}) {
    const double f = std::count(out.values.begin(), out.values.end(), level);
    EXPECT_NEAR(f / trials, 1.0 / 3.0, 4 * std::sqrt(2.0 / 9.0 / trials));
  }
}

TEST(PluralityTest, EmptyBatchRejected) {
  EXPECT_THROW(VoteBatch(std::vector<QuantizedWeights>{}), InvalidArgument);
}

TEST(PluralityTest, MajorityFlipsIffAttackersExceedHalf) {
  for (std::size_t clients : {5u, 6u, 9u}) {
    for (std::size_t attackers = 0; attackers < clients; ++attackers) {
      std::vector<int> col(clients, 1);
      for (std::size_t a = 0; a < attackers; ++a) col[a] = -1;
      if (2 * attackers == clients) continue;  // tie
      const auto out = Plurality(FromColumns({col}), RandomStream(6));
      EXPECT_EQ(out.values[0], 2 * attackers > clients ? -1 : 1);
    }
  }
}

TEST(SignSgdMajorityTest, SameExamplesAsPlurality) {
  EXPECT_EQ(SignSgdMajority(FromColumns({{1, 1, -1}}), RandomStream(1)).values[0], 1);
  EXPECT_EQ(SignSgdMajority(FromColumns({{-1}}), RandomStream(1)).values[0], -1);
  const std::size_t trials = 10000;
  std::vector<std::vector<int>> columns(trials, {1, -1});
  const auto out = SignSgdMajority(FromColumns(columns), RandomStream(2));
  const double plus = std::count(out.values.begin(), out.values.end(), 1);
  EXPECT_NEAR(plus / trials, 0.5, 0.02);
}

TEST(SoftVoteTest, Examples) {
  const auto p = SoftVote(FromColumns({{1, 1, -1}, {-1, -1, -1}, {1, 1, 1}}));
  EXPECT_DOUBLE_EQ(p[0], 2.0 / 3.0);
  EXPECT_EQ(p[1], 0.0);
  EXPECT_EQ(p[2], 1.0);
}

TEST(SoftVoteTest, AgreesWithPluralityOffTies) {
  RandomStream rng(7);
  const VoteBatch votes = RandomBinaryBatch(6, 500, rng);
  const auto p = SoftVote(votes);
  const auto plural = Plurality(votes, RandomStream(8));
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.5) continue;
    EXPECT_EQ(plural.values[i], p[i] > 0.5 ? 1 : -1);
  }
}

TEST(WeightedSoftVoteTest, Examples) {
  const VoteBatch a = FromColumns({{1, -1, -1}});
  const std::vector<double> dictator = {1.0, 0.0, 0.0};
  EXPECT_EQ(WeightedSoftVote(a, dictator)[0], 1.0);
  const VoteBatch b = FromColumns({{1, -1, 1}});
  const std::vector<double> half = {0.5, 0.5, 0.0};
  EXPECT_EQ(WeightedSoftVote(b, half)[0], 0.5);
}

TEST(WeightedSoftVoteTest, UniformIsBitExact) {
  RandomStream rng(9);
  for (std::size_t clients : {3u, 7u, 31u}) {
    const VoteBatch votes = RandomBinaryBatch(clients, 300, rng);
    const std::vector<double> uniform(clients, 1.0 / clients);
    EXPECT_EQ(WeightedSoftVote(votes, uniform), SoftVote(votes));
  }
}

TEST(WeightedSoftVoteTest, WeightErrors) {
  const VoteBatch votes = FromColumns({{1, -1}});
  EXPECT_THROW(WeightedSoftVote(votes, std::vector<double>{0.6, 0.6}), InvalidArgument);
  EXPECT_THROW(WeightedSoftVote(votes, std::vector<double>{1.5, -0.5}), InvalidArgument);
  EXPECT_THROW(WeightedSoftVote(votes, std::vector<double>{1.0}), InvalidArgument);
}

TEST(CredibilityScoreTest, Examples) {
  const QuantizedWeights global{Levels::kBinary, {1, -1, 1, 1}};
  EXPECT_EQ(CredibilityScore(global.values, global), 1.0);
  const std::vector<std::int8_t> complement = {-1, 1, -1, -1};
  EXPECT_EQ(CredibilityScore(complement, global), 0.0);
  const std::vector<std::int8_t> three = {1, -1, 1, -1};
  EXPECT_EQ(CredibilityScore(three, global), 0.75);
  EXPECT_THROW(CredibilityScore(std::vector<std::int8_t>{1}, global), InvalidArgument);
}

TEST(CredibilityScoreTest, ComplementOfHammingDistance) {
  RandomStream rng(10);
  const VoteBatch votes = RandomBinaryBatch(2, 1000, rng);
  const QuantizedWeights global{Levels::kBinary,
                                {votes.row(1).begin(), votes.row(1).end()}};
  std::size_t hamming = 0;
  for (std::size_t i = 0; i < 1000; ++i) hamming += votes.at(0, i) != votes.at(1, i);
  EXPECT_DOUBLE_EQ(CredibilityScore(votes.row(0), global), 1.0 - hamming / 1000.0);
}

TEST(ReputationTest, UpdateArithmetic) {
  ReputationState s{{1.0, 0.8}, 0.5};
  const auto next = UpdateReputation(s, std::vector<double>{1.0, 0.4});
  EXPECT_EQ(next.credibility[0], 1.0);
  EXPECT_DOUBLE_EQ(next.credibility[1], 0.6);
}

TEST(ReputationTest, GeometricConvergence) {
  ReputationState s{{1.0}, 0.5};
  const double c = 0.2;
  for (int k = 1; k <= 20; ++k) {
    s = UpdateReputation(s, std::vector<double>{c});
    EXPECT_NEAR(s.credibility[0] - c, (1.0 - c) * std::pow(0.5, k), 1e-15);
  }
}

TEST(ReputationTest, InitialIsUniform) {
  const auto s = ReputationState::Initial(4, 0.5);
  const auto lambda = ReputationWeights(s);
  for (double l : lambda) EXPECT_DOUBLE_EQ(l, 0.25);
  EXPECT_THROW(ReputationState::Initial(4, 1.0), InvalidArgument);
}

TEST(ReputationTest, WeightsExamples) {
  const auto a = ReputationWeights(ReputationState{{1, 1, 1, 1}, 0.5});
  for (double l : a) EXPECT_EQ(l, 0.25);
  const auto b = ReputationWeights(ReputationState{{0.9, 0.1}, 0.5});
  EXPECT_DOUBLE_EQ(b[0], 0.9);
  EXPECT_DOUBLE_EQ(b[1], 0.1);
  EXPECT_THROW(ReputationWeights(ReputationState{{0.0, 0.0}, 0.5}), DegenerateState);
}

TEST(ReputationTest, WeightsScaleInvariantAndNormalized) {
  RandomStream rng(11);
  std::vector<double> nu(9);
  for (double& v : nu) v = rng.Uniform();
  const auto base = ReputationWeights(ReputationState{nu, 0.5});
  EXPECT_NEAR(std::accumulate(base.begin(), base.end(), 0.0), 1.0, 1e-12);
  for (double c : {1e-3, 0.37, 42.0}) {
    std::vector<double> scaled = nu;
    for (double& v : scaled) v *= c;
    const auto w = ReputationWeights(ReputationState{scaled, 0.5});
    for (std::size_t i = 0; i < w.size(); ++i) EXPECT_NEAR(w[i], base[i], 1e-15);
  }
}

TEST(OneShotErrorBoundTest, DirectEvaluation) {
  const double expected = std::pow(0.2 * std::exp(0.8), 5.0);
  EXPECT_NEAR(OneShotErrorBound(0.1, 10), expected, 1e-15);
  EXPECT_NEAR(OneShotErrorBound(0.1, 10), 0.017471, 1e-6);
}

TEST(OneShotErrorBoundTest, LimitsAndMonotonicity) {
  EXPECT_NEAR(OneShotErrorBound(0.5 - 1e-9, 15), 1.0, 1e-6);
  double prev = 1.0;
  for (std::size_t m = 1; m < 60; ++m) {
    const double b = OneShotErrorBound(0.3, m);
    EXPECT_GT(b, 0.0);
    EXPECT_LT(b, prev);
    prev = b;
  }
  EXPECT_THROW(OneShotErrorBound(0.5, 3), DomainError);
  EXPECT_THROW(OneShotErrorBound(0.0, 3), DomainError);
}

TEST(OneShotErrorBoundTest, MonteCarloFifteenVoters) {
  const std::size_t trials = 100000, voters = 15;
  const double s = 0.2;
  RandomStream rng(12);
  std::size_t wrong = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    std::size_t errors = 0;
    for (std::size_t m = 0; m < voters; ++m) errors += rng.Uniform() < s;
    wrong += 2 * errors > voters;
  }
  EXPECT_LE(double(wrong) / trials, OneShotErrorBound(s, voters));
}

TEST(CoordinateMedianTest, Examples) {
  Matrix a(3, 1);
  a(0, 0) = 1;
  a(1, 0) = 2;
  a(2, 0) = 100;
  EXPECT_EQ(CoordinateMedian(a)[0], 2.0);
  Matrix b(2, 1);
  b(0, 0) = 1;
  b(1, 0) = 3;
  EXPECT_EQ(CoordinateMedian(b)[0], 2.0);
  EXPECT_THROW(CoordinateMedian(Matrix(0, 3)), InvalidArgument);
}

TEST(CoordinateMedianTest, RowPermutationInvariant) {
  RandomStream rng(13);
  Matrix m(7, 5);
  for (double& v : m.data()) v = rng.Uniform();
  std::vector<std::size_t> perm(7);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  Matrix shuffled(7, 5);
  for (std::size_t r = 0; r < 7; ++r) {
    for (std::size_t c = 0; c < 5; ++c) shuffled(r, c) = m(perm[r], c);
  }
  EXPECT_EQ(CoordinateMedian(m), CoordinateMedian(shuffled));
}

TEST(KrumTest, ClusterBeatsOutlier) {
  Matrix m(4, 2);
  for (std::size_t r = 0; r < 3; ++r) {
    m(r, 0) = 1.0;
    m(r, 1) = -2.0;
  }
  m(3, 0) = 1e3;
  m(3, 1) = 1e3;
  EXPECT_LT(KrumSelect(m, 1), 3u);
}

TEST(KrumTest, IdenticalRowsPickFirst) {
  Matrix m(5, 3);
  for (double& v : m.data()) v = 0.25;
  EXPECT_EQ(KrumSelect(m, 2), 0u);
}

TEST(KrumTest, TooFewClients) {
  EXPECT_THROW(KrumSelect(Matrix(4, 2), 2), InvalidArgument);
}

TEST(KrumTest, MatchesExhaustiveScoring) {
  RandomStream rng(14);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    Matrix m(6, 3);
    for (double& v : m.data()) v = gauss(rng);
    const std::size_t f = 1;
    // Score: sum of squared distances to the M - f - 2 nearest other rows.
    std::vector<double> scores(6);
    for (std::size_t i = 0; i < 6; ++i) {
      std::vector<double> d;
      for (std::size_t j = 0; j < 6; ++j) {
        if (i == j) continue;
        double s = 0;
        for (std::size_t c = 0; c < 3; ++c) s += (m(i, c) - m(j, c)) * (m(i, c) - m(j, c));
        d.push_back(s);
      }
      std::sort(d.begin(), d.end());
      scores[i] = std::accumulate(d.begin(), d.begin() + (6 - f - 2), 0.0);
    }
    const auto best = std::min_element(scores.begin(), scores.end()) - scores.begin();
    EXPECT_EQ(KrumSelect(m, f), static_cast<std::size_t>(best));
    const auto k = KrumScores(m, f);
    for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(k[i], scores[i], 1e-12);
  }
}

}  // namespace
}  // namespace fedvote
