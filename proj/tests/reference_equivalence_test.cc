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

// Parallel kernels against the serial reference versions, across thread
// counts. Equality is exact.

#include <omp.h>

#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "fedvote/quantize.h"
#include "fedvote/reference.h"
#include "fedvote/vote.h"

namespace fedvote {
namespace {

class ThreadCountTest : public ::testing::TestWithParam<int> {
 protected:
  void SetUp() override {
    saved_ = omp_get_max_threads();
    omp_set_num_threads(GetParam());
  }
  void TearDown() override { omp_set_num_threads(saved_); }

 private:
  int saved_ = 1;
};

std::vector<double> RandomUnit(std::size_t n, RandomStream& rng) {
  std::vector<double> v(n);
  for (double& x : v) x = 2 * rng.Uniform() - 1;
  return v;
}

VoteBatch RandomVotes(std::size_t clients, std::size_t dim, Levels levels,
                      RandomStream& rng) {
  std::vector<QuantizedWeights> rows;
  for (std::size_t m = 0; m < clients; ++m) {
    rows.push_back(StochasticRound(RandomUnit(dim, rng), levels, rng.Split(m)));
  }
  return VoteBatch(rows);
}

TEST_P(ThreadCountTest, Rounding) {
  RandomStream rng(1);
  const auto w = RandomUnit(10007, rng);
  EXPECT_EQ(StochasticRoundBinary(w, RandomStream(5)),
            reference::StochasticRoundBinary(w, RandomStream(5)));
  EXPECT_EQ(StochasticRoundTernary(w, RandomStream(6)),
            reference::StochasticRoundTernary(w, RandomStream(6)));
  EXPECT_EQ(QsgdQuantize(w, RandomStream(7)),
            reference::QsgdQuantize(w, RandomStream(7)));
}

TEST_P(ThreadCountTest, Voting) {
  RandomStream rng(2);
  for (Levels levels : {Levels::kBinary, Levels::kTernary}) {
    const VoteBatch votes = RandomVotes(8, 4099, levels, rng);
    EXPECT_EQ(Plurality(votes, RandomStream(3)),
              reference::Plurality(votes, RandomStream(3)));
    EXPECT_EQ(SoftVote(votes), reference::SoftVote(votes));
    std::vector<double> lambda(8);
    double total = 0;
    for (double& l : lambda) total += (l = rng.Uniform() + 0.1);
    for (double& l : lambda) l /= total;
    EXPECT_EQ(WeightedSoftVote(votes, lambda),
              reference::WeightedSoftVote(votes, lambda));
  }
}

TEST_P(ThreadCountTest, RobustAggregators) {
  RandomStream rng(4);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::size_t clients : {1u, 2u, 5u, 8u}) {
    Matrix m(clients, 513);
    for (double& v : m.data()) v = gauss(rng);
    EXPECT_EQ(CoordinateMedian(m), reference::CoordinateMedian(m));
  }
  for (std::size_t f : {0u, 1u, 3u}) {
    Matrix m(9, 40);
    for (double& v : m.data()) v = gauss(rng);
    EXPECT_EQ(KrumSelect(m, f), reference::KrumSelect(m, f));
  }
}

INSTANTIATE_TEST_SUITE_P(Threads, ThreadCountTest, ::testing::Values(1, 2, 3, 4));

}  // namespace
}  // namespace fedvote
