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

#include "fedvote/quantize.h"

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "fedvote/errors.h"
#include "fedvote/normalization.h"
#include "fedvote/rng.h"

namespace fedvote {
namespace {

constexpr std::size_t kDraws = 100000;

// Mean of each coordinate over kDraws independent roundings of `w`.
template <typename Quantizer>
std::vector<double> EmpiricalMean(const std::vector<double>& w,
                                  Quantizer quantize) {
  std::vector<double> tiled;
  tiled.reserve(w.size() * kDraws);
  for (std::size_t t = 0; t < kDraws; ++t) tiled.insert(tiled.end(), w.begin(), w.end());
  const QuantizedWeights q = quantize(tiled);
  std::vector<double> mean(w.size(), 0.0);
  for (std::size_t j = 0; j < tiled.size(); ++j) mean[j % w.size()] += q.values[j];
  for (double& m : mean) m /= kDraws;
  return mean;
}

TEST(StochasticRoundBinaryTest, ZeroIsFairCoin) {
  const auto mean = EmpiricalMean({0.0}, [](const std::vector<double>& v) {
    return StochasticRoundBinary(v, RandomStream(1));
  });
  // P(+1) = 0.5, so the +-1 mean has sd 1/sqrt(N).
  EXPECT_NEAR(mean[0], 0.0, 4.0 / std::sqrt(double(kDraws)));
}

TEST(StochasticRoundBinaryTest, HalfHasMeanHalf) {
  const auto mean = EmpiricalMean({0.5}, [](const std::vector<double>& v) {
    return StochasticRoundBinary(v, RandomStream(2));
  });
  EXPECT_NEAR(mean[0], 0.5, 0.02);
}

TEST(StochasticRoundBinaryTest, NearOneRoundsUp) {
  const std::vector<double> w(1000, 1.0 - 1e-12);
  const QuantizedWeights q = StochasticRoundBinary(w, RandomStream(3));
  for (auto v : q.values) EXPECT_EQ(v, 1);
}

TEST(StochasticRoundBinaryTest, ExactVerticesAreDeterministic) {
  const std::vector<double> w = {1.0, -1.0, 1.0, -1.0};
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const QuantizedWeights q = StochasticRoundBinary(w, RandomStream(seed));
    EXPECT_EQ(q.values, (std::vector<std::int8_t>{1, -1, 1, -1}));
  }
}

TEST(StochasticRoundBinaryTest, SeedDeterminism) {
  std::vector<double> w(257);
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::sin(double(i));
  EXPECT_EQ(StochasticRoundBinary(w, RandomStream(9)),
            StochasticRoundBinary(w, RandomStream(9)));
  EXPECT_NE(StochasticRoundBinary(w, RandomStream(9)),
            StochasticRoundBinary(w, RandomStream(10)));
}

TEST(StochasticRoundBinaryTest, OutOfRangeRejected) {
  const std::vector<double> w = {0.2, 1.0000001};
  EXPECT_THROW(StochasticRoundBinary(w, RandomStream(1)), DomainError);
  EXPECT_THROW(StochasticRoundTernary(w, RandomStream(1)), DomainError);
}

TEST(StochasticRoundTernaryTest, ZeroStaysZero) {
  const std::vector<double> w(500, 0.0);
  for (auto v : StochasticRoundTernary(w, RandomStream(4)).values) EXPECT_EQ(v, 0);
}

TEST(StochasticRoundTernaryTest, QuarterLevelFrequencies) {
  std::vector<double> w(kDraws, 0.25);
  const QuantizedWeights q = StochasticRoundTernary(w, RandomStream(5));
  std::size_t plus = 0, zero = 0, minus = 0;
  for (auto v : q.values) {
    plus += v == 1;
    zero += v == 0;
    minus += v == -1;
  }
  const double sd = std::sqrt(0.25 * 0.75 / kDraws);
  EXPECT_NEAR(double(plus) / kDraws, 0.25, 4 * sd);
  EXPECT_NEAR(double(zero) / kDraws, 0.75, 4 * sd);
  EXPECT_EQ(minus, 0u);
}

TEST(StochasticRoundTernaryTest, NegativeMean) {
  const auto mean = EmpiricalMean({-0.4}, [](const std::vector<double>& v) {
    return StochasticRoundTernary(v, RandomStream(6));
  });
  EXPECT_NEAR(mean[0], -0.4, 0.02);
}

// For 20 random vectors (d = 32) the empirical mean is within 4 sqrt(var/N)
// of the input, with var the largest per-coordinate variance.
TEST(UnbiasednessTest, BinaryAndTernary) {
  RandomStream rng(123);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int v = 0; v < 20; ++v) {
    std::vector<double> w(32);
    for (double& x : w) x = unit(rng);
    const auto bin = EmpiricalMean(w, [&](const std::vector<double>& t) {
      return StochasticRoundBinary(t, rng.Split(2 * v));
    });
    const auto ter = EmpiricalMean(w, [&](const std::vector<double>& t) {
      return StochasticRoundTernary(t, rng.Split(2 * v + 1));
    });
    double max_var_bin = 0.0, max_var_ter = 0.0;
    for (double x : w) {
      max_var_bin = std::max(max_var_bin, 1.0 - x * x);
      max_var_ter = std::max(max_var_ter, std::abs(x) - x * x);
    }
    for (std::size_t i = 0; i < w.size(); ++i) {
      EXPECT_LT(std::abs(bin[i] - w[i]), 4 * std::sqrt(max_var_bin / kDraws));
      EXPECT_LT(std::abs(ter[i] - w[i]), 4 * std::sqrt(max_var_ter / kDraws));
    }
  }
}

TEST(UnbiasednessTest, Qsgd) {
  RandomStream rng(321);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const std::size_t draws = 20000;
  for (int v = 0; v < 20; ++v) {
    std::vector<double> x(32);
    for (double& e : x) e = gauss(rng);
    const double norm = std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0));
    std::vector<double> mean(32, 0.0);
    for (std::size_t t = 0; t < draws; ++t) {
      const auto q = QsgdQuantize(x, rng.Split(1000 * v + t));
      for (std::size_t i = 0; i < 32; ++i) mean[i] += q[i] / draws;
    }
    // Var(Q(x_i)) = |x_i| |x| - x_i^2 <= |x|^2 / 4.
    const double bound = 4 * std::sqrt(norm * norm / 4 / draws);
    for (std::size_t i = 0; i < 32; ++i) EXPECT_LT(std::abs(mean[i] - x[i]), bound);
  }
}

TEST(ReconstructTest, HalfMapsToZero) {
  const std::vector<double> p = {0.5, 0.5};
  for (double h : ReconstructFromSoftVote(p, ClipBounds{}, NormalizationFn::Tanh())) {
    EXPECT_EQ(h, 0.0);
  }
}

TEST(ReconstructTest, ClippingEngagesAtOne) {
  const std::vector<double> p = {1.0, 0.0};
  const auto phi = NormalizationFn::Tanh(1.5);
  const auto h = ReconstructFromSoftVote(p, ClipBounds{0.001, 0.999}, phi);
  EXPECT_TRUE(std::isfinite(h[0]));
  EXPECT_NEAR(h[0], std::atanh(0.998) / 1.5, 1e-9);
  EXPECT_NEAR(h[1], -std::atanh(0.998) / 1.5, 1e-9);
  for (double v : h) EXPECT_LE(std::abs(phi.Apply(v)), 2 * 0.999 - 1);
}

TEST(ReconstructTest, RoundTripRecoversLatent) {
  const auto phi = NormalizationFn::Erf(1.5);
  const std::vector<double> h = {-1.2, -0.3, 0.0, 0.45, 1.0};
  std::vector<double> p;
  for (double v : h) p.push_back((phi.Apply(v) + 1.0) / 2.0);
  const auto back = ReconstructFromSoftVote(p, ClipBounds{}, phi);
  for (std::size_t i = 0; i < h.size(); ++i) EXPECT_NEAR(back[i], h[i], 1e-9);
}

TEST(ReconstructTest, OutOfRangeProbability) {
  const std::vector<double> p = {0.2, 1.5};
  EXPECT_THROW(ReconstructFromSoftVote(p, ClipBounds{}, NormalizationFn::Tanh()),
               InvalidArgument);
}

TEST(QsgdTest, OneHotIsExact) {
  const std::vector<double> x = {5.0, 0.0};
  for (std::uint64_t s = 0; s < 20; ++s) {
    EXPECT_EQ(QsgdQuantize(x, RandomStream(s)), x);
  }
}

TEST(QsgdTest, ZeroVector) {
  const std::vector<double> x(6, 0.0);
  EXPECT_EQ(QsgdQuantize(x, RandomStream(1)), x);
}

TEST(QsgdTest, ThreeFourLevelsAndMean) {
  const std::vector<double> x = {3.0, 4.0};
  std::vector<double> mean(2, 0.0);
  for (std::size_t t = 0; t < kDraws; ++t) {
    const auto q = QsgdQuantize(x, RandomStream(7).Split(t));
    for (std::size_t i = 0; i < 2; ++i) {
      ASSERT_TRUE(q[i] == 0.0 || q[i] == 5.0);
      mean[i] += q[i] / kDraws;
    }
  }
  // Entry i is 5 w.p. x_i / 5: sd of the mean is 5 sqrt(r(1-r)/N).
  EXPECT_NEAR(mean[0], 3.0, 4 * 5 * std::sqrt(0.6 * 0.4 / kDraws));
  EXPECT_NEAR(mean[1], 4.0, 4 * 5 * std::sqrt(0.8 * 0.2 / kDraws));
}

TEST(QsgdTest, NonFiniteRejected) {
  const std::vector<double> x = {1.0, std::nan("")};
  EXPECT_THROW(QsgdQuantize(x, RandomStream(1)), InvalidArgument);
}

TEST(ErrorFormulaTest, BinaryExpectation) {
  EXPECT_DOUBLE_EQ(BinaryQuantErrorExpectation(std::vector<double>(4, 0.0)), 4.0);
  EXPECT_DOUBLE_EQ(BinaryQuantErrorExpectation(std::vector<double>{1, -1, 1}), 0.0);
  const std::vector<double> a = {0.5, -0.25};
  EXPECT_DOUBLE_EQ(BinaryQuantErrorExpectation(a), 2.0 - 0.25 - 0.0625);
}

TEST(ErrorFormulaTest, QsgdExpectationAndBound) {
  const std::vector<double> x = {3.0, 4.0};
  EXPECT_DOUBLE_EQ(QsgdErrorExpectation(x), 10.0);
  EXPECT_DOUBLE_EQ(QsgdErrorBound(x), (std::sqrt(2.0) - 1.0) * 25.0);
  EXPECT_DOUBLE_EQ(QsgdErrorExpectation(std::vector<double>{0, 0, 2.5}), 0.0);
  RandomStream rng(5);
  std::normal_distribution<double> gauss(0.0, 3.0);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> y(1 + rng.UniformInt(64));
    for (double& e : y) e = gauss(rng);
    EXPECT_LE(QsgdErrorExpectation(y), QsgdErrorBound(y) * (1 + 1e-12));
  }
}

TEST(PackingTest, SizesAndRoundTrip) {
  RandomStream rng(8);
  for (std::size_t d : {1u, 7u, 8u, 9u, 63u, 64u, 1001u}) {
    std::vector<double> w(d);
    for (double& v : w) v = 2 * rng.Uniform() - 1;
    const auto bin = StochasticRoundBinary(w, rng.Split(d));
    const auto ter = StochasticRoundTernary(w, rng.Split(d + 1));
    const auto pb = PackQuantized(bin);
    const auto pt = PackQuantized(ter);
    EXPECT_EQ(pb.size(), (d + 7) / 8);
    EXPECT_EQ(pt.size(), (d + 3) / 4);
    EXPECT_EQ(PackedSize(Levels::kBinary, d), pb.size());
    EXPECT_EQ(PackedSize(Levels::kTernary, d), pt.size());
    EXPECT_EQ(UnpackQuantized(pb, Levels::kBinary, d), bin);
    EXPECT_EQ(UnpackQuantized(pt, Levels::kTernary, d), ter);
  }
}

TEST(PackingTest, BitLayout) {
  QuantizedWeights q{Levels::kBinary, {1, -1, -1, 1, -1, -1, -1, -1, 1}};
  const auto bytes = PackQuantized(q);
  ASSERT_EQ(bytes.size(), 2u);
  EXPECT_EQ(bytes[0], 0b00001001);
  EXPECT_EQ(bytes[1], 0b00000001);
  QuantizedWeights t{Levels::kTernary, {0, 1, -1, 1, 1}};
  const auto tb = PackQuantized(t);
  ASSERT_EQ(tb.size(), 2u);
  EXPECT_EQ(tb[0], 0b01100100);
  EXPECT_EQ(tb[1], 0b00000001);
}

TEST(PackingTest, ReservedTernaryCode) {
  const std::vector<std::uint8_t> bytes = {0b00000011};
  EXPECT_THROW(UnpackQuantized(bytes, Levels::kTernary, 1), InvalidArgument);
}

TEST(PackingTest, QsgdPayload) {
  const std::vector<double> q = {0.0, 5.0, -5.0, 0.0, 5.0};
  const auto bytes = PackQsgd(q);
  EXPECT_EQ(bytes.size(), 4u + 2u);
  EXPECT_EQ(UnpackQsgd(bytes, q.size()), q);
  EXPECT_EQ(PackDense(q).size(), 4u * q.size());
}

TEST(ClipBoundsTest, ClampsAndValidates) {
  const ClipBounds clip;
  EXPECT_EQ(clip.Clip(0.0), 0.001);
  EXPECT_EQ(clip.Clip(1.0), 0.999);
  EXPECT_EQ(clip.Clip(0.3), 0.3);
  EXPECT_THROW((ClipBounds{0.6, 0.9}).Validate(), InvalidArgument);
  EXPECT_NO_THROW(ClipBounds::Symmetric(0.01).Validate());
}

}  // namespace
}  // namespace fedvote
