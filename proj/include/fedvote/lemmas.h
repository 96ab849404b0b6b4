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

#ifndef FEDVOTE_LEMMAS_H_
#define FEDVOTE_LEMMAS_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace fedvote {

struct LemmaOptions {
  std::size_t trials = 100000;
  std::uint64_t seed = 1;
  // Added to every Bernoulli mean in the soft-vote expectation suite. Any
  // nonzero value should make that suite fail.
  double rounding_bias = 0.0;
};

struct LemmaReport {
  std::string name;
  bool passed = true;
  std::vector<std::string> lines;
};

// Majority-vote error frequency against [2s e^{1-2s}]^{M/2} on the
// s in {0.1..0.4} x M in {5, 15, 45} grid.
LemmaReport VerifyOneShotBound(const LemmaOptions& options);

// Mean of 2 * soft_vote - 1 over repeated roundings of five fixed clients
// (d = 64) against the client mean, 4 sigma per coordinate.
LemmaReport VerifySoftVoteExpectation(const LemmaOptions& options);

// Binary stochastic-rounding error energy against d - |a|^2 for 20 random
// a in (-1, 1)^16, 2% relative.
LemmaReport VerifyRoundingError(const LemmaOptions& options);

// QSGD error energy for x = [3, 4] against 10 +- 0.3, and the
// (sqrt(d) - 1)|x|^2 bound for 20 random x per d in {4, 64, 1024}.
LemmaReport VerifyQsgdError(const LemmaOptions& options);

// The four suites above, in order.
std::vector<LemmaReport> VerifyAllLemmas(const LemmaOptions& options);

struct ScalingPoint {
  std::size_t dim = 0;
  double binary_error = 0.0;  // Beta-distributed Bernoulli means
  double qsgd_error = 0.0;    // Gaussian inputs
};

struct ScalingReport {
  std::vector<ScalingPoint> points;
  double binary_slope = 0.0;
  double qsgd_slope = 0.0;
};

// Monte-Carlo error energies for d = 2^min_log2 .. 2^max_log2 and their
// log-log least-squares slopes.
ScalingReport MeasureErrorScaling(std::uint64_t seed, std::size_t draws,
                                  int min_log2 = 6, int max_log2 = 14,
                                  double beta_shape = 2.0);

// Least-squares slope of log(y) against log(x).
double LogLogSlope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace fedvote

#endif  // FEDVOTE_LEMMAS_H_
