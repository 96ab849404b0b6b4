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

#include "fedvote/lemmas.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "fedvote/errors.h"
#include "fedvote/quantize.h"
#include "fedvote/rng.h"
#include "fedvote/vote.h"

namespace fedvote {
namespace {

// Repetitions rounded per kernel call when tiling a short vector.
constexpr std::size_t kTile = 2048;

std::string Format(const char* fmt, double a, double b = 0.0, double c = 0.0,
                   double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), fmt, a, b, c, d);
  return buf;
}

RandomStream Stream(const LemmaOptions& options, std::uint64_t suite,
                    std::uint64_t case_id = 0) {
  return RandomStream::Derive(options.seed, StreamPurpose::kMonteCarlo, suite,
                              case_id);
}

void CheckTrials(const LemmaOptions& options) {
  if (options.trials < 10000) {
    throw InvalidArgument("verify_lemmas: trials must be >= 10000");
  }
}

std::vector<double> Tile(std::span<const double> v, std::size_t copies) {
  std::vector<double> out;
  out.reserve(v.size() * copies);
  for (std::size_t r = 0; r < copies; ++r) out.insert(out.end(), v.begin(), v.end());
  return out;
}

// Mean of |Q_sr(a) - a|^2 over `trials` binary roundings.
double RoundingErrorEnergy(std::span<const double> a, std::size_t trials,
                           const RandomStream& stream) {
  double total = 0.0;
  std::size_t done = 0;
  for (std::uint64_t chunk = 0; done < trials; ++chunk) {
    const std::size_t copies = std::min(kTile, trials - done);
    const std::vector<double> tiled = Tile(a, copies);
    const QuantizedWeights q = StochasticRoundBinary(tiled, stream.Split(chunk));
    for (std::size_t i = 0; i < tiled.size(); ++i) {
      const double e = q.values[i] - tiled[i];
      total += e * e;
    }
    done += copies;
  }
  return total / static_cast<double>(trials);
}

double QsgdErrorEnergy(std::span<const double> x, std::size_t draws,
                       const RandomStream& stream) {
  double total = 0.0;
  for (std::size_t t = 0; t < draws; ++t) {
    const std::vector<double> q = QsgdQuantize(x, stream.Split(t));
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double e = q[i] - x[i];
      total += e * e;
    }
  }
  return total / static_cast<double>(draws);
}

}  // namespace

LemmaReport VerifyOneShotBound(const LemmaOptions& options) {
  CheckTrials(options);
  LemmaReport report{"one-shot vote error bound", true, {}};
  const double grid_s[] = {0.1, 0.2, 0.3, 0.4};
  const std::size_t grid_m[] = {5, 15, 45};
  std::uint64_t cell = 0;
  for (double s : grid_s) {
    for (std::size_t voters : grid_m) {
      RandomStream rng = Stream(options, 1, cell++);
      // Coordinate t of the batch is trial t; the truth is +1 everywhere.
      std::vector<QuantizedWeights> rows(voters);
      for (std::size_t m = 0; m < voters; ++m) {
        const RandomStream voter = rng.Split(m);
        rows[m].levels = Levels::kBinary;
        rows[m].values.resize(options.trials);
        for (std::size_t t = 0; t < options.trials; ++t) {
          rows[m].values[t] = voter.UniformAt(t) < s ? -1 : 1;
        }
      }
      const QuantizedWeights decision =
          Plurality(VoteBatch(rows), rng.Split(voters));
      const auto wrong = std::count(decision.values.begin(),
                                    decision.values.end(), std::int8_t{-1});
      const double empirical =
          static_cast<double>(wrong) / static_cast<double>(options.trials);
      const double bound = OneShotErrorBound(s, voters);
      const bool ok = empirical <= bound;
      report.passed = report.passed && ok;
      report.lines.push_back(
          Format("s=%.1f M=%.0f empirical=%.6f bound=%.6f", s,
                 static_cast<double>(voters), empirical, bound) +
          (ok ? "" : " VIOLATED"));
    }
  }
  report.lines.push_back(Format("reference: s=0.1 M=10 bound=%.5f",
                                OneShotErrorBound(0.1, 10)));
  return report;
}

LemmaReport VerifySoftVoteExpectation(const LemmaOptions& options) {
  CheckTrials(options);
  LemmaReport report{"soft vote mean equals client mean", true, {}};
  constexpr std::size_t kClients = 5;
  constexpr std::size_t kDim = 64;
  const std::size_t rounds = options.trials / 10;
  RandomStream rng = Stream(options, 2);
  std::uniform_real_distribution<double> unit(-0.95, 0.95);
  std::vector<std::vector<double>> w(kClients, std::vector<double>(kDim));
  for (auto& client : w) {
    for (double& v : client) v = unit(rng);
  }
  std::vector<double> client_mean(kDim, 0.0);
  std::vector<double> sigma(kDim, 0.0);
  for (std::size_t i = 0; i < kDim; ++i) {
    double var = 0.0;
    for (const auto& client : w) {
      client_mean[i] += client[i] / kClients;
      var += 1.0 - client[i] * client[i];
    }
    sigma[i] = std::sqrt(var / rounds) / kClients;
  }

  std::vector<double> sum(kDim, 0.0);
  std::size_t done = 0;
  for (std::uint64_t chunk = 0; done < rounds; ++chunk) {
    const std::size_t copies = std::min(kTile, rounds - done);
    std::vector<QuantizedWeights> rows(kClients);
    for (std::size_t m = 0; m < kClients; ++m) {
      std::vector<double> shifted = w[m];
      for (double& v : shifted) {
        v = std::clamp(v + 2.0 * options.rounding_bias, -1.0, 1.0);
      }
      rows[m] = StochasticRoundBinary(Tile(shifted, copies),
                                      rng.Split(chunk * kClients + m));
    }
    const std::vector<double> p = SoftVote(VoteBatch(rows));
    for (std::size_t j = 0; j < p.size(); ++j) sum[j % kDim] += 2.0 * p[j] - 1.0;
    done += copies;
  }

  double worst = 0.0;
  std::size_t outside = 0;
  for (std::size_t i = 0; i < kDim; ++i) {
    const double z = std::abs(sum[i] / rounds - client_mean[i]) / sigma[i];
    worst = std::max(worst, z);
    if (z > 4.0) ++outside;
  }
  report.passed = outside == 0;
  report.lines.push_back(Format(
      "clients=5 d=64 rounds=%.0f max|z|=%.3f coordinates_beyond_4sigma=%.0f",
      static_cast<double>(rounds), worst, static_cast<double>(outside)));
  return report;
}

LemmaReport VerifyRoundingError(const LemmaOptions& options) {
  CheckTrials(options);
  LemmaReport report{"stochastic rounding error energy", true, {}};
  constexpr std::size_t kVectors = 20;
  constexpr std::size_t kDim = 16;
  RandomStream rng = Stream(options, 3);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  double worst = 0.0;
  for (std::size_t v = 0; v < kVectors; ++v) {
    std::vector<double> a(kDim);
    for (double& x : a) x = unit(rng);
    const double expected = BinaryQuantErrorExpectation(a);
    const double observed = RoundingErrorEnergy(a, options.trials, rng.Split(v));
    const double rel = std::abs(observed - expected) / expected;
    worst = std::max(worst, rel);
    const bool ok = rel <= 0.02;
    report.passed = report.passed && ok;
    report.lines.push_back(
        Format("vector %.0f observed=%.4f expected=%.4f rel=%.4f",
               static_cast<double>(v), observed, expected, rel) +
        (ok ? "" : " VIOLATED"));
  }
  report.lines.push_back(Format("max relative deviation %.4f (tolerance 0.02)",
                                worst));
  return report;
}

LemmaReport VerifyQsgdError(const LemmaOptions& options) {
  CheckTrials(options);
  LemmaReport report{"qsgd error energy", true, {}};
  const std::vector<double> x = {3.0, 4.0};
  const double observed = QsgdErrorEnergy(x, options.trials, Stream(options, 4));
  const double expected = QsgdErrorExpectation(x);
  const bool formula_ok = std::abs(observed - 10.0) <= 0.3;
  report.passed = formula_ok;
  report.lines.push_back(
      Format("x=[3,4] observed=%.4f formula=%.4f target=10+-0.3", observed,
             expected) +
      (formula_ok ? "" : " VIOLATED"));

  const std::size_t draws = options.trials / 10;
  const std::size_t dims[] = {4, 64, 1024};
  for (std::size_t d : dims) {
    RandomStream rng = Stream(options, 5, d);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double worst_ratio = 0.0;
    for (std::size_t v = 0; v < 20; ++v) {
      std::vector<double> y(d);
      for (double& e : y) e = gauss(rng);
      const double mc = QsgdErrorEnergy(y, draws, rng.Split(v));
      worst_ratio = std::max(worst_ratio, mc / QsgdErrorBound(y));
    }
    const bool ok = worst_ratio <= 1.02;
    report.passed = report.passed && ok;
    report.lines.push_back(
        Format("d=%.0f max observed/bound=%.4f over 20 vectors (limit 1.02)",
               static_cast<double>(d), worst_ratio) +
        (ok ? "" : " VIOLATED"));
  }
  return report;
}

std::vector<LemmaReport> VerifyAllLemmas(const LemmaOptions& options) {
  return {VerifyOneShotBound(options), VerifySoftVoteExpectation(options),
          VerifyRoundingError(options), VerifyQsgdError(options)};
}

double LogLogSlope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw InvalidArgument("log_log_slope: need two or more paired points");
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= x.size();
  my /= y.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

ScalingReport MeasureErrorScaling(std::uint64_t seed, std::size_t draws,
                                  int min_log2, int max_log2,
                                  double beta_shape) {
  if (draws == 0 || min_log2 < 1 || max_log2 <= min_log2) {
    throw InvalidArgument("error_scaling: bad draw count or dimension range");
  }
  ScalingReport report;
  for (int k = min_log2; k <= max_log2; ++k) {
    const std::size_t d = std::size_t{1} << k;
    RandomStream rng = RandomStream::Derive(seed, StreamPurpose::kMonteCarlo,
                                            6, static_cast<std::uint64_t>(k));
    std::gamma_distribution<double> gamma(beta_shape, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    ScalingPoint point;
    point.dim = d;
    for (std::size_t t = 0; t < draws; ++t) {
      std::vector<double> w(d);
      std::vector<double> x(d);
      for (std::size_t i = 0; i < d; ++i) {
        const double g1 = gamma(rng);
        const double g2 = gamma(rng);
        w[i] = 2.0 * g1 / (g1 + g2) - 1.0;
        x[i] = gauss(rng);
      }
      const QuantizedWeights q = StochasticRoundBinary(w, rng.Split(2 * t));
      const std::vector<double> qx = QsgdQuantize(x, rng.Split(2 * t + 1));
      for (std::size_t i = 0; i < d; ++i) {
        point.binary_error += (q.values[i] - w[i]) * (q.values[i] - w[i]);
        point.qsgd_error += (qx[i] - x[i]) * (qx[i] - x[i]);
      }
    }
    point.binary_error /= static_cast<double>(draws);
    point.qsgd_error /= static_cast<double>(draws);
    report.points.push_back(point);
  }
  std::vector<double> dims, bin, qsgd;
  for (const auto& p : report.points) {
    dims.push_back(static_cast<double>(p.dim));
    bin.push_back(p.binary_error);
    qsgd.push_back(p.qsgd_error);
  }
  report.binary_slope = LogLogSlope(dims, bin);
  report.qsgd_slope = LogLogSlope(dims, qsgd);
  return report;
}

}  // namespace fedvote
