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

#ifndef FEDVOTE_QUANTIZE_H_
#define FEDVOTE_QUANTIZE_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fedvote/normalization.h"
#include "fedvote/rng.h"

namespace fedvote {

enum class Levels { kBinary, kTernary };

std::string ToString(Levels levels);
Levels ParseLevels(const std::string& name);

// Weight vector over {-1,+1} (binary) or {-1,0,+1} (ternary).
struct QuantizedWeights {
  Levels levels = Levels::kBinary;
  std::vector<std::int8_t> values;

  std::size_t dim() const { return values.size(); }
  bool IsValid() const;
  bool operator==(const QuantizedWeights&) const = default;
};

struct ClipBounds {
  double p_min = 0.001;
  double p_max = 0.999;

  static ClipBounds Symmetric(double p_min) { return {p_min, 1.0 - p_min}; }
  double Clip(double p) const;
  void Validate() const;
};

// Unbiased stochastic rounding. Coordinate i consumes draw i of `stream`, so
// the result depends only on (w, stream key). Entries equal to +-1 round to
// their sign; |w_i| > 1 throws DomainError.
QuantizedWeights StochasticRoundBinary(std::span<const double> normalized,
                                       const RandomStream& stream);
QuantizedWeights StochasticRoundTernary(std::span<const double> normalized,
                                        const RandomStream& stream);
QuantizedWeights StochasticRound(std::span<const double> normalized,
                                 Levels levels, const RandomStream& stream);

// Deterministic sign thresholding (ties at 0 go to +1; ternary keeps 0 for
// |w| < 1/2).
QuantizedWeights ThresholdRound(std::span<const double> normalized,
                                Levels levels);

// h = phi^{-1}(2 clip(p) - 1).
std::vector<double> ReconstructFromSoftVote(std::span<const double> p,
                                            const ClipBounds& clip,
                                            const NormalizationFn& phi);

// QSGD with a single level: Q(x_i) = |x|_2 sgn(x_i) xi_i, where xi_i is
// Bernoulli(|x_i| / |x|_2).
std::vector<double> QsgdQuantize(std::span<const double> x,
                                 const RandomStream& stream);

// E|Q_sr(a) - a|^2 = d - |a|^2.
double BinaryQuantErrorExpectation(std::span<const double> a);
// E|Q_qsgd(x) - x|^2 = |x|_2 |x|_1 - |x|_2^2.
double QsgdErrorExpectation(std::span<const double> x);
// Upper bound (sqrt(d) - 1) |x|_2^2.
double QsgdErrorBound(std::span<const double> x);

// Bit-packed payloads. Binary: bit (i % 8) of byte i / 8, +1 -> 1.
// Ternary: 2-bit codes, 00 = 0, 01 = +1, 10 = -1; 11 is invalid.
std::vector<std::uint8_t> PackQuantized(const QuantizedWeights& weights);
QuantizedWeights UnpackQuantized(std::span<const std::uint8_t> bytes,
                                 Levels levels, std::size_t dim);
std::size_t PackedSize(Levels levels, std::size_t dim);

// Single-level QSGD payload: float32 norm followed by 2-bit sign codes.
std::vector<std::uint8_t> PackQsgd(std::span<const double> quantized);
std::vector<double> UnpackQsgd(std::span<const std::uint8_t> bytes,
                               std::size_t dim);
// Dense float32 payload for full-precision baselines.
std::vector<std::uint8_t> PackDense(std::span<const double> values);

std::vector<double> ToDouble(const QuantizedWeights& weights);

}  // namespace fedvote

#endif  // FEDVOTE_QUANTIZE_H_
