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

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>

#include "fedvote/errors.h"

namespace fedvote {
namespace {

void CheckRoundable(std::span<const double> w, const char* op) {
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!(std::abs(w[i]) <= 1.0)) {
      throw DomainError(std::string(op) + ": |w| > 1 at index " +
                        std::to_string(i));
    }
  }
}

double SquaredNorm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

}  // namespace

std::string ToString(Levels levels) {
  return levels == Levels::kBinary ? "binary" : "ternary";
}

Levels ParseLevels(const std::string& name) {
  if (name == "binary") return Levels::kBinary;
  if (name == "ternary") return Levels::kTernary;
  throw InvalidArgument("unknown quantizer '" + name + "'");
}

bool QuantizedWeights::IsValid() const {
  for (std::int8_t v : values) {
    if (v == 1 || v == -1) continue;
    if (v == 0 && levels == Levels::kTernary) continue;
    return false;
  }
  return true;
}

double ClipBounds::Clip(double p) const {
  return std::max(p_min, std::min(p_max, p));
}

void ClipBounds::Validate() const {
  if (!(p_min > 0.0 && p_min < 0.5) || !(p_max > 0.5 && p_max < 1.0) ||
      !(p_min < p_max)) {
    throw InvalidArgument("clip: need 0 < p_min < 0.5 < p_max < 1");
  }
}

QuantizedWeights StochasticRoundBinary(std::span<const double> normalized,
                                       const RandomStream& stream) {
  CheckRoundable(normalized, "sto_round_binary");
  QuantizedWeights out{Levels::kBinary,
                       std::vector<std::int8_t>(normalized.size())};
  const auto n = static_cast<std::ptrdiff_t>(normalized.size());
  const double* in = normalized.data();
  std::int8_t* dst = out.values.data();
  const RandomStream local = stream;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double prob_plus = 0.5 * (in[i] + 1.0);
    const int plus = local.UniformAt(static_cast<std::uint64_t>(i)) < prob_plus;
    dst[i] = static_cast<std::int8_t>(2 * plus - 1);
  }
  return out;
}

QuantizedWeights StochasticRoundTernary(std::span<const double> normalized,
                                        const RandomStream& stream) {
  CheckRoundable(normalized, "sto_round_ternary");
  QuantizedWeights out{Levels::kTernary,
                       std::vector<std::int8_t>(normalized.size())};
  const auto n = static_cast<std::ptrdiff_t>(normalized.size());
  const double* in = normalized.data();
  std::int8_t* dst = out.values.data();
  const RandomStream local = stream;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double w = in[i];
    const int fire =
        local.UniformAt(static_cast<std::uint64_t>(i)) < std::abs(w);
    dst[i] = static_cast<std::int8_t>(fire * ((w > 0.0) - (w < 0.0)));
  }
  return out;
}

QuantizedWeights StochasticRound(std::span<const double> normalized,
                                 Levels levels, const RandomStream& stream) {
  return levels == Levels::kBinary ? StochasticRoundBinary(normalized, stream)
                                   : StochasticRoundTernary(normalized, stream);
}

QuantizedWeights ThresholdRound(std::span<const double> normalized,
                                Levels levels) {
  QuantizedWeights out{levels, std::vector<std::int8_t>(normalized.size())};
  for (std::size_t i = 0; i < normalized.size(); ++i) {
    const double w = normalized[i];
    if (levels == Levels::kTernary && std::abs(w) < 0.5) {
      out.values[i] = 0;
    } else {
      out.values[i] = w >= 0.0 ? 1 : -1;
    }
  }
  return out;
}

std::vector<double> ReconstructFromSoftVote(std::span<const double> p,
                                            const ClipBounds& clip,
                                            const NormalizationFn& phi) {
  clip.Validate();
  const double limit = 2.0 * clip.p_max - 1.0;
  std::vector<double> latent(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] >= 0.0 && p[i] <= 1.0)) {
      throw InvalidArgument("reconstruct: p outside [0,1] at index " +
                            std::to_string(i));
    }
    double h = phi.Inverse(2.0 * clip.Clip(p[i]) - 1.0);
    // phi(phi^{-1}(y)) can land one ulp past y; pull back toward zero.
    while (std::abs(phi.Apply(h)) > limit) h = std::nextafter(h, 0.0);
    latent[i] = h;
  }
  return latent;
}

std::vector<double> QsgdQuantize(std::span<const double> x,
                                 const RandomStream& stream) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i])) {
      throw InvalidArgument("qsgd: non-finite input at index " +
                            std::to_string(i));
    }
  }
  const double norm = std::sqrt(SquaredNorm(x));
  std::vector<double> out(x.size(), 0.0);
  if (norm == 0.0) return out;
  const auto n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double keep = std::abs(x[i]) / norm;
    if (stream.UniformAt(static_cast<std::uint64_t>(i)) < keep) {
      out[i] = std::copysign(norm, x[i]);
    }
  }
  return out;
}

double BinaryQuantErrorExpectation(std::span<const double> a) {
  for (double v : a) {
    if (!(std::abs(v) <= 1.0)) {
      throw DomainError("binary_quant_error: |a_i| must be <= 1");
    }
  }
  return static_cast<double>(a.size()) - SquaredNorm(a);
}

double QsgdErrorExpectation(std::span<const double> x) {
  const double l2sq = SquaredNorm(x);
  double l1 = 0.0;
  for (double v : x) l1 += std::abs(v);
  return std::sqrt(l2sq) * l1 - l2sq;
}

double QsgdErrorBound(std::span<const double> x) {
  return (std::sqrt(static_cast<double>(x.size())) - 1.0) * SquaredNorm(x);
}

std::size_t PackedSize(Levels levels, std::size_t dim) {
  return levels == Levels::kBinary ? (dim + 7) / 8 : (dim + 3) / 4;
}

std::vector<std::uint8_t> PackQuantized(const QuantizedWeights& weights) {
  if (!weights.IsValid()) {
    throw InvalidArgument("pack: entry outside the declared level set");
  }
  std::vector<std::uint8_t> bytes(PackedSize(weights.levels, weights.dim()), 0);
  if (weights.levels == Levels::kBinary) {
    for (std::size_t i = 0; i < weights.dim(); ++i) {
      if (weights.values[i] > 0) bytes[i / 8] |= std::uint8_t(1u << (i % 8));
    }
  } else {
    for (std::size_t i = 0; i < weights.dim(); ++i) {
      const std::uint8_t code =
          weights.values[i] == 0 ? 0u : (weights.values[i] > 0 ? 1u : 2u);
      bytes[i / 4] |= std::uint8_t(code << (2 * (i % 4)));
    }
  }
  return bytes;
}

QuantizedWeights UnpackQuantized(std::span<const std::uint8_t> bytes,
                                 Levels levels, std::size_t dim) {
  if (bytes.size() != PackedSize(levels, dim)) {
    throw InvalidArgument("unpack: expected " +
                          std::to_string(PackedSize(levels, dim)) +
                          " bytes, got " + std::to_string(bytes.size()));
  }
  QuantizedWeights out{levels, std::vector<std::int8_t>(dim)};
  for (std::size_t i = 0; i < dim; ++i) {
    if (levels == Levels::kBinary) {
      out.values[i] = (bytes[i / 8] >> (i % 8)) & 1u ? 1 : -1;
    } else {
      const unsigned code = (bytes[i / 4] >> (2 * (i % 4))) & 3u;
      if (code == 3u) {
        throw InvalidArgument("unpack: reserved ternary code at index " +
                              std::to_string(i));
      }
      out.values[i] = code == 0u ? 0 : (code == 1u ? 1 : -1);
    }
  }
  return out;
}

std::vector<std::uint8_t> PackQsgd(std::span<const double> quantized) {
  float norm = 0.0f;
  for (double v : quantized) {
    if (v != 0.0) {
      norm = static_cast<float>(std::abs(v));
      break;
    }
  }
  std::vector<std::uint8_t> bytes(sizeof(float) + (quantized.size() + 3) / 4,
                                  0);
  std::memcpy(bytes.data(), &norm, sizeof(float));
  for (std::size_t i = 0; i < quantized.size(); ++i) {
    const double v = quantized[i];
    const std::uint8_t code = v == 0.0 ? 0u : (v > 0.0 ? 1u : 2u);
    bytes[sizeof(float) + i / 4] |= std::uint8_t(code << (2 * (i % 4)));
  }
  return bytes;
}

std::vector<double> UnpackQsgd(std::span<const std::uint8_t> bytes,
                               std::size_t dim) {
  if (bytes.size() != sizeof(float) + (dim + 3) / 4) {
    throw InvalidArgument("unpack_qsgd: size mismatch");
  }
  float norm = 0.0f;
  std::memcpy(&norm, bytes.data(), sizeof(float));
  std::vector<double> out(dim, 0.0);
  for (std::size_t i = 0; i < dim; ++i) {
    const unsigned code = (bytes[sizeof(float) + i / 4] >> (2 * (i % 4))) & 3u;
    if (code == 1u) out[i] = norm;
    if (code == 2u) out[i] = -static_cast<double>(norm);
    if (code == 3u) throw InvalidArgument("unpack_qsgd: reserved code");
  }
  return out;
}

std::vector<std::uint8_t> PackDense(std::span<const double> values) {
  std::vector<std::uint8_t> bytes(values.size() * sizeof(float));
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto f = static_cast<float>(values[i]);
    std::memcpy(bytes.data() + i * sizeof(float), &f, sizeof(float));
  }
  return bytes;
}

std::vector<double> ToDouble(const QuantizedWeights& weights) {
  return {weights.values.begin(), weights.values.end()};
}

}  // namespace fedvote
