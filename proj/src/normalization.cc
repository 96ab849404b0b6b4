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

#include "fedvote/normalization.h"

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/erf.hpp>

#include "fedvote/errors.h"

namespace fedvote {
namespace {

// Largest double strictly below 1.
constexpr double kBelowOne = 1.0 - 0x1.0p-53;

}  // namespace

double NormalizationFn::Apply(double h) const {
  double y = 0.0;
  switch (family) {
    case NormalizationFamily::kTanh:
      y = std::tanh(shape * h);
      break;
    case NormalizationFamily::kErf:
      y = std::erf(shape * h);
      break;
    case NormalizationFamily::kIdentity:
      return h;
  }
  // Saturated tails round to +-1 in double; keep the open-interval contract.
  if (std::abs(y) >= 1.0) y = std::copysign(kBelowOne, y);
  return y;
}

double NormalizationFn::Derivative(double h) const {
  switch (family) {
    case NormalizationFamily::kTanh: {
      const double t = std::tanh(shape * h);
      return shape * (1.0 - t * t);
    }
    case NormalizationFamily::kErf:
      return shape * 2.0 / std::sqrt(std::numbers::pi) *
             std::exp(-shape * shape * h * h);
    case NormalizationFamily::kIdentity:
      return 1.0;
  }
  return 0.0;
}

double NormalizationFn::Inverse(double w) const {
  if (family == NormalizationFamily::kIdentity) return w;
  if (!(std::abs(w) < 1.0)) {
    throw DomainError("normalize_inverse: |w| must be < 1, got " +
                      std::to_string(w));
  }
  if (family == NormalizationFamily::kTanh) return std::atanh(w) / shape;
  return boost::math::erf_inv(w) / shape;
}

double NormalizationFn::MinDerivativeUnderClip(double p_max) const {
  const double h_bound = std::abs(Inverse(2.0 * p_max - 1.0));
  return Derivative(h_bound);
}

std::string ToString(NormalizationFamily family) {
  switch (family) {
    case NormalizationFamily::kTanh:
      return "tanh";
    case NormalizationFamily::kErf:
      return "erf";
    case NormalizationFamily::kIdentity:
      return "identity";
  }
  return "?";
}

NormalizationFamily ParseNormalizationFamily(const std::string& name) {
  if (name == "tanh") return NormalizationFamily::kTanh;
  if (name == "erf") return NormalizationFamily::kErf;
  if (name == "identity") return NormalizationFamily::kIdentity;
  throw InvalidArgument("unknown normalization family '" + name + "'");
}

std::vector<double> Normalize(std::span<const double> latent,
                              const NormalizationFn& phi) {
  std::vector<double> out(latent.size());
  for (std::size_t i = 0; i < latent.size(); ++i) {
    if (!std::isfinite(latent[i])) {
      throw InvalidArgument("normalize: non-finite latent weight at index " +
                            std::to_string(i));
    }
    out[i] = phi.Apply(latent[i]);
  }
  return out;
}

double NormalizeInverse(double normalized, const NormalizationFn& phi) {
  return phi.Inverse(normalized);
}

std::vector<double> LatentGradient(std::span<const double> grad_normalized,
                                   std::span<const double> latent,
                                   const NormalizationFn& phi) {
  if (grad_normalized.size() != latent.size()) {
    throw InvalidArgument("latent_gradient: length mismatch (" +
                          std::to_string(grad_normalized.size()) + " vs " +
                          std::to_string(latent.size()) + ")");
  }
  std::vector<double> out(latent.size());
  for (std::size_t i = 0; i < latent.size(); ++i) {
    out[i] = phi.Derivative(latent[i]) * grad_normalized[i];
  }
  return out;
}

}  // namespace fedvote
