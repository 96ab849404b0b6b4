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

#ifndef FEDVOTE_NORMALIZATION_H_
#define FEDVOTE_NORMALIZATION_H_

#include <span>
#include <string>
#include <vector>

namespace fedvote {

// Range normalization applied to latent weights: maps R -> (-1, 1), odd,
// strictly increasing. `kIdentity` is the pass-through used by the
// real-valued baselines and has no range restriction.
enum class NormalizationFamily { kTanh, kErf, kIdentity };

struct NormalizationFn {
  NormalizationFamily family = NormalizationFamily::kTanh;
  double shape = 1.5;  // the `a` in tanh(a x) / erf(a x)

  static NormalizationFn Tanh(double a = 1.5) {
    return {NormalizationFamily::kTanh, a};
  }
  static NormalizationFn Erf(double a = 1.5) {
    return {NormalizationFamily::kErf, a};
  }
  static NormalizationFn Identity() {
    return {NormalizationFamily::kIdentity, 1.0};
  }

  double Apply(double h) const;
  double Derivative(double h) const;
  // Throws DomainError when |w| >= 1 (bounded families only).
  double Inverse(double w) const;

  // Derivative bounds [c1, c2] on the interval |h| <= h_B, where h_B is the
  // latent magnitude reached by the clipped probability p_max.
  double MaxDerivative() const { return Derivative(0.0); }
  double MinDerivativeUnderClip(double p_max) const;
};

std::string ToString(NormalizationFamily family);
NormalizationFamily ParseNormalizationFamily(const std::string& name);

// Elementwise phi(h). Throws InvalidArgument on non-finite input.
std::vector<double> Normalize(std::span<const double> latent,
                              const NormalizationFn& phi);
double NormalizeInverse(double normalized, const NormalizationFn& phi);

// Chain rule through the normalization: g_h = phi'(h) * g_w.
std::vector<double> LatentGradient(std::span<const double> grad_normalized,
                                   std::span<const double> latent,
                                   const NormalizationFn& phi);

}  // namespace fedvote

#endif  // FEDVOTE_NORMALIZATION_H_
