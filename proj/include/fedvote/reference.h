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

#ifndef FEDVOTE_REFERENCE_H_
#define FEDVOTE_REFERENCE_H_

// Straightforward single-threaded versions of the parallel kernels. They
// consume randomness in the same per-coordinate way, so results must match
// the optimized kernels bit for bit.

#include <cstddef>
#include <span>
#include <vector>

#include "fedvote/matrix.h"
#include "fedvote/quantize.h"
#include "fedvote/rng.h"
#include "fedvote/vote.h"

namespace fedvote::reference {

QuantizedWeights StochasticRoundBinary(std::span<const double> normalized,
                                       const RandomStream& stream);
QuantizedWeights StochasticRoundTernary(std::span<const double> normalized,
                                        const RandomStream& stream);
std::vector<double> QsgdQuantize(std::span<const double> x,
                                 const RandomStream& stream);

QuantizedWeights Plurality(const VoteBatch& votes,
                           const RandomStream& tie_break);
std::vector<double> SoftVote(const VoteBatch& votes);
std::vector<double> WeightedSoftVote(const VoteBatch& votes,
                                     std::span<const double> weights);
std::vector<double> CoordinateMedian(const Matrix& updates);
std::size_t KrumSelect(const Matrix& updates, std::size_t attackers);

}  // namespace fedvote::reference

#endif  // FEDVOTE_REFERENCE_H_
