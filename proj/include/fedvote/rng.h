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

#ifndef FEDVOTE_RNG_H_
#define FEDVOTE_RNG_H_

#include <cstdint>
#include <limits>

namespace fedvote {

// Named purposes for derived streams. Every source of randomness in a run
// has its own purpose so toggling one feature never shifts another's draws.
enum class StreamPurpose : std::uint64_t {
  kInit = 1,
  kClientBatch = 2,
  kClientRounding = 3,
  kServerTieBreak = 4,
  kAttack = 5,
  kParticipation = 6,
  kPartition = 7,
  kData = 8,
  kEval = 9,
  kMonteCarlo = 10,
  kBaselineQuantizer = 11,
};

std::uint64_t SplitMix64(std::uint64_t x);

// Counter-based generator built on the SplitMix64 output function.
//
// Element i of a stream is a pure function of (key, i), so kernels may draw
// coordinate i from any thread and still produce the same bits as a serial
// loop. The stream also satisfies UniformRandomBitGenerator for use with
// <random> distributions; sequential draws advance an internal counter.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  RandomStream() : RandomStream(0) {}
  explicit RandomStream(std::uint64_t key) : key_(SplitMix64(key)) {}

  // Stream for (master, purpose, a, b). Distinct tuples give independent keys.
  static RandomStream Derive(std::uint64_t master, StreamPurpose purpose,
                             std::uint64_t a = 0, std::uint64_t b = 0);

  // Child stream; does not advance this one.
  RandomStream Split(std::uint64_t tag) const;

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() { return BitsAt(counter_++); }

  // Uniform on [0, 1) with 53 random bits.
  double Uniform() { return UniformAt(counter_++); }

  result_type BitsAt(std::uint64_t index) const {
    return SplitMix64(key_ + index * kGamma);
  }
  double UniformAt(std::uint64_t index) const {
    return static_cast<double>(BitsAt(index) >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n). n must be positive.
  std::uint64_t UniformInt(std::uint64_t n);

  std::uint64_t key() const { return key_; }
  std::uint64_t position() const { return counter_; }

 private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace fedvote

#endif  // FEDVOTE_RNG_H_
