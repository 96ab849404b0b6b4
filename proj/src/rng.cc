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

#include "fedvote/rng.h"

namespace fedvote {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RandomStream RandomStream::Derive(std::uint64_t master, StreamPurpose purpose,
                                  std::uint64_t a, std::uint64_t b) {
  std::uint64_t h = SplitMix64(master);
  h = SplitMix64(h ^ static_cast<std::uint64_t>(purpose));
  h = SplitMix64(h ^ a);
  h = SplitMix64(h ^ (b + 0x632be59bd9b4e019ULL));
  return RandomStream(h);
}

RandomStream RandomStream::Split(std::uint64_t tag) const {
  return RandomStream(SplitMix64(key_ ^ SplitMix64(tag + 0x2545f4914f6cdd1dULL)));
}

std::uint64_t RandomStream::UniformInt(std::uint64_t n) {
  // Lemire's multiply-shift with rejection; unbiased.
  unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * n;
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t threshold = (0 - n) % n;
    while (low < threshold) {
      m = static_cast<unsigned __int128>((*this)()) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

}  // namespace fedvote
