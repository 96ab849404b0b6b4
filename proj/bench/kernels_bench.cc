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

// Serial reference kernels against their OpenMP counterparts. Arg 0 is the
// dimension (or client count for Krum).

#include <benchmark/benchmark.h>

#include <vector>

#include "fedvote/quantize.h"
#include "fedvote/reference.h"
#include "fedvote/rng.h"
#include "fedvote/vote.h"

namespace fedvote {
namespace {

std::vector<double> Uniform(std::size_t n, std::uint64_t seed) {
  RandomStream rng(seed);
  std::vector<double> v(n);
  for (double& x : v) x = 2.0 * rng.Uniform() - 1.0;
  return v;
}

VoteBatch Votes(std::size_t clients, std::size_t dim) {
  std::vector<QuantizedWeights> rows;
  for (std::size_t m = 0; m < clients; ++m) {
    rows.push_back(StochasticRoundBinary(Uniform(dim, m), RandomStream(100 + m)));
  }
  return VoteBatch(rows);
}

Matrix Updates(std::size_t rows, std::size_t cols) {
  Matrix m(rows, cols);
  m.data() = Uniform(rows * cols, 7);
  return m;
}

template <auto Fn>
void BM_Round(benchmark::State& state) {
  const auto w = Uniform(state.range(0), 1);
  const RandomStream stream(2);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(w, stream));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Round<reference::StochasticRoundBinary>)->Name("round_binary/serial")->Arg(1 << 20);
BENCHMARK(BM_Round<StochasticRoundBinary>)->Name("round_binary/omp")->Arg(1 << 20);
BENCHMARK(BM_Round<reference::QsgdQuantize>)->Name("qsgd/serial")->Arg(1 << 20);
BENCHMARK(BM_Round<QsgdQuantize>)->Name("qsgd/omp")->Arg(1 << 20);

template <auto Fn>
void BM_Plurality(benchmark::State& state) {
  const VoteBatch votes = Votes(31, state.range(0));
  const RandomStream tie(3);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(votes, tie));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 31);
}
BENCHMARK(BM_Plurality<reference::Plurality>)->Name("plurality/serial")->Arg(1 << 18);
BENCHMARK(BM_Plurality<Plurality>)->Name("plurality/omp")->Arg(1 << 18);

template <auto Fn>
void BM_SoftVote(benchmark::State& state) {
  const VoteBatch votes = Votes(31, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(Fn(votes));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 31);
}
BENCHMARK(BM_SoftVote<reference::SoftVote>)->Name("soft_vote/serial")->Arg(1 << 18);
BENCHMARK(BM_SoftVote<SoftVote>)->Name("soft_vote/omp")->Arg(1 << 18);

template <auto Fn>
void BM_Median(benchmark::State& state) {
  const Matrix updates = Updates(31, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(Fn(updates));
}
BENCHMARK(BM_Median<reference::CoordinateMedian>)->Name("median/serial")->Arg(1 << 16);
BENCHMARK(BM_Median<CoordinateMedian>)->Name("median/omp")->Arg(1 << 16);

template <auto Fn>
void BM_Krum(benchmark::State& state) {
  const Matrix updates = Updates(state.range(0), 4096);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(updates, state.range(0) / 4));
}
BENCHMARK(BM_Krum<reference::KrumSelect>)->Name("krum/serial")->Arg(31);
BENCHMARK(BM_Krum<KrumSelect>)->Name("krum/omp")->Arg(31);

}  // namespace
}  // namespace fedvote

BENCHMARK_MAIN();
