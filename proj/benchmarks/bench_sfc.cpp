// Copyright 2026 The sfcmd Authors
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

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "sfcmd/sfc.hpp"

using namespace sfcmd;

namespace {

std::vector<std::uint32_t> random_cells(std::size_t n, unsigned bits, std::size_t count) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::uint32_t> cell(0, (1u << bits) - 1);
  std::vector<std::uint32_t> out(n * count);
  for (auto& c : out) c = cell(rng);
  return out;
}

void BM_Encode(benchmark::State& state, CurveKind kind) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto bits = static_cast<unsigned>(state.range(1));
  const GridSpec grid(std::vector<ValueRange>(n, ValueRange{0.0, 1.0}), bits);
  constexpr std::size_t kCount = 4096;
  const auto cells = random_cells(n, bits, kCount);
  for (auto _ : state) {
    for (std::size_t i = 0; i < kCount; ++i) {
      benchmark::DoNotOptimize(encode(kind, std::span(cells).subspan(i * n, n), grid));
    }
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * kCount));
}

void BM_Decode(benchmark::State& state, CurveKind kind) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto bits = static_cast<unsigned>(state.range(1));
  const GridSpec grid(std::vector<ValueRange>(n, ValueRange{0.0, 1.0}), bits);
  constexpr std::size_t kCount = 4096;
  std::mt19937_64 rng(2);
  std::vector<std::uint64_t> codes(kCount);
  for (auto& c : codes) c = rng() % grid.code_count();
  for (auto _ : state) {
    for (auto c : codes) benchmark::DoNotOptimize(decode({c, kind}, grid));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * kCount));
}

}  // namespace

BENCHMARK_CAPTURE(BM_Encode, morton, CurveKind::morton)->Args({2, 4})->Args({3, 10})->Args({4, 15});
BENCHMARK_CAPTURE(BM_Encode, hilbert, CurveKind::hilbert)->Args({2, 4})->Args({3, 10})->Args({4, 15});
BENCHMARK_CAPTURE(BM_Decode, morton, CurveKind::morton)->Args({2, 4})->Args({3, 10})->Args({4, 15});
BENCHMARK_CAPTURE(BM_Decode, hilbert, CurveKind::hilbert)->Args({2, 4})->Args({3, 10})->Args({4, 15});

BENCHMARK_MAIN();
