// Copyright 2026 The stanceshift Authors.
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

#include <map>
#include <random>
#include <string>

#include "stanceshift/termshift.hpp"

namespace {

std::map<std::string, std::size_t> zipf_counts(std::size_t vocab, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::map<std::string, std::size_t> out;
  for (std::size_t i = 0; i < vocab; ++i) {
    out["term" + std::to_string(rng() % (vocab * 2)) + " next"] = 1 + 1000 / (i + 1) + rng() % 3;
  }
  return out;
}

void BM_RankFrequencies(benchmark::State& state) {
  const auto counts = zipf_counts(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(stanceshift::termshift::rank_frequencies(counts));
  }
}
BENCHMARK(BM_RankFrequencies)->Range(64, 1 << 15);

void BM_RankDifference(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto fg = stanceshift::termshift::rank_frequencies(zipf_counts(n, 1));
  const auto bg = stanceshift::termshift::rank_frequencies(zipf_counts(n, 2));
  for (auto _ : state) {
    benchmark::DoNotOptimize(stanceshift::termshift::rank_difference(fg, bg));
  }
}
BENCHMARK(BM_RankDifference)->Range(64, 1 << 15);

}  // namespace
