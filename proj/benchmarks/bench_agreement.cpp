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

#include <random>
#include <string>
#include <vector>

#include "stanceshift/annotation.hpp"

namespace {

using stanceshift::annotation::AnnotationRecord;

void BM_KrippendorffAlpha(benchmark::State& state) {
  std::mt19937_64 rng(7);
  std::vector<AnnotationRecord> records;
  for (int item = 0; item < state.range(0); ++item) {
    for (const char* coder : {"a1", "a2", "a3"}) {
      if (rng() % 4 == 0) continue;  // sparse coverage
      records.push_back({std::to_string(item), coder, stanceshift::kAllStances[rng() % 3]});
    }
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(stanceshift::annotation::krippendorff_alpha(records));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_KrippendorffAlpha)->Range(128, 1 << 14);

}  // namespace
