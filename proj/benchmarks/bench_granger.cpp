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
#include <vector>

#include "stanceshift/series.hpp"
#include "stanceshift/stats.hpp"

namespace {

void BM_GrangerSingle(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  std::vector<double> x(static_cast<std::size_t>(state.range(0))), y(x.size());
  for (std::size_t t = 0; t < x.size(); ++t) {
    x[t] = g(rng);
    y[t] = (t ? 0.5 * x[t - 1] : 0.0) + g(rng);
  }
  const int lag = static_cast<int>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(stanceshift::series::granger_single(x, y, lag));
  }
}
BENCHMARK(BM_GrangerSingle)->ArgsProduct({{52, 104, 500}, {1, 4}});

void BM_FCdf(benchmark::State& state) {
  double f = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(stanceshift::stats::f_cdf(f, 4.0, 95.0));
    f = f > 10.0 ? 0.1 : f + 0.37;
  }
}
BENCHMARK(BM_FCdf);

}  // namespace
