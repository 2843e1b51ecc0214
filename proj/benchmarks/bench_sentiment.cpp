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

#include <filesystem>
#include <string>
#include <vector>

#include "stanceshift/sentiment.hpp"

namespace {

using stanceshift::sentiment::SentimentLexicon;

const SentimentLexicon& lexicon() {
  static const SentimentLexicon lex = SentimentLexicon::load(
      std::filesystem::path(STANCESHIFT_BENCH_DATA_DIR) / "lexicon" / "sentiment_lexicon.tsv");
  return lex;
}

void BM_ScoreShortHeadline(benchmark::State& state) {
  const std::string text = "Refugees are NOT welcome, says a very angry official!!";
  for (auto _ : state) {
    benchmark::DoNotOptimize(stanceshift::sentiment::score_text(text, lexicon()));
  }
}
BENCHMARK(BM_ScoreShortHeadline);

void BM_ScoreLongText(benchmark::State& state) {
  std::string text;
  for (int i = 0; i < state.range(0); ++i) {
    text += i % 3 ? "the border crossing was extremely good today " : "not a great day, sadly ";
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(stanceshift::sentiment::score_text(text, lexicon()));
  }
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_ScoreLongText)->Range(8, 512);

}  // namespace
