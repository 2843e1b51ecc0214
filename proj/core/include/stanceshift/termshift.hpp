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

#ifndef STANCESHIFT_TERMSHIFT_HPP_
#define STANCESHIFT_TERMSHIFT_HPP_

#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "stanceshift/common.hpp"
#include "stanceshift/corpus.hpp"

// Characteristic-term extraction by rank difference between a foreground
// and a background corpus.
namespace stanceshift::termshift {

struct PreprocessConfig {
  std::set<std::string> stopwords;
  // Stands in for named-entity removal: places, people, outlets.
  std::set<std::string> entity_stoplist;
  std::unordered_map<std::string, std::string> lemma_map;
  bool strip_punctuation = true;
  bool strip_mentions = true;
  bool strip_urls = true;

  // Throws Error when a stoplist entry is not lowercase or the lemma map is
  // not idempotent (map(map(t)) != map(t)).
  void validate() const;

  // One entry per line; the lemma file is "surface<TAB>lemma". Empty paths
  // are skipped.
  static PreprocessConfig load(const std::filesystem::path& stopwords,
                               const std::filesystem::path& entities,
                               const std::filesystem::path& lemmas);
};

std::set<std::string> load_word_list(const std::filesystem::path& path);

using TokenSequence = std::vector<std::string>;

// Lowercase, strip mentions/URLs/punctuation (a hashtag keeps its word),
// drop stopwords and entities, map lemmas. Stoplists are checked against
// both the surface form and the lemma.
TokenSequence preprocess_text(std::string_view text, const PreprocessConfig& config);
std::vector<TokenSequence> preprocess(std::span<const std::string> texts,
                                      const PreprocessConfig& config);

// Frequency ranks. The least frequent term gets the smallest rank; tied
// terms share the mean of their ordinal positions.
struct TermRanking {
  std::map<std::string, double> ranks;
  std::map<std::string, std::size_t> frequencies;
  std::size_t vocab_size = 0;
  double rank_sum = 0.0;

  double rank_of(const std::string& term) const {
    const auto it = ranks.find(term);
    return it == ranks.end() ? 0.0 : it->second;
  }
};

// Throws Error when `frequencies` is empty.
TermRanking rank_frequencies(const std::map<std::string, std::size_t>& frequencies);

// n-gram counts within each sequence; n-grams never span two sequences.
std::map<std::string, std::size_t> count_ngrams(std::span<const TokenSequence> sequences,
                                                std::size_t n);

// Bigram ranking (`n` = 1 gives the unigram mode). Throws Error when the
// input yields no n-gram.
TermRanking rank_terms(std::span<const TokenSequence> sequences, std::size_t n = 2);

struct RankDiffScore {
  std::string term;
  double tau = 0.0;

  bool operator==(const RankDiffScore&) const = default;
};

// tau(w) = r_D(w)/sum_D - r_B(w)/sum_B for every foreground term, with
// r_B(w) = 0 for terms unseen in the background. Sorted by tau descending,
// then term ascending. Throws Error when the foreground is empty.
std::vector<RankDiffScore> rank_difference(const TermRanking& foreground,
                                           const TermRanking& background);

struct PeriodCorpus {
  std::string period;  // e.g. "2022-03"
  std::vector<TokenSequence> sequences;
};

struct ShiftColumn {
  std::string group;  // country or "ALL"
  std::string foreground_period;
  std::string background_period;
  std::vector<RankDiffScore> terms;  // at most k rows
  std::string notice;                // set when the column is empty
};

// Runs both directions (a against b, then b against a) and keeps the top k
// terms of each. A period without any bigram yields an empty column with a
// notice. Throws Error when both periods carry the same label.
std::vector<ShiftColumn> top_k_shift(const std::string& group, const PeriodCorpus& a,
                                     const PeriodCorpus& b, std::size_t k,
                                     std::size_t ngram = 2);

// Splits news tweets by country (plus "ALL" when `include_all`) and by the
// two calendar months, preprocesses the English text and runs top_k_shift
// for every group. Throws Error when the month keys are malformed or equal.
std::vector<ShiftColumn> top_k_shift_by_country(std::span<const corpus::TweetRecord> news,
                                                std::string_view foreground_month,
                                                std::string_view background_month,
                                                const PreprocessConfig& config,
                                                std::size_t k, bool include_all = false);

}  // namespace stanceshift::termshift

#endif  // STANCESHIFT_TERMSHIFT_HPP_
