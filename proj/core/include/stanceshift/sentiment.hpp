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

#ifndef STANCESHIFT_SENTIMENT_HPP_
#define STANCESHIFT_SENTIMENT_HPP_

#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "stanceshift/annotation.hpp"
#include "stanceshift/common.hpp"
#include "stanceshift/corpus.hpp"

namespace stanceshift::sentiment {

// Valence lexicon plus the rule constants of the scorer. All tokens are
// stored lowercase.
struct SentimentLexicon {
  std::unordered_map<std::string, double> valences;
  std::unordered_map<std::string, double> boosters;
  std::unordered_set<std::string> negators;
  double normalization_alpha = 15.0;
  double negation_scalar = 0.74;
  double caps_boost = 0.733;
  double exclamation_boost = 0.292;
  int max_exclamations = 3;

  // Reads "token<TAB>valence" lines. Section tags "[valence]", "[booster]"
  // (token<TAB>increment), "[negator]" (one token per line) and "[constants]"
  // (name<TAB>value) switch the target; the default section is [valence].
  // Extra tab-separated columns after the valence are ignored, so the
  // reference tool's lexicon file loads directly. '#' starts a comment line.
  static SentimentLexicon read(std::istream& in);
  static SentimentLexicon load(const std::filesystem::path& path);

  // Throws Error when a constant is out of range or a valence is not finite.
  void validate() const;

  bool is_negator(std::string_view lower_token) const;
};

struct SentimentScore {
  double compound = 0.0;
};

// s / sqrt(s^2 + alpha): odd, strictly increasing, bounded by (-1, 1).
double normalize_score(double sum, double alpha);

// Lexicon-and-rule compound score. URLs and mentions are removed before
// tokenizing; a hashtag prefix is dropped with the edge punctuation.
SentimentScore score_text(std::string_view text, const SentimentLexicon& lexicon);

// One score per tweet id, scored on the English text field.
std::map<std::string, SentimentScore> score_corpus(
    std::span<const corpus::TweetRecord> tweets, const SentimentLexicon& lexicon);

// Linear-interpolation quantiles (the "type 7" estimator).
struct DistributionSummary {
  std::size_t n = 0;
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

// Throws Error on empty input.
DistributionSummary summarize(std::vector<double> values);
double median(std::vector<double> values);

struct StanceSentimentGroup {
  std::string country;
  Stance label = kDefaultStance;
  DistributionSummary summary;
};

struct StanceSentimentReport {
  // Sorted by (country, class order); only non-empty groups appear.
  std::vector<StanceSentimentGroup> groups;
  bool empty() const { return groups.empty(); }
};

// Reply sentiment distribution per (country, stance). `reply_scores` and
// `pair_country` are keyed by pair id; labels are joined on pair id and
// pairs without a country are grouped under "ALL". When a pair carries
// several labels, the first one counts.
StanceSentimentReport stance_vs_sentiment_report(
    const std::map<std::string, double>& reply_scores,
    std::span<const annotation::AnnotationRecord> labels,
    const std::map<std::string, std::string>& pair_country = {});

}  // namespace stanceshift::sentiment

#endif  // STANCESHIFT_SENTIMENT_HPP_
