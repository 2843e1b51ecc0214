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

#ifndef STANCESHIFT_CORPUS_HPP_
#define STANCESHIFT_CORPUS_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "stanceshift/common.hpp"
#include "stanceshift/timeutil.hpp"

namespace stanceshift::corpus {

// The eight topic keywords used to select migration-related news.
const std::set<std::string>& migration_keywords();

struct OutletRecord {
  std::string username;
  std::string country;  // ISO-3166 alpha-2, upper case
  std::string display_name;
  std::optional<std::string> external_id;

  bool operator==(const OutletRecord&) const = default;
};

// News accounts keyed by case-insensitive handle.
class OutletRegistry {
 public:
  OutletRegistry() = default;

  // Throws Error on duplicate or empty handles and malformed country codes.
  static OutletRegistry from_records(std::vector<OutletRecord> records);

  // Header: username,country,display_name,external_id
  static OutletRegistry load(const std::filesystem::path& path);
  static OutletRegistry read(std::istream& in);

  const OutletRecord* find(std::string_view username) const;
  const std::vector<OutletRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

 private:
  std::vector<OutletRecord> records_;
  std::unordered_map<std::string, std::size_t> by_handle_;
};

struct TweetRecord {
  std::string id;
  std::string author;
  Timestamp created_at{};
  std::string lang;  // primary subtag, lower case
  std::string text;
  std::optional<std::string> translated_text;
  std::optional<std::string> reply_to_id;
  std::uint64_t reply_count = 0;
  std::optional<std::string> country;

  bool is_reply() const { return reply_to_id.has_value(); }
  // The English rendering used for keyword matching and sentiment.
  const std::string& english_text() const {
    return translated_text ? *translated_text : text;
  }

  bool operator==(const TweetRecord&) const = default;
};

// One JSON object per line. Throws Error with a reason on malformed input.
TweetRecord parse_tweet_json(std::string_view line);
std::string to_json_line(const TweetRecord& t);

struct LoadOptions {
  // When set, records outside the window are quarantined.
  std::optional<TimeWindow> study_window;
};

// Immutable set of validated tweets plus the report of what was quarantined
// while building it.
class Corpus {
 public:
  Corpus() = default;

  // Validates `records` in order; the first occurrence of an id wins.
  // Non-reply records from authors missing in a non-empty registry are
  // rejected. News records inherit their outlet's country, replies inherit
  // the country of the tweet they answer. `line_numbers`, when given, is
  // parallel to `records` and used in rejection entries.
  static Corpus build(std::vector<TweetRecord> records,
                      const OutletRegistry& registry,
                      const LoadOptions& opts = {},
                      RejectionReport prior_rejections = {},
                      std::span<const std::size_t> line_numbers = {});

  const std::vector<TweetRecord>& records() const { return records_; }
  const RejectionReport& rejections() const { return rejections_; }
  std::size_t size() const { return records_.size(); }

  const TweetRecord* find(std::string_view id) const;

  // Non-reply records, in load order.
  std::vector<const TweetRecord*> news() const;
  std::size_t news_count() const;
  std::size_t reply_count() const { return size() - news_count(); }

  // Direct replies per parent id, in load order.
  const std::vector<std::size_t>& replies_to(std::string_view id) const;

  // Same records regardless of order.
  bool same_records(const Corpus& other) const;

 private:
  std::vector<TweetRecord> records_;
  RejectionReport rejections_;
  std::unordered_map<std::string, std::size_t> by_id_;
  std::unordered_map<std::string, std::vector<std::size_t>> children_;
};

// Throws Error when the file cannot be opened; bad lines are quarantined.
Corpus load_corpus(const std::filesystem::path& path,
                   const OutletRegistry& registry, const LoadOptions& opts = {});
Corpus load_corpus(std::istream& in, const OutletRegistry& registry,
                   const LoadOptions& opts = {});

// News records whose English text contains at least one keyword as a whole
// token. Sorted by (created_at, id).
std::vector<TweetRecord> filter_topic_news(const Corpus& corpus,
                                           const std::set<std::string>& keywords);
std::vector<TweetRecord> filter_topic_news(std::span<const TweetRecord> news,
                                           const std::set<std::string>& keywords);

bool matches_keywords(const TweetRecord& t, const std::set<std::string>& keywords);

// "<news id>:<reply id>"
std::string make_pair_id(std::string_view news_id, std::string_view reply_id);
// Inverse of make_pair_id; nullopt when the id has no separator.
std::optional<std::pair<std::string, std::string>> split_pair_id(
    std::string_view pair_id);

struct ConversationPair {
  std::string pair_id;
  TweetRecord news;
  TweetRecord reply;

  bool operator==(const ConversationPair&) const = default;
};

struct PairSet {
  std::vector<ConversationPair> pairs;
  RejectionReport rejections;
};

// One pair per (news, direct reply) for the given news ids whose observed
// number of direct replies in the corpus is at least `min_replies`. Replies
// whose parent id is absent from the corpus are reported.
PairSet build_pairs(const Corpus& corpus, const std::set<std::string>& news_ids,
                    std::size_t min_replies);

// Keeps pairs whose reply language equals `lang` (case-insensitive). Pairs
// whose reply has no language tag are reported, not kept.
PairSet filter_replies_language(std::span<const ConversationPair> pairs,
                                std::string_view lang);

// Pairs file: one JSON object per line holding the pair id and both tweets.
void write_pairs(std::ostream& out, std::span<const ConversationPair> pairs);
PairSet read_pairs(std::istream& in);
PairSet read_pairs(const std::filesystem::path& path);

struct LabelPointer {
  std::string pair_id;
  std::string annotator_id;

  auto operator<=>(const LabelPointer&) const = default;
};

// Ids sufficient to rehydrate a dataset. Carries no text and no labels.
struct RehydrationManifest {
  std::vector<std::string> outlet_usernames;
  std::vector<std::string> news_ids;
  std::vector<std::string> reply_ids;
  std::vector<LabelPointer> label_pointers;

  // Throws Error on duplicate ids or label pointers naming unknown tweets.
  void validate() const;
  std::size_t id_count() const { return news_ids.size() + reply_ids.size(); }

  // Sections "#outlets", "#news_ids", "#reply_ids", "#label_pointers", one
  // entry per line; label pointers are "pair_id<TAB>annotator_id".
  void write(std::ostream& out) const;
  static RehydrationManifest read(std::istream& in);

  bool operator==(const RehydrationManifest&) const = default;
};

RehydrationManifest export_manifest(const Corpus& corpus);
RehydrationManifest export_manifest(std::span<const ConversationPair> pairs,
                                    std::span<const LabelPointer> labels = {});

struct ImportResult {
  Corpus corpus;
  std::size_t expected = 0;
  std::size_t found = 0;
  std::vector<std::string> missing_ids;

  double coverage() const {
    return expected == 0 ? 0.0 : static_cast<double>(found) / expected;
  }
};

// Restores a corpus from a hydration source (tweet JSON lines). Records whose
// id is not in the manifest are rejected. Throws Error when no manifest id is
// covered.
ImportResult import_manifest(const RehydrationManifest& manifest,
                             std::istream& hydrated,
                             const OutletRegistry& registry);

}  // namespace stanceshift::corpus

#endif  // STANCESHIFT_CORPUS_HPP_
