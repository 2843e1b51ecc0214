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

#include "stanceshift/termshift.hpp"

#include <algorithm>
#include <fstream>

#include "stanceshift/text.hpp"
#include "stanceshift/timeutil.hpp"

namespace stanceshift::termshift {

void PreprocessConfig::validate() const {
  for (const auto* list : {&stopwords, &entity_stoplist}) {
    for (const auto& w : *list) {
      if (text::to_lower(w) != w) throw Error("stoplist entry not lowercase: " + w);
    }
  }
  for (const auto& [surface, lemma] : lemma_map) {
    const auto it = lemma_map.find(lemma);
    if (it != lemma_map.end() && it->second != lemma) {
      throw Error("lemma map is not idempotent at '" + surface + "'");
    }
  }
}

std::set<std::string> load_word_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open word list " + path.string());
  std::set<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    const std::string_view v = trim(line);
    if (v.empty() || v.front() == '#') continue;
    out.insert(text::to_lower(v));
  }
  return out;
}

PreprocessConfig PreprocessConfig::load(const std::filesystem::path& stopwords,
                                        const std::filesystem::path& entities,
                                        const std::filesystem::path& lemmas) {
  PreprocessConfig cfg;
  if (!stopwords.empty()) cfg.stopwords = load_word_list(stopwords);
  if (!entities.empty()) cfg.entity_stoplist = load_word_list(entities);
  if (!lemmas.empty()) {
    std::ifstream in(lemmas);
    if (!in) throw Error("cannot open lemma file " + lemmas.string());
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const std::string_view v = trim(line);
      if (v.empty() || v.front() == '#') continue;
      const auto fields = split(v, '\t');
      if (fields.size() != 2) {
        throw Error("lemma file line " + std::to_string(lineno) +
                    ": expected surface<TAB>lemma");
      }
      cfg.lemma_map[text::to_lower(trim(fields[0]))] = text::to_lower(trim(fields[1]));
    }
  }
  cfg.validate();
  return cfg;
}

TokenSequence preprocess_text(std::string_view input, const PreprocessConfig& config) {
  text::TokenizeOptions opts;
  opts.drop_mentions = config.strip_mentions;
  opts.drop_urls = config.strip_urls;
  opts.strip_punct = config.strip_punctuation;
  TokenSequence out;
  for (auto& tok : text::tokenize(input, opts)) {
    if (config.stopwords.contains(tok) || config.entity_stoplist.contains(tok)) continue;
    if (const auto it = config.lemma_map.find(tok); it != config.lemma_map.end()) {
      tok = it->second;
      if (config.stopwords.contains(tok) || config.entity_stoplist.contains(tok)) continue;
    }
    out.push_back(std::move(tok));
  }
  return out;
}

std::vector<TokenSequence> preprocess(std::span<const std::string> texts,
                                      const PreprocessConfig& config) {
  std::vector<TokenSequence> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(preprocess_text(t, config));
  return out;
}

TermRanking rank_frequencies(const std::map<std::string, std::size_t>& frequencies) {
  if (frequencies.empty()) throw Error("cannot rank an empty vocabulary");
  std::vector<std::pair<std::size_t, const std::string*>> order;
  order.reserve(frequencies.size());
  for (const auto& [term, f] : frequencies) order.emplace_back(f, &term);
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first < b.first : *a.second < *b.second;
  });

  TermRanking r;
  r.frequencies = frequencies;
  r.vocab_size = frequencies.size();
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && order[j].first == order[i].first) ++j;
    // Ordinal positions i+1 .. j share their mean.
    const double avg = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t t = i; t < j; ++t) r.ranks.emplace(*order[t].second, avg);
    i = j;
  }
  for (const auto& [term, rank] : r.ranks) r.rank_sum += rank;
  return r;
}

std::map<std::string, std::size_t> count_ngrams(std::span<const TokenSequence> sequences,
                                                std::size_t n) {
  if (n == 0) throw Error("n-gram order must be positive");
  std::map<std::string, std::size_t> counts;
  for (const auto& seq : sequences) {
    if (seq.size() < n) continue;
    for (std::size_t i = 0; i + n <= seq.size(); ++i) {
      std::string gram = seq[i];
      for (std::size_t k = 1; k < n; ++k) {
        gram += ' ';
        gram += seq[i + k];
      }
      ++counts[gram];
    }
  }
  return counts;
}

TermRanking rank_terms(std::span<const TokenSequence> sequences, std::size_t n) {
  const auto counts = count_ngrams(sequences, n);
  if (counts.empty()) throw Error("corpus yields no terms to rank");
  return rank_frequencies(counts);
}

std::vector<RankDiffScore> rank_difference(const TermRanking& foreground,
                                           const TermRanking& background) {
  if (foreground.ranks.empty()) throw Error("foreground ranking is empty");
  std::vector<RankDiffScore> out;
  out.reserve(foreground.ranks.size());
  for (const auto& [term, rank] : foreground.ranks) {
    double tau = rank / foreground.rank_sum;
    if (background.rank_sum > 0.0) tau -= background.rank_of(term) / background.rank_sum;
    out.push_back({term, tau});
  }
  std::sort(out.begin(), out.end(), [](const RankDiffScore& a, const RankDiffScore& b) {
    return a.tau != b.tau ? a.tau > b.tau : a.term < b.term;
  });
  return out;
}

namespace {

ShiftColumn shift_column(const std::string& group, const PeriodCorpus& fg,
                         const PeriodCorpus& bg, std::size_t k, std::size_t ngram) {
  ShiftColumn col{group, fg.period, bg.period, {}, {}};
  const auto fg_counts = count_ngrams(fg.sequences, ngram);
  if (fg_counts.empty()) {
    col.notice = "no terms in period " + fg.period;
    return col;
  }
  const auto bg_counts = count_ngrams(bg.sequences, ngram);
  if (bg_counts.empty()) {
    col.notice = "no terms in period " + bg.period;
    return col;
  }
  auto scores = rank_difference(rank_frequencies(fg_counts), rank_frequencies(bg_counts));
  if (scores.size() > k) scores.resize(k);
  col.terms = std::move(scores);
  return col;
}

}  // namespace

std::vector<ShiftColumn> top_k_shift(const std::string& group, const PeriodCorpus& a,
                                     const PeriodCorpus& b, std::size_t k,
                                     std::size_t ngram) {
  if (a.period == b.period) {
    throw Error("foreground and background periods must differ");
  }
  return {shift_column(group, a, b, k, ngram), shift_column(group, b, a, k, ngram)};
}

std::vector<ShiftColumn> top_k_shift_by_country(std::span<const corpus::TweetRecord> news,
                                                std::string_view foreground_month,
                                                std::string_view background_month,
                                                const PreprocessConfig& config,
                                                std::size_t k, bool include_all) {
  const auto fg_window = parse_month_window(foreground_month);
  const auto bg_window = parse_month_window(background_month);
  if (!fg_window || !bg_window) throw Error("month windows must be YYYY-MM");
  if (foreground_month == background_month) {
    throw Error("foreground and background windows must be disjoint");
  }

  std::map<std::string, std::pair<PeriodCorpus, PeriodCorpus>> groups;
  const auto add = [&](const std::string& g, const corpus::TweetRecord& t) {
    auto& [fg, bg] = groups[g];
    fg.period = std::string(foreground_month);
    bg.period = std::string(background_month);
    if (fg_window->contains(t.created_at)) {
      fg.sequences.push_back(preprocess_text(t.english_text(), config));
    } else if (bg_window->contains(t.created_at)) {
      bg.sequences.push_back(preprocess_text(t.english_text(), config));
    }
  };
  for (const auto& t : news) {
    if (t.is_reply()) continue;
    add(t.country.value_or("??"), t);
    if (include_all) add("ALL", t);
  }
  std::vector<ShiftColumn> out;
  for (const auto& [group, periods] : groups) {
    auto cols = top_k_shift(group, periods.first, periods.second, k);
    for (auto& c : cols) out.push_back(std::move(c));
  }
  return out;
}

}  // namespace stanceshift::termshift
