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

#include "stanceshift/sentiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <set>

#include "stanceshift/text.hpp"

namespace stanceshift::sentiment {
namespace {

enum class Section { kValence, kBooster, kNegator, kConstants };

double parse_number(std::string_view s, std::size_t lineno) {
  const std::string v(trim(s));
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw Error("lexicon line " + std::to_string(lineno) + ": bad number '" + v + "'");
  }
}

double sign_of(double v) { return v < 0.0 ? -1.0 : 1.0; }

// Scalar multipliers for a booster 1, 2 or 3 tokens before the word.
constexpr double kBoosterDecay[3] = {1.0, 0.95, 0.9};
constexpr int kWindow = 3;

}  // namespace

SentimentLexicon SentimentLexicon::read(std::istream& in) {
  SentimentLexicon lex;
  Section section = Section::kValence;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view v = trim(line);
    if (v.empty() || v.front() == '#') continue;
    if (v.front() == '[' && v.back() == ']') {
      const std::string tag = ascii_lower(v.substr(1, v.size() - 2));
      if (tag == "valence" || tag == "valences") {
        section = Section::kValence;
      } else if (tag == "booster" || tag == "boosters") {
        section = Section::kBooster;
      } else if (tag == "negator" || tag == "negators") {
        section = Section::kNegator;
      } else if (tag == "constants") {
        section = Section::kConstants;
      } else {
        throw Error("lexicon line " + std::to_string(lineno) + ": unknown section " +
                    std::string(v));
      }
      continue;
    }
    const auto fields = split(v, '\t');
    const std::string token = text::to_lower(trim(fields[0]));
    if (section == Section::kNegator) {
      lex.negators.insert(token);
      continue;
    }
    if (fields.size() < 2) {
      throw Error("lexicon line " + std::to_string(lineno) +
                  ": expected token<TAB>value");
    }
    const double value = parse_number(fields[1], lineno);
    switch (section) {
      case Section::kValence:
        lex.valences[token] = value;
        break;
      case Section::kBooster:
        lex.boosters[token] = value;
        break;
      case Section::kConstants:
        if (token == "normalization_alpha") {
          lex.normalization_alpha = value;
        } else if (token == "negation_scalar") {
          lex.negation_scalar = value;
        } else if (token == "caps_boost") {
          lex.caps_boost = value;
        } else if (token == "exclamation_boost") {
          lex.exclamation_boost = value;
        } else if (token == "max_exclamations") {
          lex.max_exclamations = static_cast<int>(value);
        } else {
          throw Error("lexicon line " + std::to_string(lineno) +
                      ": unknown constant '" + token + "'");
        }
        break;
      case Section::kNegator:
        break;
    }
  }
  lex.validate();
  return lex;
}

SentimentLexicon SentimentLexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open lexicon " + path.string());
  return read(in);
}

void SentimentLexicon::validate() const {
  if (!(normalization_alpha > 0.0) || !std::isfinite(normalization_alpha)) {
    throw Error("normalization_alpha must be positive");
  }
  if (!(negation_scalar > 0.0 && negation_scalar < 1.0)) {
    throw Error("negation_scalar must lie in (0, 1)");
  }
  if (max_exclamations < 0) throw Error("max_exclamations must be non-negative");
  for (const auto& [tok, v] : valences) {
    if (!std::isfinite(v)) throw Error("non-finite valence for '" + tok + "'");
  }
  for (const auto& [tok, v] : boosters) {
    if (!std::isfinite(v)) throw Error("non-finite booster for '" + tok + "'");
  }
}

bool SentimentLexicon::is_negator(std::string_view lower_token) const {
  if (negators.contains(std::string(lower_token))) return true;
  return lower_token.ends_with("n't") || lower_token.ends_with("n\xE2\x80\x99t");
}

double normalize_score(double sum, double alpha) {
  return sum / std::sqrt(sum * sum + alpha);
}

SentimentScore score_text(std::string_view input, const SentimentLexicon& lexicon) {
  const std::string cleaned = text::strip_urls_and_mentions(text::normalize_nfc(input));
  text::TokenizeOptions opts;
  opts.lowercase = false;
  const std::vector<std::string> tokens = text::tokenize(cleaned, opts);
  if (tokens.empty()) return {};

  std::vector<std::string> lower;
  lower.reserve(tokens.size());
  std::size_t caps = 0;
  std::vector<bool> is_caps(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    lower.push_back(text::to_lower(tokens[i]));
    is_caps[i] = text::is_all_caps(tokens[i]);
    caps += is_caps[i] ? 1 : 0;
  }
  // Emphasis by capitals only counts when the text mixes case.
  const bool caps_differential = caps > 0 && caps < tokens.size();

  double sum = 0.0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (lexicon.boosters.contains(lower[i])) continue;
    const auto it = lexicon.valences.find(lower[i]);
    if (it == lexicon.valences.end() || it->second == 0.0) continue;
    double v = it->second;
    const double dir = sign_of(v);
    if (caps_differential && is_caps[i]) v += dir * lexicon.caps_boost;

    bool negated = false;
    for (int d = 1; d <= kWindow && static_cast<std::size_t>(d) <= i; ++d) {
      const std::size_t j = i - static_cast<std::size_t>(d);
      if (lexicon.is_negator(lower[j])) negated = true;
      const auto b = lexicon.boosters.find(lower[j]);
      if (b == lexicon.boosters.end() || lexicon.valences.contains(lower[j])) continue;
      double scalar = dir * b->second;
      if (caps_differential && is_caps[j]) scalar += dir * lexicon.caps_boost;
      v += scalar * kBoosterDecay[d - 1];
    }
    if (negated) v *= -lexicon.negation_scalar;
    sum += v;
  }

  if (sum != 0.0) {
    const auto marks = std::count(cleaned.begin(), cleaned.end(), '!');
    const auto capped = std::min<long>(marks, lexicon.max_exclamations);
    sum += sign_of(sum) * static_cast<double>(capped) * lexicon.exclamation_boost;
  }
  const double compound = normalize_score(sum, lexicon.normalization_alpha);
  return {std::clamp(compound, -1.0, 1.0)};
}

std::map<std::string, SentimentScore> score_corpus(
    std::span<const corpus::TweetRecord> tweets, const SentimentLexicon& lexicon) {
  std::map<std::string, SentimentScore> out;
  for (const auto& t : tweets) out.emplace(t.id, score_text(t.english_text(), lexicon));
  return out;
}

namespace {

double quantile_sorted(const std::vector<double>& v, double q) {
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return v[lo] + (v[hi] - v[lo]) * frac;
}

}  // namespace

DistributionSummary summarize(std::vector<double> values) {
  if (values.empty()) throw Error("summarize: empty input");
  std::sort(values.begin(), values.end());
  DistributionSummary s;
  s.n = values.size();
  s.min = values.front();
  s.max = values.back();
  s.q1 = quantile_sorted(values, 0.25);
  s.median = quantile_sorted(values, 0.5);
  s.q3 = quantile_sorted(values, 0.75);
  return s;
}

double median(std::vector<double> values) { return summarize(std::move(values)).median; }

StanceSentimentReport stance_vs_sentiment_report(
    const std::map<std::string, double>& reply_scores,
    std::span<const annotation::AnnotationRecord> labels,
    const std::map<std::string, std::string>& pair_country) {
  std::map<std::string, std::array<std::vector<double>, kNumStances>> grouped;
  std::set<std::string> seen;
  for (const auto& r : labels) {
    if (!seen.insert(r.pair_id).second) continue;
    const auto s = reply_scores.find(r.pair_id);
    if (s == reply_scores.end()) continue;
    const auto c = pair_country.find(r.pair_id);
    const std::string country = c == pair_country.end() ? "ALL" : c->second;
    grouped[country][index_of(r.label)].push_back(s->second);
  }
  StanceSentimentReport rep;
  for (auto& [country, per_class] : grouped) {
    for (Stance st : kAllStances) {
      auto& vals = per_class[index_of(st)];
      if (vals.empty()) continue;
      rep.groups.push_back({country, st, summarize(std::move(vals))});
    }
  }
  return rep;
}

}  // namespace stanceshift::sentiment
