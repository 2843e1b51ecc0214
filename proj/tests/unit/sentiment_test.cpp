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

#include "doctest.h"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "stanceshift/sentiment.hpp"
#include "stanceshift/text.hpp"
#include "test_support.hpp"

using namespace stanceshift;
using namespace stanceshift::sentiment;

namespace {

const SentimentLexicon& lexicon() {
  static const SentimentLexicon lex =
      SentimentLexicon::load(testing::data_dir() / "lexicon" / "sentiment_lexicon.tsv");
  return lex;
}

double score(std::string_view s) { return score_text(s, lexicon()).compound; }

SentimentLexicon tiny() {
  std::istringstream in(
      "good\t1.9\n"
      "bad\t-2.5\n"
      "[booster]\nvery\t0.293\n"
      "[negator]\nnot\n");
  return SentimentLexicon::read(in);
}

}  // namespace

TEST_CASE("lexicon file sections and constants") {
  const auto& lex = lexicon();
  CHECK(lex.valences.size() >= 100);
  CHECK(lex.valences.at("good") == doctest::Approx(1.9));
  CHECK(lex.boosters.count("very") == 1);
  CHECK(lex.is_negator("not"));
  CHECK(lex.is_negator("doesn't"));
  CHECK(lex.normalization_alpha == 15.0);
  CHECK(lex.negation_scalar == doctest::Approx(0.74));
  CHECK(lex.caps_boost == doctest::Approx(0.733));
  CHECK(lex.exclamation_boost == doctest::Approx(0.292));
  CHECK(lex.max_exclamations == 3);
  for (const auto& [tok, v] : lex.valences) CHECK(text::to_lower(tok) == tok);
}

TEST_CASE("lexicon ignores extra columns and comments, rejects bad constants") {
  std::istringstream ok("# comment\nGood\t1.9\t0.5\t[1, 2]\n");
  const auto lex = SentimentLexicon::read(ok);
  CHECK(lex.valences.at("good") == doctest::Approx(1.9));
  std::istringstream bad("[constants]\nnormalization_alpha\t-1\n");
  CHECK_THROWS_AS(SentimentLexicon::read(bad), Error);
  std::istringstream neg("[constants]\nnegation_scalar\t1.5\n");
  CHECK_THROWS_AS(SentimentLexicon::read(neg), Error);
}

TEST_CASE("hand-computed examples") {
  const auto lex = tiny();
  CHECK(score_text("", lex).compound == 0.0);
  CHECK(score_text("nothing here at all", lex).compound == 0.0);
  CHECK(score_text("good", lex).compound == doctest::Approx(1.9 / std::sqrt(18.61)).epsilon(1e-12));
  CHECK(score_text("good", lex).compound == doctest::Approx(0.440).epsilon(1e-3));
  const double s = -0.74 * 1.9;
  CHECK(score_text("not good", lex).compound ==
        doctest::Approx(s / std::sqrt(s * s + 15.0)).epsilon(1e-12));
  CHECK(score_text("not good", lex).compound == doctest::Approx(-0.3412).epsilon(1e-3));
  const double boosted = 1.9 + 0.293;
  CHECK(score_text("very good", lex).compound ==
        doctest::Approx(boosted / std::sqrt(boosted * boosted + 15.0)).epsilon(1e-12));
  const double excl = 1.9 + 3 * 0.292;
  CHECK(score_text("good!!!!!", lex).compound ==
        doctest::Approx(excl / std::sqrt(excl * excl + 15.0)).epsilon(1e-12));
  const double caps = 1.9 + 0.733;
  CHECK(score_text("GOOD day", lex).compound ==
        doctest::Approx(caps / std::sqrt(caps * caps + 15.0)).epsilon(1e-12));
  // A fully upper-case text carries no emphasis contrast.
  CHECK(score_text("GOOD", lex).compound == doctest::Approx(score_text("good", lex).compound));
  CHECK(score_text("@good https://good.example good", lex).compound ==
        doctest::Approx(score_text("good", lex).compound));
  CHECK(score_text("#good", lex).compound == doctest::Approx(score_text("good", lex).compound));
}

TEST_CASE("normalization is odd and strictly increasing") {
  double prev = normalize_score(-1000.0, 15.0);
  for (double s = -999.5; s <= 1000.0; s += 0.5) {
    const double v = normalize_score(s, 15.0);
    CHECK(v > prev);
    CHECK(normalize_score(-s, 15.0) == -v);
    CHECK(std::abs(v) < 1.0);
    prev = v;
  }
  CHECK(normalize_score(0.0, 15.0) == 0.0);
  CHECK(normalize_score(4.0, 15.0) == doctest::Approx(4.0 / std::sqrt(31.0)));
  CHECK(normalize_score(-2.0, 15.0) == doctest::Approx(-2.0 / std::sqrt(19.0)));
}

TEST_CASE("fuzz: compound stays in [-1, 1]") {
  std::mt19937_64 rng(99);
  std::vector<std::string> words;
  for (const auto& [w, v] : lexicon().valences) words.push_back(w);
  for (const auto& [w, v] : lexicon().boosters) words.push_back(w);
  for (const auto& w : lexicon().negators) words.push_back(w);
  const std::vector<std::string> extras = {"!", "!!!!!!", "?", "@x", "http://a", "#", "\xE2\x80\x94",
                                           "\xF0\x9F\x98\x80", "\xC5\x81", "\t", "\xFF\xFE", "n't"};
  for (int i = 0; i < 10000; ++i) {
    std::string s;
    const int len = static_cast<int>(rng() % 40);
    for (int j = 0; j < len; ++j) {
      switch (rng() % 4) {
        case 0: {
          std::string w = words[rng() % words.size()];
          if (rng() % 3 == 0) for (auto& c : w) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
          s += w;
          break;
        }
        case 1: s += extras[rng() % extras.size()]; break;
        case 2: s += static_cast<char>(rng() % 256); break;
        default: s += ' ';
      }
      if (rng() % 2) s += ' ';
    }
    const double c = score(s);
    REQUIRE(std::isfinite(c));
    REQUIRE(c >= -1.0);
    REQUIRE(c <= 1.0);
  }
}

TEST_CASE("booster monotonicity") {
  for (const auto& [b, inc] : lexicon().boosters) {
    if (inc <= 0.0) continue;
    for (const auto& [w, v] : lexicon().valences) {
      if (lexicon().boosters.count(w) || lexicon().is_negator(w)) continue;
      const double plain = score(w);
      const double boosted = score(b + " " + w);
      if (v > 0) CHECK_MESSAGE(boosted >= plain, b << " " << w);
      if (v < 0) CHECK_MESSAGE(boosted <= plain, b << " " << w);
    }
  }
}

TEST_CASE("dampeners shrink magnitude") {
  for (const char* d : {"slightly", "barely"}) {
    CHECK(score(std::string(d) + " good") < score("good"));
    CHECK(score(std::string(d) + " bad") > score("bad"));
  }
}

TEST_CASE("negation flips the sign of a single lexicon token") {
  for (const auto& [w, v] : lexicon().valences) {
    if (v == 0.0 || lexicon().boosters.count(w) || lexicon().is_negator(w)) continue;
    const double plain = score(w);
    for (const char* neg : {"not", "never", "isn't"}) {
      const double negated = score(std::string(neg) + " " + w);
      CHECK_MESSAGE(std::signbit(negated) != std::signbit(plain), neg << " " << w);
      CHECK(negated != 0.0);
    }
    // A negator up to three tokens back still applies; four back does not.
    CHECK(std::signbit(score("not the very " + w)) != std::signbit(plain));
    CHECK(std::signbit(score("not a b c " + w)) == std::signbit(plain));
  }
}

TEST_CASE("signed sentence fixture") {
  std::ifstream in(testing::data_dir() / "lexicon" / "signed_sentences.tsv");
  REQUIRE(in);
  std::string line;
  int total = 0;
  int correct = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    REQUIRE(tab != std::string::npos);
    const double c = score(line.substr(tab + 1));
    ++total;
    if ((line[0] == '+' && c > 0) || (line[0] == '-' && c < 0)) ++correct;
  }
  CHECK(total == 20);
  CHECK(correct >= 18);
}

TEST_CASE("score_corpus keys by id and ignores order") {
  auto a = testing::news("1", "x", "2022-03-01T00:00:00Z", "ignored");
  a.translated_text = "a good day";
  const auto b = testing::news("2", "x", "2022-03-01T00:00:00Z", "a terrible day");
  std::vector<corpus::TweetRecord> v = {a, b};
  const auto m = score_corpus(v, lexicon());
  CHECK(m.size() == 2);
  CHECK(m.at("1").compound > 0);
  CHECK(m.at("2").compound < 0);
  std::vector<corpus::TweetRecord> r = {b, a};
  const auto m2 = score_corpus(r, lexicon());
  CHECK(m2.at("1").compound == m.at("1").compound);
  CHECK(m2.at("2").compound == m.at("2").compound);
}

TEST_CASE("type-7 quantile summary") {
  const auto s = summarize({4.0, 1.0, 3.0, 2.0});
  CHECK(s.n == 4);
  CHECK(s.min == 1.0);
  CHECK(s.q1 == doctest::Approx(1.75));
  CHECK(s.median == doctest::Approx(2.5));
  CHECK(s.q3 == doctest::Approx(3.25));
  CHECK(s.max == 4.0);
  CHECK(median({0.0, 0.0, 0.5, -0.2, 0.3}) == 0.0);
  CHECK_THROWS_AS(summarize({}), Error);
}

TEST_CASE("stance vs sentiment report") {
  using annotation::AnnotationRecord;
  std::map<std::string, double> scores = {{"p1", 0.5}, {"p2", -0.5}, {"p3", 0.1}, {"p4", 0.2}};
  std::vector<AnnotationRecord> neutral = {{"p1", "a", Stance::kNeutral}, {"p2", "a", Stance::kNeutral}};
  const auto one = stance_vs_sentiment_report(scores, neutral);
  REQUIRE(one.groups.size() == 1);
  CHECK(one.groups[0].country == "ALL");
  CHECK(one.groups[0].summary.median == doctest::Approx(0.0));

  std::vector<AnnotationRecord> labels = {{"p1", "a", Stance::kPositive},
                                          {"p2", "a", Stance::kNegative},
                                          {"p2", "b", Stance::kPositive},
                                          {"p3", "a", Stance::kNeutral},
                                          {"p4", "a", Stance::kPositive},
                                          {"zz", "a", Stance::kPositive}};
  std::map<std::string, std::string> country = {{"p1", "PL"}, {"p2", "PL"}, {"p3", "DE"}, {"p4", "DE"}};
  const auto grid = stance_vs_sentiment_report(scores, labels, country);
  REQUIRE(grid.groups.size() == 4);
  CHECK(grid.groups[0].country == "DE");
  CHECK(grid.groups[0].label == Stance::kPositive);
  CHECK(grid.groups[1].label == Stance::kNeutral);
  CHECK(grid.groups[2].country == "PL");
  CHECK(grid.groups[3].label == Stance::kNegative);
  CHECK(grid.groups[3].summary.median == -0.5);

  CHECK(stance_vs_sentiment_report({}, labels).empty());
}

TEST_CASE("labels independent of scores give matching class medians") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::map<std::string, double> scores;
  std::vector<annotation::AnnotationRecord> labels;
  for (int i = 0; i < 30000; ++i) {
    const std::string id = std::to_string(i);
    scores[id] = u(rng);
    labels.push_back({id, "a", kAllStances[rng() % 3]});
  }
  const auto rep = stance_vs_sentiment_report(scores, labels);
  REQUIRE(rep.groups.size() == 3);
  for (const auto& a : rep.groups) {
    for (const auto& b : rep.groups) CHECK(std::abs(a.summary.median - b.summary.median) <= 0.05);
  }
}
