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

#include <algorithm>
#include <random>
#include <sstream>

#include "stanceshift/series.hpp"
#include "test_support.hpp"

using namespace stanceshift;
using namespace stanceshift::series;

namespace {

std::vector<TimedValue> one_bucket(const std::vector<double>& vals) {
  std::vector<TimedValue> out;
  int h = 0;
  for (double v : vals) {
    char ts[32];
    std::snprintf(ts, sizeof ts, "2022-03-02T%02d:00:00Z", h++);
    out.push_back({testing::at(ts), v});
  }
  return out;
}

std::vector<SeriesPoint> weekly(std::span<const double> values, const std::string& year = "2030") {
  std::vector<SeriesPoint> out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    char key[32];
    std::snprintf(key, sizeof key, "%s-%04zu", year.c_str(), i);
    out.push_back({key, values[i], 1});
  }
  return out;
}

}  // namespace

TEST_CASE("median series with and without zero exclusion") {
  const auto vals = one_bucket({0, 0, 0.5, -0.2, 0.3});
  const auto ex = median_sentiment_series(vals, Bucketing::kWeek, true);
  REQUIRE(ex.size() == 1);
  CHECK(ex[0].value == 0.3);
  CHECK(ex[0].n == 3);
  const auto in = median_sentiment_series(vals, Bucketing::kWeek, false);
  REQUIRE(in.size() == 1);
  CHECK(in[0].value == 0.0);
  CHECK(in[0].n == 5);
  CHECK(median_sentiment_series(one_bucket({0, 0}), Bucketing::kWeek, true).empty());
}

TEST_CASE("median series buckets are chronological and order-free") {
  std::vector<TimedValue> vals = {{testing::at("2022-03-20T00:00:00Z"), 0.4},
                                  {testing::at("2021-12-31T00:00:00Z"), -0.2},
                                  {testing::at("2022-03-21T00:00:00Z"), 0.1},
                                  {testing::at("2022-01-02T00:00:00Z"), 0.6}};
  const auto w = median_sentiment_series(vals, Bucketing::kWeek, true);
  REQUIRE(w.size() == 3);
  CHECK(w[0].bucket == "2021-W52");
  CHECK(w[0].value == doctest::Approx(0.2));
  CHECK(w[1].bucket == "2022-W11");
  CHECK(w[2].bucket == "2022-W12");
  const auto m = median_sentiment_series(vals, Bucketing::kMonth, true);
  REQUIRE(m.size() == 3);
  CHECK(m[0].bucket == "2021-12");
  CHECK(m[2].value == doctest::Approx(0.25));

  std::mt19937 rng(2);
  for (int i = 0; i < 5; ++i) {
    std::shuffle(vals.begin(), vals.end(), rng);
    CHECK(median_sentiment_series(vals, Bucketing::kWeek, true) == w);
  }
}

TEST_CASE("stance series arithmetic") {
  const auto t = testing::at("2022-03-02T00:00:00Z");
  std::vector<TimedLabel> labels = {{t, Stance::kPositive}, {t, Stance::kPositive},
                                    {t, Stance::kNegative}, {t, Stance::kNeutral}};
  const auto s = stance_series(labels, Bucketing::kMonth, StanceScalar::kSignedMean);
  REQUIRE(s.size() == 1);
  CHECK(s[0].shares[0] == 0.5);
  CHECK(s[0].shares[1] == 0.25);
  CHECK(s[0].shares[2] == 0.25);
  CHECK(s[0].value == 0.25);
  CHECK(s[0].n == 4);
  const auto share = stance_series(labels, Bucketing::kMonth, StanceScalar::kPositiveShare);
  CHECK(share[0].value == 0.5);
  const auto sc = scalar_series(s);
  REQUIRE(sc.size() == 1);
  CHECK(sc[0] == SeriesPoint{"2022-03", 0.25, 4});

  std::vector<TimedLabel> neutral = {{t, Stance::kNeutral}, {t, Stance::kNeutral}};
  CHECK(stance_series(neutral, Bucketing::kWeek, StanceScalar::kPositiveShare)[0].value == 0.0);
  CHECK(stance_series(neutral, Bucketing::kWeek, StanceScalar::kSignedMean)[0].value == 0.0);
  CHECK(signed_stance(Stance::kNegative) == -1.0);
  CHECK(parse_stance_scalar("positive_share") == StanceScalar::kPositiveShare);
  CHECK(stance_scalar_name(StanceScalar::kSignedMean) == "signed_mean");
}

TEST_CASE("fixture shares sum to one and show the February step") {
  const auto labels = testing::fixture_timed_labels();
  REQUIRE(labels.size() >= 500);
  for (auto b : {Bucketing::kWeek, Bucketing::kMonth}) {
    for (const auto& p : stance_series(labels, b, StanceScalar::kPositiveShare)) {
      CHECK(std::abs(p.shares[0] + p.shares[1] + p.shares[2] - 1.0) <= 1e-9);
      CHECK(p.n >= 1);
    }
  }
  std::size_t pos_before = 0, n_before = 0, pos_after = 0, n_after = 0;
  const auto shift = testing::at("2022-02-24T00:00:00Z");
  for (const auto& l : labels) {
    auto& pos = l.time < shift ? pos_before : pos_after;
    auto& n = l.time < shift ? n_before : n_after;
    pos += l.label == Stance::kPositive;
    ++n;
  }
  const double before = static_cast<double>(pos_before) / n_before;
  const double after = static_cast<double>(pos_after) / n_after;
  CHECK(after - before >= 0.25);

  const auto monthly = stance_series(labels, Bucketing::kMonth, StanceScalar::kPositiveShare);
  double jan = -1, mar = -1;
  for (const auto& p : monthly) {
    if (p.bucket == "2022-01") jan = p.value;
    if (p.bucket == "2022-03") mar = p.value;
  }
  REQUIRE(jan >= 0);
  REQUIRE(mar >= 0);
  CHECK(mar - jan >= 0.2);
}

TEST_CASE("granger detects a lagged dependency and stays nested") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> x(200), y(200);
  for (std::size_t t = 0; t < x.size(); ++t) {
    x[t] = g(rng);
    y[t] = (t ? 0.8 * x[t - 1] : 0.0) + g(rng);
  }
  const auto r = granger_single(x, y, 1);
  REQUIRE(r.ok());
  CHECK(r.p_value < 1e-6);
  CHECK(r.df_num == 1);
  CHECK(r.n_used == 199);
  CHECK(r.df_den == 199 - 3);
  CHECK(r.rss_unrestricted <= r.rss_restricted);
  const double f = ((r.rss_restricted - r.rss_unrestricted) / 1.0) / (r.rss_unrestricted / r.df_den);
  CHECK(r.f_stat == doctest::Approx(f));

  const auto back = granger_single(y, x, 1);
  REQUIRE(back.ok());
  CHECK(back.p_value > 0.001);
}

TEST_CASE("granger degenerate and insufficient inputs") {
  const std::vector<double> flat(30, 0.5);
  std::vector<double> y(30);
  std::mt19937 rng(1);
  for (auto& v : y) v = static_cast<double>(rng() % 100) / 100.0;
  const auto d = granger_single(flat, y, 2);
  CHECK(d.status == GrangerStatus::kDegenerate);
  CHECK_FALSE(d.ok());
  CHECK_FALSE(d.message.empty());

  const std::vector<double> a = {0.1, 0.5, 0.2, 0.9, 0.3, 0.8, 0.4, 0.7};
  const std::vector<double> b = {0.3, 0.1, 0.6, 0.2, 0.9, 0.4, 0.5, 0.1};
  // n_used 7 with lag 1 leaves 4 residual dof.
  CHECK(granger_single(a, b, 1).status == GrangerStatus::kInsufficient);
  std::vector<double> a9 = a, b9 = b;
  a9.push_back(0.6);
  b9.push_back(0.2);
  CHECK(granger_single(a9, b9, 1).df_den == kMinResidualDof);
  CHECK(granger_single(a9, b9, 1).status != GrangerStatus::kInsufficient);
  CHECK(granger_status_name(GrangerStatus::kDegenerate) == "degenerate");
}

TEST_CASE("granger_test joins on buckets and covers both directions") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> xv(60), yv(60);
  for (std::size_t t = 0; t < 60; ++t) {
    xv[t] = g(rng);
    yv[t] = (t ? 0.9 * xv[t - 1] : 0.0) + 0.3 * g(rng);
  }
  auto x = weekly(xv);
  auto y = weekly(yv);
  y.erase(y.begin() + 30);  // missing bucket dropped pairwise
  x.push_back({"2031-0001", 1.0, 1});
  const auto res = granger_test(x, y, 3, "sent", "stance");
  REQUIRE(res.size() == 6);
  for (int i = 0; i < 3; ++i) {
    CHECK(res[i].cause == "sent");
    CHECK(res[i].effect == "stance");
    CHECK(res[i].lag == i + 1);
    CHECK(res[i + 3].cause == "stance");
    CHECK(res[i].n_used == 59 - static_cast<std::size_t>(i + 1));
  }
  CHECK(res[0].p_value < 1e-6);
  for (const auto& r : res) {
    if (r.ok()) CHECK(r.rss_unrestricted <= r.rss_restricted);
  }
}

TEST_CASE("series csv round trips") {
  const std::vector<SeriesPoint> pts = {{"2022-W01", 0.25, 3}, {"2022-W02", -0.125, 1}};
  std::stringstream buf;
  write_series_csv(buf, pts);
  CHECK(buf.str().rfind("bucket,value,n\n", 0) == 0);
  CHECK(read_series_csv(buf) == pts);

  std::istringstream unsorted("bucket,value,n\n2022-W02,0.1,1\n2022-W01,0.2,1\n");
  CHECK_THROWS_AS(read_series_csv(unsorted), Error);

  std::vector<StancePoint> sp = {{"2022-03", {0.5, 0.25, 0.25}, 4, 0.25}};
  std::stringstream sbuf;
  write_stance_csv(sbuf, sp);
  const auto back = read_stance_csv(sbuf);
  REQUIRE(back.size() == 1);
  CHECK(back[0].bucket == "2022-03");
  CHECK(back[0].shares[1] == doctest::Approx(0.25));
  CHECK(back[0].n == 4);

  GrangerResult r;
  r.cause = "x";
  r.effect = "y";
  r.lag = 1;
  r.status = GrangerStatus::kDegenerate;
  std::ostringstream gout;
  write_granger_csv(gout, std::vector<GrangerResult>{r});
  CHECK(gout.str().find("x,y,1,degenerate") != std::string::npos);
}
