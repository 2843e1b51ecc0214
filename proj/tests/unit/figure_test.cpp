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

#include <sstream>

#include "stanceshift/figure.hpp"
#include "test_support.hpp"

using namespace stanceshift;
using namespace stanceshift::figure;

namespace {

std::size_t count(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) ++n;
  return n;
}

const NamedSeries kSent{"news_sentiment", {{"2022-W01", 0.1, 5}, {"2022-W02", -0.2, 4}, {"2022-W03", 0.3, 2}}};
const NamedSeries kStance{"reply_stance", {{"2022-W02", 0.5, 9}, {"2022-W03", -0.1, 7}}};

}  // namespace

TEST_CASE("figure kind names") {
  CHECK(parse_figure_kind("dual-axis-lines") == FigureKind::kDualAxisLines);
  CHECK(parse_figure_kind("stacked-shares") == FigureKind::kStackedShares);
  CHECK(parse_figure_kind("stacked-shares+volume-bars") == FigureKind::kStackedShares);
  CHECK_FALSE(parse_figure_kind("pie").has_value());
  CHECK(figure_kind_name(FigureKind::kDualAxisLines) == "dual-axis-lines");
}

TEST_CASE("dual-axis chart has two lines and a legend per series") {
  const auto svg = render_dual_axis(kSent, kStance, "Sentiment & stance <PL>");
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(count(svg, "<polyline") == 2);
  CHECK(svg.find("news_sentiment") != std::string::npos);
  CHECK(svg.find("reply_stance") != std::string::npos);
  CHECK(svg.find("Sentiment &amp; stance &lt;PL&gt;") != std::string::npos);
  CHECK(svg.find("2022-W01") != std::string::npos);
  CHECK(svg == render_dual_axis(kSent, kStance, "Sentiment & stance <PL>"));
}

TEST_CASE("stacked shares over volume bars") {
  const std::vector<series::StancePoint> pts = {{"2022-01", {0.2, 0.5, 0.3}, 10, 0.2},
                                                {"2022-02", {0.3, 0.4, 0.3}, 20, 0.3},
                                                {"2022-03", {0.6, 0.15, 0.25}, 15, 0.6}};
  const auto svg = render_stance_breakdown(pts, "Breakdown");
  CHECK(count(svg, "<polygon") == 3);
  CHECK(count(svg, "<rect") >= 3 + 4);
  for (const char* name : {"Positive", "Negative", "Neutral", "replies"}) {
    CHECK(svg.find(name) != std::string::npos);
  }
}

TEST_CASE("single points and empty input") {
  const NamedSeries one{"only", {{"2022-W05", 0.4, 1}}};
  CHECK_NOTHROW(render_dual_axis(one, NamedSeries{"empty", {}}, "one"));
  const std::vector<series::StancePoint> single = {{"2022-03", {1.0, 0.0, 0.0}, 3, 1.0}};
  const auto s = render_stance_breakdown(single, "single");
  CHECK(count(s, "<polygon") == 3);
  const auto p = render_dual_axis(NamedSeries{"a", {}}, NamedSeries{"b", {}}, "none");
  CHECK(p.find("no data") != std::string::npos);
  CHECK(render_stance_breakdown({}, "none").find("no data") != std::string::npos);
  CHECK(render_placeholder("t", "notice").find("notice") != std::string::npos);
}

TEST_CASE("dual csv outer join and rendering from files") {
  std::stringstream buf;
  write_dual_csv(buf, kSent, kStance);
  CHECK(buf.str() ==
        "bucket,news_sentiment,reply_stance\n"
        "2022-W01,0.100000,\n"
        "2022-W02,-0.200000,0.500000\n"
        "2022-W03,0.300000,-0.100000\n");
  const auto [l, r] = read_dual_csv(buf);
  CHECK(l.name == "news_sentiment");
  CHECK(l.points.size() == 3);
  CHECK(r.points.size() == 2);

  testing::TempDir tmp("figure");
  const auto dual = tmp.path() / "dual.csv";
  std::stringstream again;
  write_dual_csv(again, kSent, kStance);
  testing::write_file(dual, again.str());
  const std::vector<std::filesystem::path> one = {dual};
  const auto from_file = render_figure(FigureKind::kDualAxisLines, one, "t");
  CHECK(from_file == render_dual_axis(l, r, "t"));

  std::stringstream a, b;
  series::write_series_csv(a, kSent.points);
  series::write_series_csv(b, kStance.points);
  testing::write_file(tmp.path() / "news_sentiment.csv", a.str());
  testing::write_file(tmp.path() / "reply_stance.csv", b.str());
  const std::vector<std::filesystem::path> two = {tmp.path() / "news_sentiment.csv",
                                                  tmp.path() / "reply_stance.csv"};
  CHECK(count(render_figure(FigureKind::kDualAxisLines, two, "t"), "<polyline") == 2);
  CHECK_THROWS_AS(render_figure(FigureKind::kStackedShares, two, "t"), Error);
  const std::vector<std::filesystem::path> missing = {tmp.path() / "nope.csv"};
  CHECK_THROWS_AS(render_figure(FigureKind::kDualAxisLines, missing, "t"), Error);
}
