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

#ifndef STANCESHIFT_FIGURE_HPP_
#define STANCESHIFT_FIGURE_HPP_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stanceshift/series.hpp"

namespace stanceshift::figure {

enum class FigureKind { kDualAxisLines, kStackedShares };

// "dual-axis-lines" or "stacked-shares".
std::optional<FigureKind> parse_figure_kind(std::string_view s);
std::string_view figure_kind_name(FigureKind k);

struct NamedSeries {
  std::string name;
  std::vector<series::SeriesPoint> points;
};

// Two series on a shared bucket axis, the first against the left axis and
// the second against the right one. Either may be empty.
std::string render_dual_axis(const NamedSeries& left, const NamedSeries& right,
                             std::string_view title);

// Stacked class shares (left axis, 0..1) over reply-volume bars (right axis).
std::string render_stance_breakdown(std::span<const series::StancePoint> points,
                                    std::string_view title);

// Shown instead of a chart when there is nothing to draw.
std::string render_placeholder(std::string_view title, std::string_view notice);

// Outer join of two series on bucket: "bucket,<left>,<right>", blank cells
// where a series has no point.
void write_dual_csv(std::ostream& out, const NamedSeries& left, const NamedSeries& right);
std::pair<NamedSeries, NamedSeries> read_dual_csv(std::istream& in);

// Renders from CSV files. kDualAxisLines takes either one dual CSV or two
// series CSVs; kStackedShares takes one stance CSV.
std::string render_figure(FigureKind kind, std::span<const std::filesystem::path> csvs,
                          std::string_view title);

}  // namespace stanceshift::figure

#endif  // STANCESHIFT_FIGURE_HPP_
