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

#ifndef STANCESHIFT_SERIES_HPP_
#define STANCESHIFT_SERIES_HPP_

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stanceshift/common.hpp"
#include "stanceshift/timeutil.hpp"

namespace stanceshift::series {

struct SeriesPoint {
  std::string bucket;  // "YYYY-Www" or "YYYY-MM"
  double value = 0.0;
  std::size_t n = 0;

  bool operator==(const SeriesPoint&) const = default;
};

struct TimedValue {
  Timestamp time;
  double value = 0.0;
};

// Per-bucket median. With `exclude_zero`, exact zeros are removed first and
// buckets left empty are omitted. Points are in chronological order.
std::vector<SeriesPoint> median_sentiment_series(std::span<const TimedValue> values,
                                                 Bucketing bucketing, bool exclude_zero);

enum class StanceScalar { kPositiveShare, kSignedMean };

std::optional<StanceScalar> parse_stance_scalar(std::string_view s);
std::string_view stance_scalar_name(StanceScalar s);

// POS -> +1, NEG -> -1, NEU -> 0.
double signed_stance(Stance s);

struct TimedLabel {
  Timestamp time;
  Stance label = kDefaultStance;
};

struct StancePoint {
  std::string bucket;
  std::array<double, kNumStances> shares{};  // POS, NEG, NEU; sum to 1
  std::size_t n = 0;                         // reply volume
  double value = 0.0;                        // configured scalar
};

std::vector<StancePoint> stance_series(std::span<const TimedLabel> labels,
                                       Bucketing bucketing, StanceScalar scalar);

// The scalar column of a stance series as plain series points.
std::vector<SeriesPoint> scalar_series(std::span<const StancePoint> points);

enum class GrangerStatus { kOk, kDegenerate, kInsufficient };

std::string_view granger_status_name(GrangerStatus s);

struct GrangerResult {
  std::string cause;
  std::string effect;
  int lag = 0;
  GrangerStatus status = GrangerStatus::kOk;
  std::string message;
  double f_stat = 0.0;
  double p_value = 1.0;
  int df_num = 0;
  int df_den = 0;
  std::size_t n_used = 0;
  double rss_restricted = 0.0;
  double rss_unrestricted = 0.0;

  bool ok() const { return status == GrangerStatus::kOk; }
};

// Minimum residual degrees of freedom of the unrestricted regression.
inline constexpr int kMinResidualDof = 5;

// Tests whether `cause` lags improve an autoregression of `effect`:
//   unrestricted: effect_t ~ 1 + effect_{t-1..t-lag} + cause_{t-1..t-lag}
//   restricted:   effect_t ~ 1 + effect_{t-1..t-lag}
//   F = ((RSS_r - RSS_u) / lag) / (RSS_u / (n_used - 2 lag - 1))
// The series must already be aligned. A rank-deficient design (for example
// a constant series) yields kDegenerate; too few observations kInsufficient.
GrangerResult granger_single(std::span<const double> cause, std::span<const double> effect,
                             int lag);

// Inner-joins x and y on bucket (unmatched buckets dropped pairwise, no
// interpolation) and reports lags 1..max_lag for x -> y, then y -> x.
std::vector<GrangerResult> granger_test(std::span<const SeriesPoint> x,
                                        std::span<const SeriesPoint> y, int max_lag,
                                        const std::string& x_tag = "x",
                                        const std::string& y_tag = "y");

// Series CSV: header "bucket,value,n".
void write_series_csv(std::ostream& out, std::span<const SeriesPoint> points);
std::vector<SeriesPoint> read_series_csv(std::istream& in);
std::vector<SeriesPoint> load_series_csv(const std::filesystem::path& path);

// "bucket,pos_share,neg_share,neu_share,n,value".
void write_stance_csv(std::ostream& out, std::span<const StancePoint> points);
std::vector<StancePoint> read_stance_csv(std::istream& in);

void write_granger_csv(std::ostream& out, std::span<const GrangerResult> results);

}  // namespace stanceshift::series

#endif  // STANCESHIFT_SERIES_HPP_
