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

#include "stanceshift/series.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <unordered_map>

#include "stanceshift/stats.hpp"

namespace stanceshift::series {
namespace {

double median_of(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double parse_double(const std::string& s, std::size_t lineno) {
  const std::string v(trim(s));
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size()) {
    throw Error("series CSV line " + std::to_string(lineno) + ": bad number '" + v + "'");
  }
  return d;
}

std::size_t parse_count(const std::string& s, std::size_t lineno) {
  const double d = parse_double(s, lineno);
  if (d < 0.0 || d != std::floor(d)) {
    throw Error("series CSV line " + std::to_string(lineno) + ": bad count");
  }
  return static_cast<std::size_t>(d);
}

}  // namespace

std::vector<SeriesPoint> median_sentiment_series(std::span<const TimedValue> values,
                                                 Bucketing bucketing, bool exclude_zero) {
  std::map<std::string, std::vector<double>> buckets;
  for (const auto& v : values) {
    if (exclude_zero && v.value == 0.0) continue;
    buckets[bucket_key(v.time, bucketing)].push_back(v.value);
  }
  std::vector<SeriesPoint> out;
  out.reserve(buckets.size());
  for (auto& [key, vals] : buckets) {
    out.push_back({key, median_of(vals), vals.size()});
  }
  return out;
}

std::optional<StanceScalar> parse_stance_scalar(std::string_view s) {
  const std::string v = ascii_lower(trim(s));
  if (v == "positive_share") return StanceScalar::kPositiveShare;
  if (v == "signed_mean") return StanceScalar::kSignedMean;
  return std::nullopt;
}

std::string_view stance_scalar_name(StanceScalar s) {
  return s == StanceScalar::kPositiveShare ? "positive_share" : "signed_mean";
}

double signed_stance(Stance s) {
  switch (s) {
    case Stance::kPositive:
      return 1.0;
    case Stance::kNegative:
      return -1.0;
    case Stance::kNeutral:
      return 0.0;
  }
  return 0.0;
}

std::vector<StancePoint> stance_series(std::span<const TimedLabel> labels,
                                       Bucketing bucketing, StanceScalar scalar) {
  std::map<std::string, std::array<std::size_t, kNumStances>> counts;
  for (const auto& l : labels) ++counts[bucket_key(l.time, bucketing)][index_of(l.label)];
  std::vector<StancePoint> out;
  out.reserve(counts.size());
  for (const auto& [key, c] : counts) {
    StancePoint p;
    p.bucket = key;
    p.n = c[0] + c[1] + c[2];
    const double n = static_cast<double>(p.n);
    for (std::size_t i = 0; i < kNumStances; ++i) p.shares[i] = c[i] / n;
    p.value = scalar == StanceScalar::kPositiveShare
                  ? p.shares[index_of(Stance::kPositive)]
                  : (static_cast<double>(c[index_of(Stance::kPositive)]) -
                     static_cast<double>(c[index_of(Stance::kNegative)])) / n;
    out.push_back(p);
  }
  return out;
}

std::vector<SeriesPoint> scalar_series(std::span<const StancePoint> points) {
  std::vector<SeriesPoint> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back({p.bucket, p.value, p.n});
  return out;
}

std::string_view granger_status_name(GrangerStatus s) {
  switch (s) {
    case GrangerStatus::kOk:
      return "ok";
    case GrangerStatus::kDegenerate:
      return "degenerate";
    case GrangerStatus::kInsufficient:
      return "insufficient";
  }
  return "ok";
}

GrangerResult granger_single(std::span<const double> cause, std::span<const double> effect,
                             int lag) {
  if (lag < 1) throw Error("granger: lag must be positive");
  if (cause.size() != effect.size()) throw Error("granger: series are not aligned");
  GrangerResult r;
  r.lag = lag;
  const auto L = static_cast<std::size_t>(lag);
  const std::size_t n = effect.size();
  r.n_used = n > L ? n - L : 0;
  r.df_num = lag;
  r.df_den = static_cast<int>(r.n_used) - 2 * lag - 1;
  if (r.df_den < kMinResidualDof) {
    r.status = GrangerStatus::kInsufficient;
    r.message = std::to_string(n) + " aligned points are too few for lag " +
                std::to_string(lag);
    return r;
  }

  const auto rows = static_cast<Eigen::Index>(r.n_used);
  Eigen::MatrixXd unrestricted(rows, 2 * lag + 1);
  Eigen::VectorXd response(rows);
  for (std::size_t t = L; t < n; ++t) {
    const auto i = static_cast<Eigen::Index>(t - L);
    response(i) = effect[t];
    unrestricted(i, 0) = 1.0;
    for (std::size_t j = 1; j <= L; ++j) {
      unrestricted(i, static_cast<Eigen::Index>(j)) = effect[t - j];
      unrestricted(i, static_cast<Eigen::Index>(L + j)) = cause[t - j];
    }
  }
  const Eigen::MatrixXd restricted = unrestricted.leftCols(lag + 1);

  const stats::OlsFit fu = stats::ols(unrestricted, response);
  const stats::OlsFit fr = stats::ols(restricted, response);
  r.rss_unrestricted = fu.rss;
  r.rss_restricted = fr.rss;
  if (!fu.full_rank || !fr.full_rank) {
    r.status = GrangerStatus::kDegenerate;
    r.message = "rank-deficient design matrix";
    return r;
  }
  // Nested least squares can only lower the residual sum; clamp rounding.
  if (r.rss_unrestricted > r.rss_restricted) r.rss_unrestricted = r.rss_restricted;
  if (!(r.rss_unrestricted > 0.0)) {
    r.status = GrangerStatus::kDegenerate;
    r.message = "perfect fit: zero residual sum of squares";
    return r;
  }
  r.f_stat = ((r.rss_restricted - r.rss_unrestricted) / lag) /
             (r.rss_unrestricted / r.df_den);
  r.p_value = stats::f_sf(r.f_stat, r.df_num, r.df_den);
  return r;
}

std::vector<GrangerResult> granger_test(std::span<const SeriesPoint> x,
                                        std::span<const SeriesPoint> y, int max_lag,
                                        const std::string& x_tag, const std::string& y_tag) {
  if (max_lag < 1) throw Error("granger: max_lag must be positive");
  std::unordered_map<std::string, double> y_by_bucket;
  for (const auto& p : y) y_by_bucket.emplace(p.bucket, p.value);
  std::vector<std::pair<std::string, std::pair<double, double>>> joined;
  for (const auto& p : x) {
    const auto it = y_by_bucket.find(p.bucket);
    if (it != y_by_bucket.end()) joined.push_back({p.bucket, {p.value, it->second}});
  }
  std::sort(joined.begin(), joined.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<double> xs, ys;
  for (const auto& [bucket, v] : joined) {
    xs.push_back(v.first);
    ys.push_back(v.second);
  }

  std::vector<GrangerResult> out;
  for (int dir = 0; dir < 2; ++dir) {
    for (int lag = 1; lag <= max_lag; ++lag) {
      GrangerResult r = dir == 0 ? granger_single(xs, ys, lag) : granger_single(ys, xs, lag);
      r.cause = dir == 0 ? x_tag : y_tag;
      r.effect = dir == 0 ? y_tag : x_tag;
      out.push_back(std::move(r));
    }
  }
  return out;
}

void write_series_csv(std::ostream& out, std::span<const SeriesPoint> points) {
  out << "bucket,value,n\n";
  for (const auto& p : points) {
    out << p.bucket << ',' << format_fixed(p.value) << ',' << p.n << '\n';
  }
}

std::vector<SeriesPoint> read_series_csv(std::istream& in) {
  std::vector<SeriesPoint> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view v = trim(line);
    if (v.empty()) continue;
    const auto fields = parse_csv_record(v);
    if (fields.size() < 2) {
      throw Error("series CSV line " + std::to_string(lineno) + ": expected bucket,value,n");
    }
    if (ascii_lower(trim(fields[0])) == "bucket") continue;
    SeriesPoint p;
    p.bucket = std::string(trim(fields[0]));
    p.value = parse_double(fields[1], lineno);
    p.n = fields.size() > 2 ? parse_count(fields[2], lineno) : 1;
    if (!out.empty() && !(out.back().bucket < p.bucket)) {
      throw Error("series CSV line " + std::to_string(lineno) +
                  ": buckets must be strictly increasing");
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<SeriesPoint> load_series_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open series file " + path.string());
  return read_series_csv(in);
}

void write_stance_csv(std::ostream& out, std::span<const StancePoint> points) {
  out << "bucket,pos_share,neg_share,neu_share,n,value\n";
  for (const auto& p : points) {
    out << p.bucket;
    for (double s : p.shares) out << ',' << format_fixed(s);
    out << ',' << p.n << ',' << format_fixed(p.value) << '\n';
  }
}

std::vector<StancePoint> read_stance_csv(std::istream& in) {
  std::vector<StancePoint> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view v = trim(line);
    if (v.empty()) continue;
    const auto fields = parse_csv_record(v);
    if (fields.size() != 6) {
      throw Error("stance CSV line " + std::to_string(lineno) +
                  ": expected bucket,pos_share,neg_share,neu_share,n,value");
    }
    if (ascii_lower(trim(fields[0])) == "bucket") continue;
    StancePoint p;
    p.bucket = std::string(trim(fields[0]));
    for (std::size_t i = 0; i < kNumStances; ++i) p.shares[i] = parse_double(fields[1 + i], lineno);
    p.n = parse_count(fields[4], lineno);
    p.value = parse_double(fields[5], lineno);
    out.push_back(std::move(p));
  }
  return out;
}

void write_granger_csv(std::ostream& out, std::span<const GrangerResult> results) {
  out << "cause,effect,lag,status,f_stat,p_value,df_num,df_den,n_used,rss_restricted,"
         "rss_unrestricted\n";
  for (const auto& r : results) {
    out << csv_field(r.cause) << ',' << csv_field(r.effect) << ',' << r.lag << ','
        << granger_status_name(r.status) << ',';
    if (r.ok()) {
      out << format_fixed(r.f_stat) << ',' << format_fixed(r.p_value, 10);
    } else {
      out << ',';
    }
    out << ',' << r.df_num << ',' << r.df_den << ',' << r.n_used << ','
        << format_fixed(r.rss_restricted, 9) << ',' << format_fixed(r.rss_unrestricted, 9)
        << '\n';
  }
}

}  // namespace stanceshift::series
