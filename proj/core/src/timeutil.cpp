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

#include "stanceshift/timeutil.hpp"

#include <cstdio>

#include "stanceshift/common.hpp"

namespace stanceshift {
namespace {

using namespace std::chrono;

bool read_int(std::string_view s, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > s.size()) return false;
  int v = 0;
  for (std::size_t i = pos; i < pos + len; ++i) {
    const char c = s[i];
    if (c < '0' || c > '9') return false;
    v = v * 10 + (c - '0');
  }
  out = v;
  return true;
}

}  // namespace

std::optional<Timestamp> parse_iso8601(std::string_view s) {
  s = trim(s);
  // 0123456789012345678
  // YYYY-MM-DDTHH:MM:SSZ
  if (s.size() < 20) return std::nullopt;
  if (s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != 't') ||
      s[13] != ':' || s[16] != ':') {
    return std::nullopt;
  }
  int y, mo, d, h, mi, se;
  if (!read_int(s, 0, 4, y) || !read_int(s, 5, 2, mo) ||
      !read_int(s, 8, 2, d) || !read_int(s, 11, 2, h) ||
      !read_int(s, 14, 2, mi) || !read_int(s, 17, 2, se)) {
    return std::nullopt;
  }
  std::size_t pos = 19;
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    const std::size_t digits = pos;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
    if (pos == digits) return std::nullopt;
  }
  if (pos + 1 != s.size() || (s[pos] != 'Z' && s[pos] != 'z')) {
    return std::nullopt;
  }
  if (h > 23 || mi > 59 || se > 60) return std::nullopt;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                           day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  return sys_days{ymd} + hours{h} + minutes{mi} + seconds{se};
}

std::string format_iso8601(Timestamp t) {
  const auto dp = floor<days>(t);
  const year_month_day ymd{dp};
  const hh_mm_ss hms{t - dp};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ",
                static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()),
                static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

std::optional<Bucketing> parse_bucketing(std::string_view s) {
  const std::string v = ascii_lower(trim(s));
  if (v == "week") return Bucketing::kWeek;
  if (v == "month") return Bucketing::kMonth;
  return std::nullopt;
}

std::string_view bucketing_name(Bucketing b) {
  return b == Bucketing::kWeek ? "week" : "month";
}

std::string iso_week_key(Timestamp t) {
  const sys_days d = floor<days>(t);
  const unsigned iso_wd = weekday{d}.iso_encoding();  // Mon=1 .. Sun=7
  const sys_days thursday = d + days{4 - static_cast<int>(iso_wd)};
  const year iso_year = year_month_day{thursday}.year();
  const sys_days jan1 = sys_days{iso_year / January / 1};
  const int week = static_cast<int>((thursday - jan1).count()) / 7 + 1;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-W%02d", static_cast<int>(iso_year), week);
  return buf;
}

std::string month_key(Timestamp t) {
  const year_month_day ymd{floor<days>(t)};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()));
  return buf;
}

std::string bucket_key(Timestamp t, Bucketing b) {
  return b == Bucketing::kWeek ? iso_week_key(t) : month_key(t);
}

std::optional<TimeWindow> parse_month_window(std::string_view yyyy_mm) {
  yyyy_mm = trim(yyyy_mm);
  int y, m;
  if (yyyy_mm.size() != 7 || yyyy_mm[4] != '-' || !read_int(yyyy_mm, 0, 4, y) ||
      !read_int(yyyy_mm, 5, 2, m) || m < 1 || m > 12) {
    return std::nullopt;
  }
  const year_month first{year{y}, month{static_cast<unsigned>(m)}};
  const year_month next = first + months{1};
  return TimeWindow{sys_days{first / 1}, sys_days{next / 1}};
}

}  // namespace stanceshift
