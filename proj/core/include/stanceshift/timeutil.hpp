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

#ifndef STANCESHIFT_TIMEUTIL_HPP_
#define STANCESHIFT_TIMEUTIL_HPP_

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace stanceshift {

// UTC, second precision.
using Timestamp = std::chrono::sys_seconds;

// Parses "YYYY-MM-DDTHH:MM:SSZ" (a fractional-second part is accepted and
// truncated). Returns nullopt for anything else, including offsets other
// than Z.
std::optional<Timestamp> parse_iso8601(std::string_view s);
std::string format_iso8601(Timestamp t);

enum class Bucketing { kWeek, kMonth };

std::optional<Bucketing> parse_bucketing(std::string_view s);
std::string_view bucketing_name(Bucketing b);

// ISO-8601 week key "YYYY-Www" (ISO week-numbering year) or month key
// "YYYY-MM". Keys of one bucketing sort lexicographically in time order.
std::string iso_week_key(Timestamp t);
std::string month_key(Timestamp t);
std::string bucket_key(Timestamp t, Bucketing b);

// Half-open [start, end) interval covering the calendar month "YYYY-MM".
struct TimeWindow {
  Timestamp start;
  Timestamp end;

  bool contains(Timestamp t) const { return t >= start && t < end; }
};

std::optional<TimeWindow> parse_month_window(std::string_view yyyy_mm);

}  // namespace stanceshift

#endif  // STANCESHIFT_TIMEUTIL_HPP_
