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

#ifndef STANCESHIFT_COMMON_HPP_
#define STANCESHIFT_COMMON_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace stanceshift {

// Raised for contract violations the caller cannot route into a rejection
// report: unreadable files, bad arguments, key mismatches.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Stance of a reply toward migrants/refugees. The numeric order is the
// fixed class order used for tie-breaking and for probability vectors.
enum class Stance : std::uint8_t { kPositive = 0, kNegative = 1, kNeutral = 2 };

inline constexpr std::size_t kNumStances = 3;
inline constexpr std::array<Stance, kNumStances> kAllStances = {
    Stance::kPositive, Stance::kNegative, Stance::kNeutral};
inline constexpr Stance kDefaultStance = Stance::kNeutral;

constexpr std::size_t index_of(Stance s) { return static_cast<std::size_t>(s); }

// "POS" / "NEG" / "NEU".
std::string_view stance_token(Stance s);
// "Positive" / "Negative" / "Neutral".
std::string_view stance_name(Stance s);
// Accepts POS/NEG/NEU and the full class names, case-insensitive.
std::optional<Stance> parse_stance(std::string_view token);

// One quarantined input item. `line` is 1-based, 0 when not file-backed.
struct Rejection {
  std::size_t line = 0;
  std::string id;
  std::string reason;

  bool operator==(const Rejection&) const = default;
};

using RejectionReport = std::vector<Rejection>;

// Lowercase an ASCII string. Used for identifiers (handles, language
// subtags, class tokens); free text goes through text::to_lower.
std::string ascii_lower(std::string_view s);

std::string_view trim(std::string_view s);

// Split on a single delimiter character; empty fields are kept.
std::vector<std::string> split(std::string_view s, char delim);

// One comma-separated record with RFC 4180 double-quote escaping. Records
// spanning several lines are not supported.
std::vector<std::string> parse_csv_record(std::string_view line);
// Quotes a field when it contains a comma, quote or line break.
std::string csv_field(std::string_view s);

// Fixed "%.*f" formatting so emitted tables are byte-stable.
std::string format_fixed(double v, int precision = 6);

}  // namespace stanceshift

#endif  // STANCESHIFT_COMMON_HPP_
