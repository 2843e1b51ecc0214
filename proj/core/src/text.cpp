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

#include "stanceshift/text.hpp"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <cstdint>

#include "stanceshift/common.hpp"

namespace stanceshift::text {
namespace {

icu::UnicodeString from_utf8(std::string_view s) {
  return icu::UnicodeString::fromUTF8(
      icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
}

std::string to_utf8(const icu::UnicodeString& u) {
  std::string out;
  u.toUTF8String(out);
  return out;
}

bool is_punct_or_symbol(UChar32 c) {
  const auto mask = U_GET_GC_MASK(c);
  return (mask & (U_GC_P_MASK | U_GC_S_MASK)) != 0;
}

// Decodes one code point starting at byte offset `i`, advancing `i`.
UChar32 next_cp(std::string_view s, int32_t& i) {
  UChar32 c;
  U8_NEXT(reinterpret_cast<const uint8_t*>(s.data()), i,
          static_cast<int32_t>(s.size()), c);
  return c;
}

}  // namespace

std::string normalize_nfc(std::string_view utf8) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw Error("ICU NFC normalizer unavailable");
  const icu::UnicodeString in = from_utf8(utf8);
  icu::UnicodeString out = nfc->normalize(in, status);
  if (U_FAILURE(status)) return std::string(utf8);
  return to_utf8(out);
}

std::string to_lower(std::string_view utf8) {
  icu::UnicodeString u = from_utf8(utf8);
  u.toLower(icu::Locale::getRoot());
  return to_utf8(u);
}

std::vector<std::string_view> split_whitespace(std::string_view utf8) {
  std::vector<std::string_view> out;
  const auto n = static_cast<int32_t>(utf8.size());
  int32_t i = 0;
  int32_t start = -1;
  while (i < n) {
    const int32_t at = i;
    const UChar32 c = next_cp(utf8, i);
    const bool space = c >= 0 && u_isUWhiteSpace(c);
    if (space) {
      if (start >= 0) {
        out.push_back(utf8.substr(start, at - start));
        start = -1;
      }
    } else if (start < 0) {
      start = at;
    }
  }
  if (start >= 0) out.push_back(utf8.substr(start));
  return out;
}

std::string_view strip_edge_punct(std::string_view token) {
  const auto n = static_cast<int32_t>(token.size());
  int32_t begin = 0;
  while (begin < n) {
    int32_t i = begin;
    const UChar32 c = next_cp(token, i);
    if (c >= 0 && !is_punct_or_symbol(c)) break;
    begin = i;
  }
  int32_t end = n;
  while (end > begin) {
    int32_t i = end;
    UChar32 c;
    U8_PREV(reinterpret_cast<const uint8_t*>(token.data()), begin, i, c);
    if (c >= 0 && !is_punct_or_symbol(c)) break;
    end = i;
  }
  return token.substr(begin, end - begin);
}

bool is_url(std::string_view token) {
  const std::string t = ascii_lower(token.substr(0, 8));
  return t.starts_with("http://") || t.starts_with("https://") ||
         t.starts_with("www.");
}

bool is_mention(std::string_view token) {
  return token.size() > 1 && (token.front() == '@' ||
                              token.starts_with("\xEF\xBC\xA0"));  // U+FF20
}

bool is_all_caps(std::string_view token) {
  const auto n = static_cast<int32_t>(token.size());
  int32_t i = 0;
  bool has_upper = false;
  while (i < n) {
    const UChar32 c = next_cp(token, i);
    if (c < 0) continue;
    if (u_isULowercase(c)) return false;
    if (u_isUUppercase(c)) has_upper = true;
  }
  return has_upper;
}

std::vector<std::string> tokenize(std::string_view utf8,
                                  const TokenizeOptions& opts) {
  const std::string normalized = normalize_nfc(utf8);
  std::vector<std::string> out;
  for (std::string_view raw : split_whitespace(normalized)) {
    if (opts.drop_urls && is_url(raw)) continue;
    if (opts.drop_mentions && is_mention(raw)) continue;
    const std::string_view core = opts.strip_punct ? strip_edge_punct(raw) : raw;
    if (core.empty()) continue;
    out.push_back(opts.lowercase ? to_lower(core) : std::string(core));
  }
  return out;
}

std::string strip_urls_and_mentions(std::string_view utf8) {
  std::string out;
  for (std::string_view raw : split_whitespace(utf8)) {
    if (is_url(raw) || is_mention(raw)) continue;
    if (!out.empty()) out += ' ';
    out += raw;
  }
  return out;
}

}  // namespace stanceshift::text
