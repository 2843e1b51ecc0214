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

#ifndef STANCESHIFT_TEXT_HPP_
#define STANCESHIFT_TEXT_HPP_

#include <string>
#include <string_view>
#include <vector>

// Unicode-aware text helpers shared by the corpus filter, sentiment scorer,
// term extractor and the bag-of-words baseline. Input and output are UTF-8.
namespace stanceshift::text {

std::string normalize_nfc(std::string_view utf8);

// Full Unicode lowercase mapping (root locale).
std::string to_lower(std::string_view utf8);

// Splits on Unicode whitespace. Views point into `utf8`.
std::vector<std::string_view> split_whitespace(std::string_view utf8);

// Removes punctuation and symbol code points from both ends of a token.
// Interior characters are kept, so "anti-migrationism" stays whole.
std::string_view strip_edge_punct(std::string_view token);

bool is_url(std::string_view token);
bool is_mention(std::string_view token);

// True when the token has at least one cased letter and no lowercase ones.
bool is_all_caps(std::string_view token);

struct TokenizeOptions {
  bool drop_urls = true;
  bool drop_mentions = true;
  bool strip_punct = true;
  bool lowercase = true;
};

// NFC-normalize, split on whitespace, drop URL/mention tokens, strip edge
// punctuation (which also removes a hashtag prefix), lowercase. Empty tokens
// are dropped.
std::vector<std::string> tokenize(std::string_view utf8,
                                  const TokenizeOptions& opts = {});

// Text with URL and mention tokens removed, remaining tokens joined by a
// single space. Case and punctuation are preserved.
std::string strip_urls_and_mentions(std::string_view utf8);

}  // namespace stanceshift::text

#endif  // STANCESHIFT_TEXT_HPP_
