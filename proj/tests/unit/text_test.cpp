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

#include "stanceshift/text.hpp"

using namespace stanceshift;

TEST_CASE("nfc normalization composes combining marks") {
  const std::string decomposed = "Cafe\xCC\x81";  // e + combining acute
  const std::string composed = "Caf\xC3\xA9";
  CHECK(text::normalize_nfc(decomposed) == composed);
  CHECK(text::normalize_nfc(composed) == composed);
}

TEST_CASE("unicode lowercase") {
  CHECK(text::to_lower("MIGRATION") == "migration");
  CHECK(text::to_lower("\xC5\x81\xC3\x93" "D\xC5\xB9") == "\xC5\x82\xC3\xB3" "d\xC5\xBA");  // ŁÓDŹ
}

TEST_CASE("edge punctuation keeps interior characters") {
  CHECK(text::strip_edge_punct("\"refugees!\"") == "refugees");
  CHECK(text::strip_edge_punct("anti-migrationism") == "anti-migrationism");
  CHECK(text::strip_edge_punct("#refugees") == "refugees");
  CHECK(text::strip_edge_punct("...") == "");
  CHECK(text::strip_edge_punct("\xC2\xABmigrants\xC2\xBB") == "migrants");  // «migrants»
}

TEST_CASE("url and mention detection") {
  CHECK(text::is_url("https://t.co/abc"));
  CHECK(text::is_url("http://x"));
  CHECK(text::is_url("www.example.org"));
  CHECK_FALSE(text::is_url("website"));
  CHECK(text::is_mention("@user"));
  CHECK_FALSE(text::is_mention("@"));
  CHECK_FALSE(text::is_mention("mail"));
}

TEST_CASE("all caps detection") {
  CHECK(text::is_all_caps("GREAT"));
  CHECK(text::is_all_caps("OK!"));
  CHECK_FALSE(text::is_all_caps("Great"));
  CHECK_FALSE(text::is_all_caps("123"));
}

TEST_CASE("tokenize") {
  const auto toks = text::tokenize("Stop the MIGRANTS! @user http://x #refugees");
  CHECK(toks == std::vector<std::string>{"stop", "the", "migrants", "refugees"});
  text::TokenizeOptions keep;
  keep.lowercase = false;
  CHECK(text::tokenize("Hello, World", keep) == std::vector<std::string>{"Hello", "World"});
  CHECK(text::tokenize("   ").empty());
  CHECK(text::split_whitespace("a\xE2\x80\x83" "b  c").size() == 3);  // em space
}

TEST_CASE("strip urls and mentions preserves the rest") {
  CHECK(text::strip_urls_and_mentions("@bob Great news! https://t.co/x") == "Great news!");
  CHECK(text::strip_urls_and_mentions("@only") == "");
}
