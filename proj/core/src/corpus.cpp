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

#include "stanceshift/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "stanceshift/text.hpp"

namespace stanceshift::corpus {
namespace {

using nlohmann::json;

std::string upper_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

bool is_country_code(std::string_view c) {
  return c.size() == 2 && std::isalpha(static_cast<unsigned char>(c[0])) &&
         std::isalpha(static_cast<unsigned char>(c[1]));
}

// Ids arrive as strings or (in raw platform dumps) as integers.
std::optional<std::string> id_field(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number_integer()) return std::to_string(it->get<std::int64_t>());
  if (it->is_number_unsigned()) return std::to_string(it->get<std::uint64_t>());
  throw Error(std::string("field '") + key + "' must be a string or integer");
}

std::optional<std::string> string_field(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) {
    throw Error(std::string("field '") + key + "' must be a string");
  }
  return it->get<std::string>();
}

json tweet_to_json(const TweetRecord& t) {
  json j;
  j["id"] = t.id;
  j["author"] = t.author;
  j["created_at"] = format_iso8601(t.created_at);
  j["lang"] = t.lang;
  j["text"] = t.text;
  if (t.translated_text) j["translated_text"] = *t.translated_text;
  if (t.reply_to_id) j["reply_to_id"] = *t.reply_to_id;
  j["reply_count"] = t.reply_count;
  if (t.country) j["country"] = *t.country;
  return j;
}

TweetRecord tweet_from_json(const json& obj) {
  if (!obj.is_object()) throw Error("record is not a JSON object");
  TweetRecord t;
  auto id = id_field(obj, "id");
  if (!id || id->empty()) throw Error("missing id");
  t.id = std::move(*id);
  t.author = string_field(obj, "author").value_or("");
  if (t.author.empty()) throw Error("missing author");
  const auto created = string_field(obj, "created_at");
  if (!created) throw Error("missing created_at");
  const auto ts = parse_iso8601(*created);
  if (!ts) throw Error("unparseable created_at '" + *created + "'");
  t.created_at = *ts;
  t.lang = ascii_lower(string_field(obj, "lang").value_or(""));
  t.text = string_field(obj, "text").value_or("");
  t.translated_text = string_field(obj, "translated_text");
  t.reply_to_id = id_field(obj, "reply_to_id");
  if (const auto it = obj.find("reply_count"); it != obj.end() && !it->is_null()) {
    if (it->is_number_unsigned()) {
      t.reply_count = it->get<std::uint64_t>();
    } else if (it->is_number_integer()) {
      const auto v = it->get<std::int64_t>();
      if (v < 0) throw Error("negative reply_count");
      t.reply_count = static_cast<std::uint64_t>(v);
    } else {
      throw Error("reply_count must be an integer");
    }
  }
  if (auto c = string_field(obj, "country")) t.country = upper_ascii(*c);
  return t;
}

const std::vector<std::size_t>& empty_children() {
  static const std::vector<std::size_t> kEmpty;
  return kEmpty;
}

}  // namespace

const std::set<std::string>& migration_keywords() {
  static const std::set<std::string> kKeywords = {
      "refugees", "refugee",   "migrant",    "migrants",
      "migration", "immigrant", "immigrants", "immigration"};
  return kKeywords;
}

// --- OutletRegistry --------------------------------------------------------

OutletRegistry OutletRegistry::from_records(std::vector<OutletRecord> records) {
  OutletRegistry reg;
  for (auto& r : records) {
    r.username = std::string(trim(r.username));
    if (!r.username.empty() && r.username.front() == '@') r.username.erase(0, 1);
    if (r.username.empty()) throw Error("outlet with empty username");
    r.country = upper_ascii(trim(r.country));
    if (!is_country_code(r.country)) {
      throw Error("outlet '" + r.username + "' has invalid country '" +
                  r.country + "'");
    }
    const std::string key = ascii_lower(r.username);
    if (reg.by_handle_.contains(key)) {
      throw Error("duplicate outlet username '" + r.username + "'");
    }
    reg.by_handle_.emplace(key, reg.records_.size());
    reg.records_.push_back(std::move(r));
  }
  return reg;
}

OutletRegistry OutletRegistry::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open outlet registry " + path.string());
  return read(in);
}

OutletRegistry OutletRegistry::read(std::istream& in) {
  std::string line;
  std::vector<OutletRecord> records;
  std::size_t lineno = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto fields = parse_csv_record(line);
    if (header.empty()) {
      for (auto& f : fields) f = ascii_lower(trim(f));
      header = fields;
      if (header.size() < 2 || header[0] != "username" || header[1] != "country") {
        throw Error("outlet registry: expected header username,country,...");
      }
      continue;
    }
    if (fields.size() < 2) {
      throw Error("outlet registry line " + std::to_string(lineno) +
                  ": expected at least username,country");
    }
    OutletRecord r;
    r.username = fields[0];
    r.country = fields[1];
    if (fields.size() > 2) r.display_name = fields[2];
    if (fields.size() > 3 && !trim(fields[3]).empty()) {
      r.external_id = std::string(trim(fields[3]));
    }
    records.push_back(std::move(r));
  }
  return from_records(std::move(records));
}

const OutletRecord* OutletRegistry::find(std::string_view username) const {
  if (!username.empty() && username.front() == '@') username.remove_prefix(1);
  const auto it = by_handle_.find(ascii_lower(username));
  return it == by_handle_.end() ? nullptr : &records_[it->second];
}

// --- TweetRecord I/O -------------------------------------------------------

TweetRecord parse_tweet_json(std::string_view line) {
  json obj;
  try {
    obj = json::parse(line);
  } catch (const json::parse_error& e) {
    throw Error(std::string("invalid JSON: ") + e.what());
  }
  return tweet_from_json(obj);
}

std::string to_json_line(const TweetRecord& t) { return tweet_to_json(t).dump(); }

// --- Corpus ----------------------------------------------------------------

Corpus Corpus::build(std::vector<TweetRecord> records,
                     const OutletRegistry& registry, const LoadOptions& opts,
                     RejectionReport prior_rejections,
                     std::span<const std::size_t> line_numbers) {
  Corpus c;
  c.rejections_ = std::move(prior_rejections);
  const auto line_of = [&](std::size_t i) -> std::size_t {
    return i < line_numbers.size() ? line_numbers[i] : 0;
  };
  for (std::size_t i = 0; i < records.size(); ++i) {
    TweetRecord& t = records[i];
    const auto reject = [&](std::string reason) {
      c.rejections_.push_back({line_of(i), t.id, std::move(reason)});
    };
    if (t.id.empty()) {
      reject("empty id");
      continue;
    }
    t.text = text::normalize_nfc(t.text);
    if (t.translated_text) t.translated_text = text::normalize_nfc(*t.translated_text);
    if (trim(t.text).empty()) {
      reject("empty text");
      continue;
    }
    if (opts.study_window && !opts.study_window->contains(t.created_at)) {
      reject("created_at outside study window");
      continue;
    }
    if (!t.is_reply() && !registry.empty()) {
      const OutletRecord* outlet = registry.find(t.author);
      if (outlet == nullptr) {
        reject("author '" + t.author + "' is not a registered outlet");
        continue;
      }
      if (!t.country) t.country = outlet->country;
    }
    if (c.by_id_.contains(t.id)) {
      reject("duplicate id");
      continue;
    }
    c.by_id_.emplace(t.id, c.records_.size());
    c.records_.push_back(std::move(t));
  }
  for (std::size_t i = 0; i < c.records_.size(); ++i) {
    const TweetRecord& t = c.records_[i];
    if (t.reply_to_id) c.children_[*t.reply_to_id].push_back(i);
  }
  for (TweetRecord& t : c.records_) {
    if (!t.reply_to_id || t.country) continue;
    if (const auto it = c.by_id_.find(*t.reply_to_id); it != c.by_id_.end()) {
      t.country = c.records_[it->second].country;
    }
  }
  return c;
}

const TweetRecord* Corpus::find(std::string_view id) const {
  const auto it = by_id_.find(std::string(id));
  return it == by_id_.end() ? nullptr : &records_[it->second];
}

std::vector<const TweetRecord*> Corpus::news() const {
  std::vector<const TweetRecord*> out;
  for (const auto& t : records_) {
    if (!t.is_reply()) out.push_back(&t);
  }
  return out;
}

std::size_t Corpus::news_count() const {
  return static_cast<std::size_t>(std::count_if(
      records_.begin(), records_.end(), [](const auto& t) { return !t.is_reply(); }));
}

const std::vector<std::size_t>& Corpus::replies_to(std::string_view id) const {
  const auto it = children_.find(std::string(id));
  return it == children_.end() ? empty_children() : it->second;
}

bool Corpus::same_records(const Corpus& other) const {
  if (size() != other.size()) return false;
  for (const auto& t : records_) {
    const TweetRecord* o = other.find(t.id);
    if (o == nullptr || !(*o == t)) return false;
  }
  return true;
}

Corpus load_corpus(const std::filesystem::path& path,
                   const OutletRegistry& registry, const LoadOptions& opts) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open tweet file " + path.string());
  return load_corpus(in, registry, opts);
}

Corpus load_corpus(std::istream& in, const OutletRegistry& registry,
                   const LoadOptions& opts) {
  std::vector<TweetRecord> records;
  std::vector<std::size_t> lines;
  RejectionReport rejected;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    try {
      records.push_back(parse_tweet_json(line));
      lines.push_back(lineno);
    } catch (const Error& e) {
      rejected.push_back({lineno, "", e.what()});
    }
  }
  return Corpus::build(std::move(records), registry, opts, std::move(rejected),
                       lines);
}

// --- Filters ---------------------------------------------------------------

bool matches_keywords(const TweetRecord& t, const std::set<std::string>& keywords) {
  for (const auto& tok : text::tokenize(t.english_text())) {
    if (keywords.contains(tok)) return true;
  }
  return false;
}

std::vector<TweetRecord> filter_topic_news(std::span<const TweetRecord> news,
                                           const std::set<std::string>& keywords) {
  if (keywords.empty()) throw Error("keyword set is empty");
  std::vector<TweetRecord> out;
  for (const auto& t : news) {
    if (!t.is_reply() && matches_keywords(t, keywords)) out.push_back(t);
  }
  std::sort(out.begin(), out.end(), [](const TweetRecord& a, const TweetRecord& b) {
    return std::tie(a.created_at, a.id) < std::tie(b.created_at, b.id);
  });
  return out;
}

std::vector<TweetRecord> filter_topic_news(const Corpus& corpus,
                                           const std::set<std::string>& keywords) {
  return filter_topic_news(std::span<const TweetRecord>(corpus.records()), keywords);
}

std::string make_pair_id(std::string_view news_id, std::string_view reply_id) {
  std::string out;
  out.reserve(news_id.size() + reply_id.size() + 1);
  out.append(news_id).push_back(':');
  out.append(reply_id);
  return out;
}

std::optional<std::pair<std::string, std::string>> split_pair_id(
    std::string_view pair_id) {
  const auto pos = pair_id.find(':');
  if (pos == std::string_view::npos || pos == 0 || pos + 1 == pair_id.size()) {
    return std::nullopt;
  }
  return std::make_pair(std::string(pair_id.substr(0, pos)),
                        std::string(pair_id.substr(pos + 1)));
}

PairSet build_pairs(const Corpus& corpus, const std::set<std::string>& news_ids,
                    std::size_t min_replies) {
  PairSet out;
  for (const auto& t : corpus.records()) {
    if (t.reply_to_id && corpus.find(*t.reply_to_id) == nullptr) {
      out.rejections.push_back(
          {0, t.id, "reply to absent tweet '" + *t.reply_to_id + "'"});
    }
  }
  for (const auto& id : news_ids) {
    const TweetRecord* news = corpus.find(id);
    if (news == nullptr || news->is_reply()) continue;
    const auto& kids = corpus.replies_to(id);
    if (kids.size() < min_replies) continue;
    for (std::size_t k : kids) {
      const TweetRecord& reply = corpus.records()[k];
      out.pairs.push_back({make_pair_id(news->id, reply.id), *news, reply});
    }
  }
  return out;
}

PairSet filter_replies_language(std::span<const ConversationPair> pairs,
                                std::string_view lang) {
  PairSet out;
  const std::string want = ascii_lower(trim(lang));
  for (const auto& p : pairs) {
    if (trim(p.reply.lang).empty()) {
      out.rejections.push_back({0, p.pair_id, "reply has no language tag"});
      continue;
    }
    if (ascii_lower(trim(p.reply.lang)) == want) out.pairs.push_back(p);
  }
  return out;
}

void write_pairs(std::ostream& out, std::span<const ConversationPair> pairs) {
  for (const auto& p : pairs) {
    json j;
    j["pair_id"] = p.pair_id;
    j["news"] = tweet_to_json(p.news);
    j["reply"] = tweet_to_json(p.reply);
    out << j.dump() << '\n';
  }
}

PairSet read_pairs(std::istream& in) {
  PairSet out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    try {
      const json j = json::parse(line);
      ConversationPair p;
      p.news = tweet_from_json(j.at("news"));
      p.reply = tweet_from_json(j.at("reply"));
      p.pair_id = make_pair_id(p.news.id, p.reply.id);
      if (const auto it = j.find("pair_id");
          it != j.end() && it->is_string() && it->get<std::string>() != p.pair_id) {
        throw Error("pair_id does not match news and reply ids");
      }
      if (p.reply.reply_to_id != p.news.id) {
        throw Error("reply does not answer the paired news tweet");
      }
      out.pairs.push_back(std::move(p));
    } catch (const json::exception& e) {
      out.rejections.push_back({lineno, "", std::string("invalid pair: ") + e.what()});
    } catch (const Error& e) {
      out.rejections.push_back({lineno, "", e.what()});
    }
  }
  return out;
}

PairSet read_pairs(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open pairs file " + path.string());
  return read_pairs(in);
}

}  // namespace stanceshift::corpus
