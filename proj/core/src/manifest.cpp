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

#include <istream>
#include <ostream>
#include <unordered_set>

#include "stanceshift/corpus.hpp"

namespace stanceshift::corpus {
namespace {

constexpr std::string_view kOutlets = "#outlets";
constexpr std::string_view kNewsIds = "#news_ids";
constexpr std::string_view kReplyIds = "#reply_ids";
constexpr std::string_view kLabelPointers = "#label_pointers";

void push_unique(std::vector<std::string>& v, std::unordered_set<std::string>& seen,
                 const std::string& s) {
  if (seen.insert(s).second) v.push_back(s);
}

}  // namespace

void RehydrationManifest::validate() const {
  std::unordered_set<std::string> ids;
  for (const auto* section : {&news_ids, &reply_ids}) {
    for (const auto& id : *section) {
      if (!ids.insert(id).second) throw Error("manifest: duplicate id '" + id + "'");
    }
  }
  std::unordered_set<std::string> handles;
  for (const auto& u : outlet_usernames) {
    if (!handles.insert(ascii_lower(u)).second) {
      throw Error("manifest: duplicate outlet '" + u + "'");
    }
  }
  std::set<LabelPointer> pointers;
  for (const auto& lp : label_pointers) {
    if (!pointers.insert(lp).second) {
      throw Error("manifest: duplicate label pointer '" + lp.pair_id + "'");
    }
    const auto parts = split_pair_id(lp.pair_id);
    if (!parts || !ids.contains(parts->first) || !ids.contains(parts->second)) {
      throw Error("manifest: label pointer '" + lp.pair_id +
                  "' references ids not in the manifest");
    }
  }
}

void RehydrationManifest::write(std::ostream& out) const {
  out << kOutlets << '\n';
  for (const auto& u : outlet_usernames) out << u << '\n';
  out << kNewsIds << '\n';
  for (const auto& id : news_ids) out << id << '\n';
  out << kReplyIds << '\n';
  for (const auto& id : reply_ids) out << id << '\n';
  out << kLabelPointers << '\n';
  for (const auto& lp : label_pointers) {
    out << lp.pair_id << '\t' << lp.annotator_id << '\n';
  }
}

RehydrationManifest RehydrationManifest::read(std::istream& in) {
  RehydrationManifest m;
  std::vector<std::string>* target = nullptr;
  bool in_labels = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view v = trim(line);
    if (v.empty()) continue;
    if (v.front() == '#') {
      in_labels = false;
      if (v == kOutlets) {
        target = &m.outlet_usernames;
      } else if (v == kNewsIds) {
        target = &m.news_ids;
      } else if (v == kReplyIds) {
        target = &m.reply_ids;
      } else if (v == kLabelPointers) {
        target = nullptr;
        in_labels = true;
      } else {
        throw Error("manifest line " + std::to_string(lineno) +
                    ": unknown section '" + std::string(v) + "'");
      }
      continue;
    }
    if (in_labels) {
      const auto fields = split(v, '\t');
      if (fields.size() != 2) {
        throw Error("manifest line " + std::to_string(lineno) +
                    ": label pointer must be pair_id<TAB>annotator_id");
      }
      m.label_pointers.push_back({fields[0], fields[1]});
    } else if (target != nullptr) {
      target->emplace_back(v);
    } else {
      throw Error("manifest line " + std::to_string(lineno) +
                  ": entry before any section tag");
    }
  }
  m.validate();
  return m;
}

RehydrationManifest export_manifest(const Corpus& corpus) {
  if (corpus.size() == 0) throw Error("cannot export a manifest for an empty corpus");
  RehydrationManifest m;
  std::unordered_set<std::string> handles;
  for (const auto& t : corpus.records()) {
    if (t.is_reply()) {
      m.reply_ids.push_back(t.id);
    } else {
      m.news_ids.push_back(t.id);
      if (handles.insert(ascii_lower(t.author)).second) {
        m.outlet_usernames.push_back(t.author);
      }
    }
  }
  return m;
}

RehydrationManifest export_manifest(std::span<const ConversationPair> pairs,
                                    std::span<const LabelPointer> labels) {
  if (pairs.empty()) throw Error("cannot export a manifest for an empty pair set");
  RehydrationManifest m;
  std::unordered_set<std::string> handles, news, replies;
  for (const auto& p : pairs) {
    if (handles.insert(ascii_lower(p.news.author)).second) {
      m.outlet_usernames.push_back(p.news.author);
    }
    push_unique(m.news_ids, news, p.news.id);
    push_unique(m.reply_ids, replies, p.reply.id);
  }
  m.label_pointers.assign(labels.begin(), labels.end());
  m.validate();
  return m;
}

ImportResult import_manifest(const RehydrationManifest& manifest,
                             std::istream& hydrated,
                             const OutletRegistry& registry) {
  std::unordered_set<std::string> wanted(manifest.news_ids.begin(),
                                         manifest.news_ids.end());
  wanted.insert(manifest.reply_ids.begin(), manifest.reply_ids.end());

  std::vector<TweetRecord> records;
  std::vector<std::size_t> lines;
  RejectionReport rejected;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(hydrated, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    try {
      TweetRecord t = parse_tweet_json(line);
      if (!wanted.contains(t.id)) {
        rejected.push_back({lineno, t.id, "id not in manifest"});
        continue;
      }
      records.push_back(std::move(t));
      lines.push_back(lineno);
    } catch (const Error& e) {
      rejected.push_back({lineno, "", e.what()});
    }
  }

  ImportResult result;
  result.corpus =
      Corpus::build(std::move(records), registry, {}, std::move(rejected), lines);
  result.expected = wanted.size();
  for (const auto* section : {&manifest.news_ids, &manifest.reply_ids}) {
    for (const auto& id : *section) {
      if (result.corpus.find(id) != nullptr) {
        ++result.found;
      } else {
        result.missing_ids.push_back(id);
      }
    }
  }
  if (result.found == 0) {
    throw Error("hydration source covers none of the manifest ids");
  }
  return result;
}

}  // namespace stanceshift::corpus
