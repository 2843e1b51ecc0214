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

#include "stanceshift/annotation.hpp"

#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <unordered_map>
#include <utility>

namespace stanceshift::annotation {

LabelFile read_labels(std::istream& in) {
  LabelFile out;
  std::set<std::pair<std::string, std::string>> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view v = trim(line);
    if (v.empty() || v.front() == '#') continue;
    const auto fields = split(v, v.find('\t') != std::string_view::npos ? '\t' : ',');
    if (fields.size() != 3) {
      out.rejections.push_back({lineno, "", "expected pair_id,annotator_id,label"});
      continue;
    }
    const std::string pair_id(trim(fields[0]));
    const std::string annotator(trim(fields[1]));
    const auto label = parse_stance(fields[2]);
    if (!label) {
      if (ascii_lower(pair_id) == "pair_id") continue;  // header
      out.rejections.push_back(
          {lineno, pair_id, "unknown label '" + std::string(trim(fields[2])) + "'"});
      continue;
    }
    if (pair_id.empty() || annotator.empty()) {
      out.rejections.push_back({lineno, pair_id, "empty pair_id or annotator_id"});
      continue;
    }
    if (!seen.emplace(pair_id, annotator).second) {
      out.rejections.push_back({lineno, pair_id, "duplicate (pair_id, annotator_id)"});
      continue;
    }
    out.records.push_back({pair_id, annotator, *label});
  }
  return out;
}

LabelFile load_labels(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open label file " + path.string());
  return read_labels(in);
}

void write_labels(std::ostream& out, std::span<const AnnotationRecord> records) {
  out << "pair_id,annotator_id,label\n";
  for (const auto& r : records) {
    out << r.pair_id << ',' << r.annotator_id << ',' << stance_token(r.label) << '\n';
  }
}

AgreementReport krippendorff_alpha(std::span<const AnnotationRecord> records) {
  // Group values by item, keeping first-appearance order for determinism.
  std::unordered_map<std::string, std::size_t> item_index;
  std::vector<std::array<std::size_t, kNumStances>> item_counts;
  std::set<std::pair<std::string, std::string>> keys;
  for (const auto& r : records) {
    if (!keys.emplace(r.pair_id, r.annotator_id).second) {
      throw Error("duplicate annotation for pair '" + r.pair_id + "' by '" +
                  r.annotator_id + "'");
    }
    const auto [it, inserted] = item_index.emplace(r.pair_id, item_counts.size());
    if (inserted) item_counts.push_back({});
    ++item_counts[it->second][index_of(r.label)];
  }

  AgreementReport rep;
  for (const auto& counts : item_counts) {
    std::size_t m = 0;
    for (auto c : counts) m += c;
    if (m < 2) {
      ++rep.n_single_items;
      continue;
    }
    ++rep.n_items;
    rep.n_pairable_values += m;
    // Each ordered pair of values from distinct coders adds 1/(m-1).
    const double w = 1.0 / static_cast<double>(m - 1);
    for (std::size_t c = 0; c < kNumStances; ++c) {
      for (std::size_t k = 0; k < kNumStances; ++k) {
        const double nc = static_cast<double>(counts[c]);
        const double pairs = c == k ? nc * (nc - 1.0) : nc * counts[k];
        rep.coincidence[c][k] += pairs * w;
      }
    }
  }
  if (rep.n_items < 2) {
    throw Error("krippendorff_alpha needs at least two items with two or more "
                "annotations");
  }

  const double n = static_cast<double>(rep.n_pairable_values);
  std::array<double, kNumStances> marginals{};
  double disagree_observed = 0.0;
  for (std::size_t c = 0; c < kNumStances; ++c) {
    for (std::size_t k = 0; k < kNumStances; ++k) {
      marginals[c] += rep.coincidence[c][k];
      if (c != k) disagree_observed += rep.coincidence[c][k];
    }
  }
  double disagree_expected = 0.0;
  for (std::size_t c = 0; c < kNumStances; ++c) {
    for (std::size_t k = 0; k < kNumStances; ++k) {
      if (c != k) disagree_expected += marginals[c] * marginals[k];
    }
  }
  rep.observed_disagreement = disagree_observed / n;
  rep.expected_disagreement = disagree_expected / (n * (n - 1.0));
  if (rep.expected_disagreement > 0.0) {
    rep.alpha = rep.observed_disagreement == 0.0
                    ? 1.0
                    : 1.0 - rep.observed_disagreement / rep.expected_disagreement;
  }
  return rep;
}

LabelDistribution label_distribution(std::span<const AnnotationRecord> records,
                                     std::string dataset_tag) {
  if (records.empty()) throw Error("label_distribution: no records");
  LabelDistribution d;
  d.dataset_tag = std::move(dataset_tag);
  for (const auto& r : records) ++d.counts[index_of(r.label)];
  d.total = records.size();
  return d;
}

std::optional<MergePolicy> parse_merge_policy(std::string_view s) {
  const std::string v = ascii_lower(trim(s));
  if (v == "keep-first" || v == "keep_first") return MergePolicy::kKeepFirst;
  if (v == "majority") return MergePolicy::kMajority;
  if (v == "strict-agreement" || v == "strict_agreement" || v == "strict") {
    return MergePolicy::kStrictAgreement;
  }
  return std::nullopt;
}

MergeResult merge_annotations(std::span<const AnnotationRecord> primary,
                              std::span<const AnnotationRecord> secondary,
                              MergePolicy policy) {
  std::vector<std::string> order;
  std::unordered_map<std::string, std::vector<const AnnotationRecord*>> by_pair;
  for (const auto* set : {&primary, &secondary}) {
    for (const auto& r : *set) {
      auto& bucket = by_pair[r.pair_id];
      if (bucket.empty()) order.push_back(r.pair_id);
      bucket.push_back(&r);
    }
  }

  MergeResult out;
  for (const auto& pair_id : order) {
    const auto& anns = by_pair[pair_id];
    switch (policy) {
      case MergePolicy::kKeepFirst:
        out.records.push_back(*anns.front());
        break;
      case MergePolicy::kMajority: {
        std::array<std::size_t, kNumStances> counts{};
        for (const auto* a : anns) ++counts[index_of(a->label)];
        std::size_t best = 0;
        for (std::size_t c = 1; c < kNumStances; ++c) {
          if (counts[c] > counts[best]) best = c;
        }
        std::size_t leaders = 0;
        for (auto c : counts) leaders += c == counts[best] ? 1 : 0;
        if (leaders > 1) {
          out.dropped.push_back(pair_id);
        } else {
          out.records.push_back({pair_id, "majority", kAllStances[best]});
        }
        break;
      }
      case MergePolicy::kStrictAgreement: {
        const Stance first = anns.front()->label;
        bool agree = true;
        for (const auto* a : anns) agree = agree && a->label == first;
        if (agree) {
          out.records.push_back(anns.size() == 1
                                    ? *anns.front()
                                    : AnnotationRecord{pair_id, "agreed", first});
        } else {
          out.dropped.push_back(pair_id);
        }
        break;
      }
    }
  }
  return out;
}

}  // namespace stanceshift::annotation
