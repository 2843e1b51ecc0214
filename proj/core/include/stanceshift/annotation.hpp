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

#ifndef STANCESHIFT_ANNOTATION_HPP_
#define STANCESHIFT_ANNOTATION_HPP_

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stanceshift/common.hpp"

namespace stanceshift::annotation {

struct AnnotationRecord {
  std::string pair_id;
  std::string annotator_id;
  Stance label = kDefaultStance;

  bool operator==(const AnnotationRecord&) const = default;
};

struct LabelFile {
  std::vector<AnnotationRecord> records;
  RejectionReport rejections;
};

// Label file: "pair_id,annotator_id,label" per line with label one of
// POS/NEG/NEU. A leading header line is skipped. Repeated
// (pair_id, annotator_id) keys are rejected, first occurrence wins.
LabelFile read_labels(std::istream& in);
LabelFile load_labels(const std::filesystem::path& path);
void write_labels(std::ostream& out, std::span<const AnnotationRecord> records);

using CoincidenceMatrix = std::array<std::array<double, kNumStances>, kNumStances>;

struct AgreementReport {
  // nullopt when expected disagreement is zero (a single class overall).
  std::optional<double> alpha;
  std::size_t n_items = 0;         // items with >= 2 annotations
  std::size_t n_single_items = 0;  // items with exactly one annotation
  std::size_t n_pairable_values = 0;
  CoincidenceMatrix coincidence{};
  double observed_disagreement = 0.0;
  double expected_disagreement = 0.0;

  bool degenerate() const { return !alpha.has_value(); }
};

// Krippendorff's alpha with the nominal difference function, computed from
// the coincidence matrix over pairable values. Throws Error on duplicate
// (pair_id, annotator_id) keys or when fewer than two items carry two or
// more annotations.
AgreementReport krippendorff_alpha(std::span<const AnnotationRecord> records);

struct LabelDistribution {
  std::string dataset_tag;
  std::array<std::size_t, kNumStances> counts{};
  std::size_t total = 0;

  std::size_t count(Stance s) const { return counts[index_of(s)]; }
};

// Counts records (not distinct pairs) per class. Throws Error when empty.
LabelDistribution label_distribution(std::span<const AnnotationRecord> records,
                                     std::string dataset_tag);

enum class MergePolicy { kKeepFirst, kMajority, kStrictAgreement };

std::optional<MergePolicy> parse_merge_policy(std::string_view s);

struct MergeResult {
  std::vector<AnnotationRecord> records;  // one per pair_id
  std::vector<std::string> dropped;       // pair ids without a merged label
};

// kKeepFirst: the first label for a pair (primary before secondary) wins.
// kMajority: a label held by strictly more annotators than any other wins;
//   ties are dropped.
// kStrictAgreement: kept only when every annotation agrees.
// Output is ordered by first appearance of the pair id.
MergeResult merge_annotations(std::span<const AnnotationRecord> primary,
                              std::span<const AnnotationRecord> secondary,
                              MergePolicy policy);

}  // namespace stanceshift::annotation

#endif  // STANCESHIFT_ANNOTATION_HPP_
