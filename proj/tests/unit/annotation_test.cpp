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

#include <algorithm>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "stanceshift/annotation.hpp"

using namespace stanceshift;
using namespace stanceshift::annotation;

namespace {

constexpr Stance P = Stance::kPositive;
constexpr Stance N = Stance::kNegative;
constexpr Stance U = Stance::kNeutral;

std::vector<AnnotationRecord> two_coders(const std::vector<std::pair<Stance, Stance>>& items,
                                         const std::string& prefix = "i") {
  std::vector<AnnotationRecord> out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    out.push_back({prefix + std::to_string(i), "a1", items[i].first});
    out.push_back({prefix + std::to_string(i), "a2", items[i].second});
  }
  return out;
}

std::vector<std::vector<int>> as_codes(const std::vector<AnnotationRecord>& recs) {
  std::map<std::string, std::vector<int>> by_item;
  for (const auto& r : recs) by_item[r.pair_id].push_back(static_cast<int>(index_of(r.label)));
  std::vector<std::vector<int>> out;
  for (auto& [k, v] : by_item) out.push_back(v);
  return out;
}

std::vector<AnnotationRecord> class_counts(std::size_t pos, std::size_t neg, std::size_t neu) {
  std::vector<AnnotationRecord> out;
  std::size_t id = 0;
  for (std::size_t i = 0; i < pos; ++i) out.push_back({std::to_string(id++), "a", P});
  for (std::size_t i = 0; i < neg; ++i) out.push_back({std::to_string(id++), "a", N});
  for (std::size_t i = 0; i < neu; ++i) out.push_back({std::to_string(id++), "a", U});
  return out;
}

}  // namespace

TEST_CASE("label file parsing") {
  std::istringstream in(
      "pair_id,annotator_id,label\n"
      "1:2,a1,POS\n"
      "1:2,a2,neg\n"
      "1:2,a1,NEU\n"
      "3:4,a1,MAYBE\n"
      "5:6,a1\n");
  const auto f = read_labels(in);
  REQUIRE(f.records.size() == 2);
  CHECK(f.records[0].label == P);
  CHECK(f.records[1].label == N);
  REQUIRE(f.rejections.size() == 3);
  CHECK(f.rejections[0].line == 4);
  CHECK(f.rejections[1].line == 5);
  CHECK(f.rejections[2].line == 6);

  std::stringstream buf;
  write_labels(buf, f.records);
  CHECK(read_labels(buf).records == f.records);
}

TEST_CASE("alpha: perfect agreement is exactly one") {
  const auto rep = krippendorff_alpha(two_coders({{P, P}, {N, N}, {U, U}, {P, P}}));
  REQUIRE(rep.alpha.has_value());
  CHECK(*rep.alpha == 1.0);
  CHECK(rep.observed_disagreement == 0.0);
}

TEST_CASE("alpha: worked four-item example") {
  const auto recs = two_coders({{P, P}, {N, N}, {P, N}, {U, U}});
  const auto rep = krippendorff_alpha(recs);
  REQUIRE(rep.alpha.has_value());
  CHECK(*rep.alpha == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(rep.observed_disagreement == doctest::Approx(0.25));
  CHECK(rep.expected_disagreement == doctest::Approx(0.75));
  CHECK(rep.n_items == 4);
  CHECK(rep.n_pairable_values == 8);
  CHECK(*rep.alpha == doctest::Approx(oracle::alpha_pairwise(as_codes(recs))));
}

TEST_CASE("alpha: coincidence matrix invariants and single-annotation items") {
  auto recs = two_coders({{P, N}, {N, N}, {U, P}, {U, U}, {P, P}});
  recs.push_back({"lonely", "a1", N});
  recs.push_back({"triple", "a1", P});
  recs.push_back({"triple", "a2", P});
  recs.push_back({"triple", "a3", U});
  const auto rep = krippendorff_alpha(recs);
  CHECK(rep.n_single_items == 1);
  CHECK(rep.n_items == 6);
  double total = 0.0;
  for (std::size_t i = 0; i < kNumStances; ++i) {
    for (std::size_t j = 0; j < kNumStances; ++j) {
      CHECK(rep.coincidence[i][j] == rep.coincidence[j][i]);
      total += rep.coincidence[i][j];
    }
  }
  CHECK(total == doctest::Approx(static_cast<double>(rep.n_pairable_values)));
  CHECK(rep.n_pairable_values == 13);
  recs.erase(recs.begin() + 10);  // drop "lonely"
  CHECK(*rep.alpha == doctest::Approx(oracle::alpha_pairwise(as_codes(recs))).epsilon(1e-12));
}

TEST_CASE("alpha: degenerate and invalid inputs") {
  const auto rep = krippendorff_alpha(two_coders({{N, N}, {N, N}, {N, N}}));
  CHECK(rep.degenerate());
  CHECK_THROWS_AS(krippendorff_alpha(two_coders({{P, N}})), Error);
  auto dup = two_coders({{P, N}, {N, N}});
  dup.push_back({"i0", "a1", U});
  CHECK_THROWS_AS(krippendorff_alpha(dup), Error);
}

TEST_CASE("alpha: invariant under item permutation, coder renaming and class relabeling") {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> cls(0, 2);
  std::vector<std::pair<Stance, Stance>> items;
  for (int i = 0; i < 60; ++i) {
    const Stance a = kAllStances[cls(rng)];
    items.push_back({a, rng() % 4 ? a : kAllStances[cls(rng)]});
  }
  auto recs = two_coders(items);
  const double base = *krippendorff_alpha(recs).alpha;
  CHECK(base == doctest::Approx(oracle::alpha_pairwise(as_codes(recs))).epsilon(1e-12));

  auto shuffled = recs;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  CHECK(*krippendorff_alpha(shuffled).alpha == doctest::Approx(base).epsilon(1e-12));

  auto renamed = recs;
  for (auto& r : renamed) r.annotator_id = r.annotator_id == "a1" ? "zed" : "amy";
  CHECK(*krippendorff_alpha(renamed).alpha == doctest::Approx(base).epsilon(1e-12));

  auto relabeled = recs;
  for (auto& r : relabeled) r.label = r.label == P ? U : (r.label == U ? N : P);
  CHECK(*krippendorff_alpha(relabeled).alpha == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("alpha: duplicating items only moves the small-sample term") {
  const std::vector<std::pair<Stance, Stance>> items = {{P, P}, {N, N}, {P, N}, {U, U}, {U, N}, {P, P}};
  auto once = two_coders(items, "a");
  auto twice = once;
  const auto copy = two_coders(items, "b");
  twice.insert(twice.end(), copy.begin(), copy.end());
  const double a1 = *krippendorff_alpha(once).alpha;
  const double a2 = *krippendorff_alpha(twice).alpha;
  CHECK(a1 == doctest::Approx(oracle::alpha_pairwise(as_codes(once))).epsilon(1e-12));
  CHECK(a2 == doctest::Approx(oracle::alpha_pairwise(as_codes(twice))).epsilon(1e-12));
  // D_e carries n/(n-1); doubling n pulls alpha towards its large-n limit.
  auto four = twice;
  for (const auto& r : two_coders(items, "c")) four.push_back(r);
  for (const auto& r : two_coders(items, "d")) four.push_back(r);
  const double a4 = *krippendorff_alpha(four).alpha;
  CHECK(std::abs(a4 - a2) < std::abs(a2 - a1));
}

TEST_CASE("alpha: independent random labels give alpha near zero") {
  std::mt19937_64 rng(20220224);
  std::uniform_int_distribution<int> cls(0, 2);
  std::vector<std::pair<Stance, Stance>> items;
  for (int i = 0; i < 1000; ++i) items.push_back({kAllStances[cls(rng)], kAllStances[cls(rng)]});
  const auto rep = krippendorff_alpha(two_coders(items));
  REQUIRE(rep.alpha.has_value());
  CHECK(std::abs(*rep.alpha) <= 0.05);
}

TEST_CASE("label distributions of the annotated datasets") {
  struct Row {
    const char* tag;
    std::size_t total, pos, neg, neu;
  };
  const Row rows[] = {{"UA", 3368, 1628, 306, 1434}, {"BY", 2874, 345, 1375, 1154},
                      {"FR", 500, 131, 240, 129},    {"DE", 500, 94, 305, 101},
                      {"IT", 500, 136, 226, 138},    {"ES", 500, 141, 184, 175}};
  for (const auto& r : rows) {
    const auto d = label_distribution(class_counts(r.pos, r.neg, r.neu), r.tag);
    CHECK(d.dataset_tag == r.tag);
    CHECK(d.total == r.total);
    CHECK(d.count(P) == r.pos);
    CHECK(d.count(N) == r.neg);
    CHECK(d.count(U) == r.neu);
  }
  const auto empty_class = label_distribution(class_counts(3, 0, 2), "X");
  CHECK(empty_class.count(N) == 0);
  CHECK(empty_class.total == 5);
  CHECK_THROWS_AS(label_distribution({}, "none"), Error);
}

TEST_CASE("merge policies") {
  const std::vector<AnnotationRecord> a = {{"1", "a1", P}, {"2", "a1", N}, {"3", "a1", U}};
  const std::vector<AnnotationRecord> b = {{"1", "a2", N}, {"2", "a2", N}, {"4", "a2", P}};

  const auto first = merge_annotations(a, b, MergePolicy::kKeepFirst);
  REQUIRE(first.records.size() == 4);
  CHECK(first.records[0].pair_id == "1");
  CHECK(first.records[0].label == P);
  CHECK(first.records[3].pair_id == "4");
  CHECK(first.dropped.empty());

  const auto strict = merge_annotations(a, b, MergePolicy::kStrictAgreement);
  CHECK(strict.records.size() == 3);
  CHECK(strict.dropped == std::vector<std::string>{"1"});

  const auto majority = merge_annotations(a, b, MergePolicy::kMajority);
  CHECK(majority.records.size() == 3);
  CHECK(majority.dropped == std::vector<std::string>{"1"});

  const std::vector<AnnotationRecord> c = {{"1", "a3", N}};
  std::vector<AnnotationRecord> ab = a;
  ab.insert(ab.end(), b.begin(), b.end());
  const auto three = merge_annotations(ab, c, MergePolicy::kMajority);
  CHECK(three.records[0].label == N);

  const std::vector<AnnotationRecord> disjoint = {{"9", "a9", U}};
  CHECK(merge_annotations(a, disjoint, MergePolicy::kKeepFirst).records.size() == 4);

  CHECK(parse_merge_policy("keep_first") == MergePolicy::kKeepFirst);
  CHECK(parse_merge_policy("strict-agreement") == MergePolicy::kStrictAgreement);
  CHECK_FALSE(parse_merge_policy("coinflip").has_value());
}

TEST_CASE("strict agreement on a doubly annotated set keeps only agreeing items") {
  std::mt19937 rng(506);
  std::vector<AnnotationRecord> a, b;
  std::size_t agree = 0;
  for (int i = 0; i < 506; ++i) {
    const Stance x = kAllStances[rng() % 3];
    const Stance y = rng() % 5 ? x : kAllStances[rng() % 3];
    agree += x == y;
    a.push_back({std::to_string(i), "r1", x});
    b.push_back({std::to_string(i), "r2", y});
  }
  const auto m = merge_annotations(a, b, MergePolicy::kStrictAgreement);
  CHECK(m.records.size() == agree);
  CHECK(m.records.size() + m.dropped.size() == 506);
}
