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

#ifndef STANCESHIFT_STANCE_EVAL_HPP_
#define STANCESHIFT_STANCE_EVAL_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stanceshift/annotation.hpp"
#include "stanceshift/common.hpp"
#include "stanceshift/corpus.hpp"
#include "stanceshift/logistic.hpp"

namespace stanceshift::eval {

using Probabilities = std::array<double, kNumStances>;  // POS, NEG, NEU

struct PredictionRecord {
  std::string pair_id;
  Stance label = kDefaultStance;
  Probabilities probs{};
  std::string model_tag;
};

struct PredictionFile {
  std::vector<PredictionRecord> records;
  RejectionReport rejections;
};

// Tolerance on the probability sum; within it the vector is renormalized.
inline constexpr double kProbabilityTolerance = 1e-6;

// "pair_id,label,p_pos,p_neg,p_neu,model_tag" per line, optional header.
// Rejects lines whose probabilities are negative, do not sum to 1 within
// kProbabilityTolerance, or whose label is not an argmax.
PredictionFile read_predictions(std::istream& in);
PredictionFile load_predictions(const std::filesystem::path& path);
void write_predictions(std::ostream& out, std::span<const PredictionRecord> records);

struct LabeledPair {
  std::string pair_id;
  std::string news_text;
  std::string reply_text;
  Stance label = kDefaultStance;
};

// Joins pairs with labels on pair id (first label per pair wins). When
// `pairs` is empty every labeled id is kept with empty texts.
std::vector<LabeledPair> join_labels(std::span<const corpus::ConversationPair> pairs,
                                     std::span<const annotation::AnnotationRecord> labels);

struct DatasetSplit {
  std::size_t k = 0;
  std::vector<std::size_t> fold_of;  // parallel to the input items
  std::map<std::string, std::size_t> fold_by_id;
  std::vector<std::string> warnings;

  std::vector<std::size_t> indices_in(std::size_t fold) const;
  std::vector<std::size_t> indices_not_in(std::size_t fold) const;
};

// Items of each class are shuffled with `seed` and dealt round-robin into k
// folds, continuing the deal across classes, so per-class fold counts differ
// by at most one and so do fold sizes. Throws Error for k < 2 or k larger
// than the dataset; a class smaller than k only adds a warning.
DatasetSplit stratified_kfold(std::span<const LabeledPair> items, std::size_t k,
                              std::uint64_t seed);

enum class BaselineKind { kZeroR, kBowLogistic };

std::optional<BaselineKind> parse_baseline(std::string_view s);
std::string_view baseline_tag(BaselineKind kind);

// Majority class of `labels`; ties go to the earlier class in POS, NEG, NEU
// order. Throws Error on empty input.
Stance majority_class(std::span<const Stance> labels);

std::vector<PredictionRecord> train_predict_baseline(BaselineKind kind,
                                                     std::span<const LabeledPair> train,
                                                     std::span<const LabeledPair> test,
                                                     const LogisticOptions& options = {});

// Grid search over options.l2_grid by inner cross-validation on `train`.
// Returns options.l2 when the grid is empty or `train` is smaller than
// options.grid_folds.
double select_l2(std::span<const LabeledPair> train, const LogisticOptions& options);

// Rows are gold classes, columns predicted classes.
using ConfusionMatrix = std::array<std::array<std::size_t, kNumStances>, kNumStances>;

struct EvalReport {
  std::size_t n = 0;
  double accuracy = 0.0;
  double macro_f1 = 0.0;
  std::array<double, kNumStances> precision{};
  std::array<double, kNumStances> recall{};
  std::array<double, kNumStances> per_class_f1{};  // 0 when undefined
  ConfusionMatrix confusion{};
};

EvalReport evaluate_labels(std::span<const Stance> gold, std::span<const Stance> predicted);

// Throws Error when prediction and gold key sets differ or a pair is
// predicted twice.
EvalReport evaluate(std::span<const PredictionRecord> predictions,
                    const std::map<std::string, Stance>& gold);

struct CrossValReport {
  std::vector<EvalReport> folds;
  double accuracy = 0.0;  // unweighted mean over folds
  double macro_f1 = 0.0;  // unweighted mean over folds
  ConfusionMatrix confusion{};  // summed over folds
  std::vector<std::string> warnings;
};

CrossValReport cross_validate(BaselineKind kind, std::span<const LabeledPair> items,
                              std::size_t k, std::uint64_t seed,
                              const LogisticOptions& options = {});

// Evaluates externally produced predictions fold by fold with the same
// stratified split, averaging like cross_validate.
CrossValReport cross_validate_predictions(std::span<const PredictionRecord> predictions,
                                          std::span<const LabeledPair> items,
                                          std::size_t k, std::uint64_t seed);

struct Dataset {
  std::string tag;
  std::vector<LabeledPair> items;
};

struct CrossLingualOptions {
  bool run_bow = false;
  LogisticOptions logistic;
  // Adapter predictions covering holdout pairs; absent means baselines only.
  const std::vector<PredictionRecord>* adapter = nullptr;
};

struct CrossLingualRow {
  std::vector<std::string> train_tags;
  std::string test_tag;
  // Majority class of the holdout itself.
  EvalReport zero_r;
  // Majority class of the training union, predicted on the holdout.
  EvalReport zero_r_train;
  std::optional<EvalReport> bow;
  std::optional<EvalReport> adapter;
};

struct CrossLingualGrid {
  std::vector<CrossLingualRow> rows;
  std::vector<std::string> notices;
};

// For every dataset: train on the union of the others and test on it.
// Throws Error for fewer than two datasets or an empty one.
CrossLingualGrid cross_lingual_experiment(std::span<const Dataset> datasets,
                                          const CrossLingualOptions& options = {});

// "gold,POS,NEG,NEU" header followed by one row per gold class.
void write_confusion_csv(std::ostream& out, const ConfusionMatrix& m);

}  // namespace stanceshift::eval

#endif  // STANCESHIFT_STANCE_EVAL_HPP_
