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

#ifndef STANCESHIFT_LOGISTIC_HPP_
#define STANCESHIFT_LOGISTIC_HPP_

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stanceshift/common.hpp"

// Bag-of-words multinomial logistic regression, the desk-scale stand-in for
// the neural stance model.
namespace stanceshift::eval {

inline constexpr std::string_view kSeparatorToken = "[SEP]";

// Unigrams of "news [SEP] reply" after removing URLs and mentions, stripping
// the hashtag prefix and lowercasing.
std::vector<std::string> pair_tokens(std::string_view news_text,
                                     std::string_view reply_text);

class Vocabulary {
 public:
  // Sorted term list; indices follow that order.
  static Vocabulary build(std::span<const std::vector<std::string>> documents);

  std::size_t size() const { return terms_.size(); }
  // -1 for out-of-vocabulary terms.
  long index_of(const std::string& term) const;
  const std::vector<std::string>& terms() const { return terms_; }

  // Rows are documents, columns are term counts; unknown terms are ignored.
  Eigen::SparseMatrix<double, Eigen::RowMajor> encode(
      std::span<const std::vector<std::string>> documents) const;

 private:
  std::vector<std::string> terms_;
  std::map<std::string, long> index_;
};

struct LogisticOptions {
  double l2 = 1.0;
  double learning_rate = 0.1;
  double gradient_tolerance = 1e-6;
  std::size_t max_steps = 10000;
  // When non-empty, `l2` is replaced per training set by the grid value with
  // the best inner stratified cross-validation macro-F1 (ties: first value).
  std::vector<double> l2_grid;
  std::size_t grid_folds = 3;
  std::uint64_t grid_seed = 0;
};

// Mean cross-entropy plus (l2 / 2n) * ||W||^2 over a fixed design. The
// parameter vector packs W (classes x features, row-major) followed by the
// bias (one per class); the bias is not penalized.
class LogisticObjective {
 public:
  LogisticObjective(const Eigen::SparseMatrix<double, Eigen::RowMajor>& features,
                    std::span<const Stance> labels, double l2);

  std::size_t num_parameters() const;
  // Returns the objective; fills `gradient` when non-null.
  double evaluate(const Eigen::VectorXd& theta, Eigen::VectorXd* gradient) const;

 private:
  const Eigen::SparseMatrix<double, Eigen::RowMajor>& x_;
  std::vector<Stance> y_;
  double l2_;
};

class BowLogisticModel {
 public:
  // Full-batch gradient descent from zero weights until the gradient norm
  // drops below the tolerance or the step budget is spent. Throws Error on
  // an empty vocabulary or empty training set.
  static BowLogisticModel fit(std::span<const std::vector<std::string>> documents,
                              std::span<const Stance> labels,
                              const LogisticOptions& options = {});

  std::array<double, kNumStances> predict_proba(const std::vector<std::string>& doc) const;

  const Vocabulary& vocabulary() const { return vocab_; }
  const Eigen::MatrixXd& weights() const { return weights_; }
  const Eigen::VectorXd& bias() const { return bias_; }
  std::size_t steps() const { return steps_; }
  double final_gradient_norm() const { return gradient_norm_; }

 private:
  Vocabulary vocab_;
  Eigen::MatrixXd weights_;  // classes x features
  Eigen::VectorXd bias_;
  std::size_t steps_ = 0;
  double gradient_norm_ = 0.0;
};

// Numerically stable softmax.
std::array<double, kNumStances> softmax(const Eigen::Vector3d& logits);

}  // namespace stanceshift::eval

#endif  // STANCESHIFT_LOGISTIC_HPP_
