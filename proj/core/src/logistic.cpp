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

#include "stanceshift/logistic.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "stanceshift/text.hpp"

namespace stanceshift::eval {

std::vector<std::string> pair_tokens(std::string_view news_text,
                                     std::string_view reply_text) {
  std::vector<std::string> out = text::tokenize(news_text);
  out.emplace_back(kSeparatorToken);
  for (auto& t : text::tokenize(reply_text)) out.push_back(std::move(t));
  return out;
}

Vocabulary Vocabulary::build(std::span<const std::vector<std::string>> documents) {
  std::set<std::string> all;
  for (const auto& d : documents) all.insert(d.begin(), d.end());
  Vocabulary v;
  v.terms_.assign(all.begin(), all.end());
  for (std::size_t i = 0; i < v.terms_.size(); ++i) {
    v.index_.emplace(v.terms_[i], static_cast<long>(i));
  }
  return v;
}

long Vocabulary::index_of(const std::string& term) const {
  const auto it = index_.find(term);
  return it == index_.end() ? -1 : it->second;
}

Eigen::SparseMatrix<double, Eigen::RowMajor> Vocabulary::encode(
    std::span<const std::vector<std::string>> documents) const {
  std::vector<Eigen::Triplet<double>> triplets;
  for (std::size_t r = 0; r < documents.size(); ++r) {
    for (const auto& tok : documents[r]) {
      const long c = index_of(tok);
      if (c >= 0) triplets.emplace_back(static_cast<int>(r), static_cast<int>(c), 1.0);
    }
  }
  Eigen::SparseMatrix<double, Eigen::RowMajor> m(static_cast<Eigen::Index>(documents.size()),
                                                 static_cast<Eigen::Index>(size()));
  m.setFromTriplets(triplets.begin(), triplets.end());  // duplicates are summed
  return m;
}

std::array<double, kNumStances> softmax(const Eigen::Vector3d& logits) {
  const double mx = logits.maxCoeff();
  std::array<double, kNumStances> p{};
  double z = 0.0;
  for (std::size_t c = 0; c < kNumStances; ++c) {
    p[c] = std::exp(logits(static_cast<Eigen::Index>(c)) - mx);
    z += p[c];
  }
  for (auto& v : p) v /= z;
  return p;
}

LogisticObjective::LogisticObjective(
    const Eigen::SparseMatrix<double, Eigen::RowMajor>& features,
    std::span<const Stance> labels, double l2)
    : x_(features), y_(labels.begin(), labels.end()), l2_(l2) {
  if (static_cast<std::size_t>(x_.rows()) != y_.size()) {
    throw Error("feature rows and labels differ in length");
  }
}

std::size_t LogisticObjective::num_parameters() const {
  return kNumStances * static_cast<std::size_t>(x_.cols()) + kNumStances;
}

double LogisticObjective::evaluate(const Eigen::VectorXd& theta,
                                   Eigen::VectorXd* gradient) const {
  const Eigen::Index f = x_.cols();
  const Eigen::Index k = static_cast<Eigen::Index>(kNumStances);
  const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
      w(theta.data(), k, f);
  const Eigen::Map<const Eigen::VectorXd> b(theta.data() + k * f, k);
  const double n = static_cast<double>(x_.rows());

  // logits: n x k
  const Eigen::MatrixXd logits = (x_ * w.transpose()).rowwise() + b.transpose();
  Eigen::MatrixXd residual(x_.rows(), k);
  double loss = 0.0;
  for (Eigen::Index i = 0; i < x_.rows(); ++i) {
    const Eigen::Vector3d li = logits.row(i).transpose();
    const double mx = li.maxCoeff();
    const double lse = mx + std::log((li.array() - mx).exp().sum());
    const auto yi = static_cast<Eigen::Index>(index_of(y_[static_cast<std::size_t>(i)]));
    loss += lse - li(yi);
    for (Eigen::Index c = 0; c < k; ++c) residual(i, c) = std::exp(li(c) - lse);
    residual(i, yi) -= 1.0;
  }
  loss = loss / n + 0.5 * l2_ / n * w.squaredNorm();

  if (gradient != nullptr) {
    gradient->resize(theta.size());
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> gw(
        gradient->data(), k, f);
    Eigen::Map<Eigen::VectorXd> gb(gradient->data() + k * f, k);
    gw = (residual.transpose() * x_) / n + (l2_ / n) * w;
    gb = residual.colwise().sum().transpose() / n;
  }
  return loss;
}

BowLogisticModel BowLogisticModel::fit(std::span<const std::vector<std::string>> documents,
                                       std::span<const Stance> labels,
                                       const LogisticOptions& options) {
  if (documents.empty()) throw Error("bow_logistic: empty training set");
  BowLogisticModel m;
  m.vocab_ = Vocabulary::build(documents);
  if (m.vocab_.size() == 0) throw Error("bow_logistic: empty vocabulary");
  const auto x = m.vocab_.encode(documents);
  const LogisticObjective objective(x, labels, options.l2);

  Eigen::VectorXd theta = Eigen::VectorXd::Zero(
      static_cast<Eigen::Index>(objective.num_parameters()));
  Eigen::VectorXd grad;
  objective.evaluate(theta, &grad);
  std::size_t step = 0;
  while (step < options.max_steps && grad.norm() >= options.gradient_tolerance) {
    theta -= options.learning_rate * grad;
    objective.evaluate(theta, &grad);
    ++step;
  }
  m.steps_ = step;
  m.gradient_norm_ = grad.norm();

  const Eigen::Index f = static_cast<Eigen::Index>(m.vocab_.size());
  const Eigen::Index k = static_cast<Eigen::Index>(kNumStances);
  m.weights_ = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                              Eigen::RowMajor>>(theta.data(), k, f);
  m.bias_ = theta.segment(k * f, k);
  return m;
}

std::array<double, kNumStances> BowLogisticModel::predict_proba(
    const std::vector<std::string>& doc) const {
  Eigen::Vector3d logits = bias_;
  for (const auto& tok : doc) {
    const long c = vocab_.index_of(tok);
    if (c >= 0) logits += weights_.col(c);
  }
  return softmax(logits);
}

}  // namespace stanceshift::eval
