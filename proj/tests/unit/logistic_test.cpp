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
#include <array>
#include <cmath>
#include <functional>
#include <random>

#include "stanceshift/logistic.hpp"

using namespace stanceshift;
using namespace stanceshift::eval;

namespace {

std::vector<std::vector<std::string>> separable_docs(std::vector<Stance>& labels) {
  const char* news[] = {"Refugees arrive at the border", "Government announces migration plan",
                        "Volunteers gather at the station"};
  const char* pos[] = {"welcome everyone", "welcome and thanks", "so welcome here"};
  const char* neg[] = {"shame on them", "total shame", "what a shame"};
  const char* neu[] = {"when is the vote", "source please", "more details soon"};
  std::vector<std::vector<std::string>> docs;
  for (int i = 0; i < 10; ++i) {
    const char* n = news[i % 3];
    docs.push_back(pair_tokens(n, pos[i % 3]));
    labels.push_back(Stance::kPositive);
    docs.push_back(pair_tokens(n, neg[i % 3]));
    labels.push_back(Stance::kNegative);
    docs.push_back(pair_tokens(n, neu[i % 3]));
    labels.push_back(Stance::kNeutral);
  }
  return docs;
}

}  // namespace

TEST_CASE("pair tokens") {
  const auto t = pair_tokens("Refugees @unhcr https://t.co/x arrive", "#Welcome!");
  CHECK(t == std::vector<std::string>{"refugees", "arrive", std::string(kSeparatorToken), "welcome"});
}

TEST_CASE("vocabulary build and encode") {
  const std::vector<std::vector<std::string>> docs = {{"b", "a", "b"}, {"c"}};
  const auto v = Vocabulary::build(docs);
  CHECK(v.terms() == std::vector<std::string>{"a", "b", "c"});
  CHECK(v.index_of("b") == 1);
  CHECK(v.index_of("z") == -1);
  const std::vector<std::vector<std::string>> q = {{"b", "b", "z"}, {}};
  const auto m = v.encode(q);
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 3);
  CHECK(m.coeff(0, 1) == 2.0);
  CHECK(m.coeff(0, 0) == 0.0);
  CHECK(m.row(1).sum() == 0.0);
}

TEST_CASE("softmax is stable and normalized") {
  const auto p = softmax(Eigen::Vector3d(1000.0, 1000.0, -1000.0));
  CHECK(p[0] == doctest::Approx(0.5));
  CHECK(p[1] == doctest::Approx(0.5));
  CHECK(p[2] == doctest::Approx(0.0));
  const auto q = softmax(Eigen::Vector3d(0.0, 0.0, 0.0));
  CHECK(q[0] + q[1] + q[2] == doctest::Approx(1.0));
}

TEST_CASE("objective at zero is log 3") {
  std::vector<Stance> labels;
  const auto docs = separable_docs(labels);
  const auto v = Vocabulary::build(docs);
  const auto x = v.encode(docs);
  LogisticObjective obj(x, labels, 1.0);
  CHECK(obj.num_parameters() == 3 * v.size() + 3);
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(obj.num_parameters()));
  CHECK(obj.evaluate(theta, nullptr) == doctest::Approx(std::log(3.0)));
}

TEST_CASE("gradient matches central finite differences") {
  std::vector<Stance> labels;
  const auto docs = separable_docs(labels);
  const auto v = Vocabulary::build(docs);
  const auto x = v.encode(docs);
  LogisticObjective obj(x, labels, 0.7);
  const auto n = static_cast<Eigen::Index>(obj.num_parameters());
  std::mt19937_64 rng(10);
  std::normal_distribution<double> g(0.0, 1.0);
  const double h = 1e-5;
  for (int point = 0; point < 10; ++point) {
    Eigen::VectorXd theta(n);
    for (Eigen::Index i = 0; i < n; ++i) theta[i] = g(rng);
    Eigen::VectorXd grad;
    obj.evaluate(theta, &grad);
    REQUIRE(grad.size() == n);
    Eigen::VectorXd fd(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      Eigen::VectorXd up = theta;
      Eigen::VectorXd down = theta;
      up[i] += h;
      down[i] -= h;
      fd[i] = (obj.evaluate(up, nullptr) - obj.evaluate(down, nullptr)) / (2.0 * h);
    }
    CHECK((grad - fd).norm() / grad.norm() <= 1e-5);
    for (Eigen::Index i = 0; i < n; ++i) {
      CHECK(std::abs(grad[i] - fd[i]) <= 1e-5 * std::max(std::abs(grad[i]), std::abs(fd[i])) + 1e-9);
    }
  }
}

TEST_CASE("separable toy set is fitted perfectly") {
  std::vector<Stance> labels;
  const auto docs = separable_docs(labels);
  REQUIRE(docs.size() == 30);
  const auto model = BowLogisticModel::fit(docs, labels);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const auto p = model.predict_proba(docs[i]);
    const auto best = static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
    correct += best == index_of(labels[i]);
    CHECK(p[0] + p[1] + p[2] == doctest::Approx(1.0));
  }
  CHECK(correct == docs.size());
  CHECK(model.weights().allFinite());
  CHECK(model.bias().allFinite());
}

TEST_CASE("two-feature projection of the toy set is linearly separable") {
  // Brute-force search over small integer weights confirms the fixture is
  // separable by a linear rule, independently of the trained model.
  std::vector<Stance> labels;
  const auto docs = separable_docs(labels);
  std::vector<std::array<int, 2>> feats;
  for (const auto& d : docs) {
    feats.push_back({static_cast<int>(std::count(d.begin(), d.end(), "welcome")),
                     static_cast<int>(std::count(d.begin(), d.end(), "shame"))});
  }
  bool found = false;
  std::array<int, 9> w{};
  const int lo = -2;
  const int hi = 2;
  std::function<void(std::size_t)> search = [&](std::size_t k) {
    if (found) return;
    if (k == w.size()) {
      for (std::size_t i = 0; i < feats.size(); ++i) {
        std::array<int, 3> s{};
        for (int c = 0; c < 3; ++c) s[c] = w[3 * c] * feats[i][0] + w[3 * c + 1] * feats[i][1] + w[3 * c + 2];
        const int want = static_cast<int>(index_of(labels[i]));
        for (int c = 0; c < 3; ++c) {
          if (c != want && s[c] >= s[want]) return;
        }
      }
      found = true;
      return;
    }
    for (int v = lo; v <= hi && !found; ++v) {
      w[k] = v;
      search(k + 1);
    }
  };
  search(0);
  CHECK(found);

  std::vector<std::vector<std::string>> projected;
  for (const auto& f : feats) {
    std::vector<std::string> d(static_cast<std::size_t>(f[0]), "welcome");
    for (int i = 0; i < f[1]; ++i) d.push_back("shame");
    d.push_back("bias");
    projected.push_back(d);
  }
  const auto model = BowLogisticModel::fit(projected, labels);
  for (std::size_t i = 0; i < projected.size(); ++i) {
    const auto p = model.predict_proba(projected[i]);
    CHECK(static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin()) ==
          index_of(labels[i]));
  }
}

TEST_CASE("fit rejects empty input") {
  std::vector<std::vector<std::string>> none;
  std::vector<Stance> no_labels;
  CHECK_THROWS_AS(BowLogisticModel::fit(none, no_labels), Error);
  std::vector<std::vector<std::string>> blank = {{}};
  std::vector<Stance> one = {Stance::kPositive};
  CHECK_THROWS_AS(BowLogisticModel::fit(blank, one), Error);
}
