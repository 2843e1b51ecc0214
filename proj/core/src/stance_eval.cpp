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

#include "stanceshift/stance_eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <set>
#include <unordered_map>

namespace stanceshift::eval {

// --- Prediction files ------------------------------------------------------

PredictionFile read_predictions(std::istream& in) {
  PredictionFile out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view v = trim(line);
    if (v.empty() || v.front() == '#') continue;
    const auto fields = parse_csv_record(v);
    if (!fields.empty() && ascii_lower(trim(fields[0])) == "pair_id") continue;
    const auto reject = [&](std::string id, std::string reason) {
      out.rejections.push_back({lineno, std::move(id), std::move(reason)});
    };
    if (fields.size() != 6) {
      reject("", "expected pair_id,label,p_pos,p_neg,p_neu,model_tag");
      continue;
    }
    PredictionRecord r;
    r.pair_id = std::string(trim(fields[0]));
    const auto label = parse_stance(fields[1]);
    if (!label) {
      reject(r.pair_id, "unknown label '" + fields[1] + "'");
      continue;
    }
    r.label = *label;
    bool ok = true;
    for (std::size_t c = 0; c < kNumStances; ++c) {
      const std::string f(trim(fields[2 + c]));
      char* end = nullptr;
      r.probs[c] = std::strtod(f.c_str(), &end);
      if (f.empty() || end != f.c_str() + f.size() || !std::isfinite(r.probs[c])) {
        ok = false;
      }
    }
    if (!ok) {
      reject(r.pair_id, "unparseable probability");
      continue;
    }
    if (std::any_of(r.probs.begin(), r.probs.end(), [](double p) { return p < 0.0; })) {
      reject(r.pair_id, "negative probability");
      continue;
    }
    const double sum = r.probs[0] + r.probs[1] + r.probs[2];
    if (std::abs(sum - 1.0) > kProbabilityTolerance) {
      reject(r.pair_id, "probabilities sum to " + format_fixed(sum, 9));
      continue;
    }
    for (auto& p : r.probs) p /= sum;
    const double mx = *std::max_element(r.probs.begin(), r.probs.end());
    if (r.probs[index_of(r.label)] < mx) {
      reject(r.pair_id, "label is not the argmax of probs");
      continue;
    }
    r.model_tag = std::string(trim(fields[5]));
    out.records.push_back(std::move(r));
  }
  return out;
}

PredictionFile load_predictions(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open predictions file " + path.string());
  return read_predictions(in);
}

void write_predictions(std::ostream& out, std::span<const PredictionRecord> records) {
  out << "pair_id,label,p_pos,p_neg,p_neu,model_tag\n";
  for (const auto& r : records) {
    out << csv_field(r.pair_id) << ',' << stance_token(r.label);
    for (double p : r.probs) out << ',' << format_fixed(p, 9);
    out << ',' << csv_field(r.model_tag) << '\n';
  }
}

std::vector<LabeledPair> join_labels(std::span<const corpus::ConversationPair> pairs,
                                     std::span<const annotation::AnnotationRecord> labels) {
  std::vector<LabeledPair> out;
  std::set<std::string> seen;
  if (pairs.empty()) {
    for (const auto& r : labels) {
      if (seen.insert(r.pair_id).second) out.push_back({r.pair_id, "", "", r.label});
    }
    return out;
  }
  std::unordered_map<std::string, const corpus::ConversationPair*> by_id;
  for (const auto& p : pairs) by_id.emplace(p.pair_id, &p);
  for (const auto& r : labels) {
    const auto it = by_id.find(r.pair_id);
    if (it == by_id.end() || !seen.insert(r.pair_id).second) continue;
    out.push_back({r.pair_id, it->second->news.text, it->second->reply.text, r.label});
  }
  return out;
}

// --- Folds -----------------------------------------------------------------

std::vector<std::size_t> DatasetSplit::indices_in(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fold_of.size(); ++i) {
    if (fold_of[i] == fold) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> DatasetSplit::indices_not_in(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fold_of.size(); ++i) {
    if (fold_of[i] != fold) out.push_back(i);
  }
  return out;
}

DatasetSplit stratified_kfold(std::span<const LabeledPair> items, std::size_t k,
                              std::uint64_t seed) {
  if (k < 2) throw Error("stratified_kfold: k must be at least 2");
  if (items.size() < k) throw Error("stratified_kfold: fewer items than folds");
  DatasetSplit split;
  split.k = k;
  split.fold_of.assign(items.size(), 0);

  std::array<std::vector<std::size_t>, kNumStances> by_class;
  for (std::size_t i = 0; i < items.size(); ++i) {
    by_class[index_of(items[i].label)].push_back(i);
  }
  std::mt19937_64 rng(seed);
  std::size_t next_fold = 0;
  for (Stance s : kAllStances) {
    auto& idx = by_class[index_of(s)];
    if (!idx.empty() && idx.size() < k) {
      split.warnings.push_back("class " + std::string(stance_token(s)) + " has " +
                               std::to_string(idx.size()) + " items for " +
                               std::to_string(k) + " folds");
    }
    // Fisher-Yates with the engine's raw output keeps the shuffle identical
    // across standard libraries.
    for (std::size_t i = idx.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(rng() % i);
      std::swap(idx[i - 1], idx[j]);
    }
    for (std::size_t i : idx) {
      split.fold_of[i] = next_fold;
      next_fold = (next_fold + 1) % k;
    }
  }
  for (std::size_t i = 0; i < items.size(); ++i) {
    split.fold_by_id[items[i].pair_id] = split.fold_of[i];
  }
  return split;
}

// --- Baselines -------------------------------------------------------------

std::optional<BaselineKind> parse_baseline(std::string_view s) {
  const std::string v = ascii_lower(trim(s));
  if (v == "zero_r" || v == "zeror") return BaselineKind::kZeroR;
  if (v == "bow" || v == "bow_logistic") return BaselineKind::kBowLogistic;
  return std::nullopt;
}

std::string_view baseline_tag(BaselineKind kind) {
  return kind == BaselineKind::kZeroR ? "zero_r" : "bow_logistic";
}

Stance majority_class(std::span<const Stance> labels) {
  if (labels.empty()) throw Error("majority_class: no labels");
  std::array<std::size_t, kNumStances> counts{};
  for (Stance s : labels) ++counts[index_of(s)];
  std::size_t best = 0;
  for (std::size_t c = 1; c < kNumStances; ++c) {
    if (counts[c] > counts[best]) best = c;
  }
  return kAllStances[best];
}

namespace {

std::vector<Stance> labels_of(std::span<const LabeledPair> items) {
  std::vector<Stance> out;
  out.reserve(items.size());
  for (const auto& it : items) out.push_back(it.label);
  return out;
}

std::vector<PredictionRecord> constant_predictions(std::span<const LabeledPair> test,
                                                   Stance label, std::string_view tag) {
  std::vector<PredictionRecord> out;
  out.reserve(test.size());
  Probabilities probs{};
  probs[index_of(label)] = 1.0;
  for (const auto& t : test) out.push_back({t.pair_id, label, probs, std::string(tag)});
  return out;
}

std::map<std::string, Stance> gold_map(std::span<const LabeledPair> items) {
  std::map<std::string, Stance> out;
  for (const auto& it : items) out.emplace(it.pair_id, it.label);
  return out;
}

std::vector<LabeledPair> gather(std::span<const LabeledPair> items,
                                const std::vector<std::size_t>& idx) {
  std::vector<LabeledPair> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(items[i]);
  return out;
}

}  // namespace

std::vector<PredictionRecord> train_predict_baseline(BaselineKind kind,
                                                     std::span<const LabeledPair> train,
                                                     std::span<const LabeledPair> test,
                                                     const LogisticOptions& options) {
  if (train.empty()) throw Error("train_predict_baseline: empty training set");
  const std::vector<Stance> y = labels_of(train);
  if (kind == BaselineKind::kZeroR) {
    return constant_predictions(test, majority_class(y), baseline_tag(kind));
  }

  std::vector<std::vector<std::string>> docs;
  docs.reserve(train.size());
  for (const auto& t : train) docs.push_back(pair_tokens(t.news_text, t.reply_text));
  LogisticOptions fit_options = options;
  fit_options.l2 = select_l2(train, options);
  const BowLogisticModel model = BowLogisticModel::fit(docs, y, fit_options);

  std::vector<PredictionRecord> out;
  out.reserve(test.size());
  for (const auto& t : test) {
    const Probabilities p = model.predict_proba(pair_tokens(t.news_text, t.reply_text));
    const auto best = static_cast<std::size_t>(
        std::max_element(p.begin(), p.end()) - p.begin());
    out.push_back({t.pair_id, kAllStances[best], p, std::string(baseline_tag(kind))});
  }
  return out;
}

double select_l2(std::span<const LabeledPair> train, const LogisticOptions& options) {
  if (options.l2_grid.empty() || train.size() < options.grid_folds) return options.l2;
  LogisticOptions inner = options;
  inner.l2_grid.clear();
  double best = options.l2_grid.front();
  double best_f1 = -1.0;
  for (const double l2 : options.l2_grid) {
    if (!(l2 >= 0.0) || !std::isfinite(l2)) throw Error("select_l2: grid values must be finite and >= 0");
    inner.l2 = l2;
    const double f1 = cross_validate(BaselineKind::kBowLogistic, train, options.grid_folds,
                                     options.grid_seed, inner)
                          .macro_f1;
    if (f1 > best_f1) {
      best_f1 = f1;
      best = l2;
    }
  }
  return best;
}

// --- Metrics ---------------------------------------------------------------

EvalReport evaluate_labels(std::span<const Stance> gold, std::span<const Stance> predicted) {
  if (gold.size() != predicted.size()) throw Error("evaluate: length mismatch");
  if (gold.empty()) throw Error("evaluate: nothing to evaluate");
  EvalReport rep;
  rep.n = gold.size();
  for (std::size_t i = 0; i < gold.size(); ++i) {
    ++rep.confusion[index_of(gold[i])][index_of(predicted[i])];
  }
  std::size_t trace = 0;
  double f1_sum = 0.0;
  for (std::size_t c = 0; c < kNumStances; ++c) {
    const std::size_t tp = rep.confusion[c][c];
    std::size_t row = 0, col = 0;
    for (std::size_t o = 0; o < kNumStances; ++o) {
      row += rep.confusion[c][o];
      col += rep.confusion[o][c];
    }
    trace += tp;
    rep.precision[c] = col == 0 ? 0.0 : static_cast<double>(tp) / col;
    rep.recall[c] = row == 0 ? 0.0 : static_cast<double>(tp) / row;
    const std::size_t denom = row + col;  // 2tp + fp + fn
    rep.per_class_f1[c] = denom == 0 ? 0.0 : 2.0 * static_cast<double>(tp) / denom;
    f1_sum += rep.per_class_f1[c];
  }
  rep.accuracy = static_cast<double>(trace) / static_cast<double>(rep.n);
  rep.macro_f1 = f1_sum / static_cast<double>(kNumStances);
  return rep;
}

EvalReport evaluate(std::span<const PredictionRecord> predictions,
                    const std::map<std::string, Stance>& gold) {
  std::map<std::string, Stance> predicted;
  for (const auto& p : predictions) {
    if (!predicted.emplace(p.pair_id, p.label).second) {
      throw Error("evaluate: pair '" + p.pair_id + "' predicted twice");
    }
  }
  if (predicted.size() != gold.size()) {
    throw Error("evaluate: " + std::to_string(predicted.size()) + " predictions for " +
                std::to_string(gold.size()) + " gold labels");
  }
  std::vector<Stance> g, p;
  g.reserve(gold.size());
  p.reserve(gold.size());
  auto pit = predicted.begin();
  for (const auto& [id, label] : gold) {
    if (pit->first != id) throw Error("evaluate: no prediction for pair '" + id + "'");
    g.push_back(label);
    p.push_back(pit->second);
    ++pit;
  }
  return evaluate_labels(g, p);
}

namespace {

void accumulate(CrossValReport& cv, EvalReport fold) {
  for (std::size_t r = 0; r < kNumStances; ++r) {
    for (std::size_t c = 0; c < kNumStances; ++c) cv.confusion[r][c] += fold.confusion[r][c];
  }
  cv.folds.push_back(std::move(fold));
}

void finish(CrossValReport& cv) {
  double acc = 0.0, f1 = 0.0;
  for (const auto& f : cv.folds) {
    acc += f.accuracy;
    f1 += f.macro_f1;
  }
  cv.accuracy = acc / static_cast<double>(cv.folds.size());
  cv.macro_f1 = f1 / static_cast<double>(cv.folds.size());
}

}  // namespace

CrossValReport cross_validate(BaselineKind kind, std::span<const LabeledPair> items,
                              std::size_t k, std::uint64_t seed,
                              const LogisticOptions& options) {
  const DatasetSplit split = stratified_kfold(items, k, seed);
  CrossValReport cv;
  cv.warnings = split.warnings;
  for (std::size_t f = 0; f < k; ++f) {
    const auto train = gather(items, split.indices_not_in(f));
    const auto test = gather(items, split.indices_in(f));
    const auto preds = train_predict_baseline(kind, train, test, options);
    accumulate(cv, evaluate(preds, gold_map(test)));
  }
  finish(cv);
  return cv;
}

CrossValReport cross_validate_predictions(std::span<const PredictionRecord> predictions,
                                          std::span<const LabeledPair> items,
                                          std::size_t k, std::uint64_t seed) {
  std::unordered_map<std::string, const PredictionRecord*> by_id;
  for (const auto& p : predictions) by_id.emplace(p.pair_id, &p);
  const DatasetSplit split = stratified_kfold(items, k, seed);
  CrossValReport cv;
  cv.warnings = split.warnings;
  for (std::size_t f = 0; f < k; ++f) {
    const auto test = gather(items, split.indices_in(f));
    std::vector<PredictionRecord> fold_preds;
    for (const auto& t : test) {
      const auto it = by_id.find(t.pair_id);
      if (it == by_id.end()) throw Error("no prediction for pair '" + t.pair_id + "'");
      fold_preds.push_back(*it->second);
    }
    accumulate(cv, evaluate(fold_preds, gold_map(test)));
  }
  finish(cv);
  return cv;
}

// --- Cross-lingual ---------------------------------------------------------

CrossLingualGrid cross_lingual_experiment(std::span<const Dataset> datasets,
                                          const CrossLingualOptions& options) {
  if (datasets.size() < 2) throw Error("cross-lingual experiment needs >= 2 datasets");
  for (const auto& d : datasets) {
    if (d.items.empty()) throw Error("dataset '" + d.tag + "' is empty");
  }
  CrossLingualGrid grid;
  if (options.adapter == nullptr) {
    grid.notices.push_back("adapter predictions unavailable; baselines only");
  }
  std::unordered_map<std::string, const PredictionRecord*> adapter_by_id;
  if (options.adapter != nullptr) {
    for (const auto& p : *options.adapter) adapter_by_id.emplace(p.pair_id, &p);
  }

  for (std::size_t h = 0; h < datasets.size(); ++h) {
    const Dataset& test = datasets[h];
    CrossLingualRow row;
    row.test_tag = test.tag;
    std::vector<LabeledPair> train;
    for (std::size_t o = 0; o < datasets.size(); ++o) {
      if (o == h) continue;
      row.train_tags.push_back(datasets[o].tag);
      train.insert(train.end(), datasets[o].items.begin(), datasets[o].items.end());
    }
    const auto gold = gold_map(test.items);
    row.zero_r = evaluate(
        train_predict_baseline(BaselineKind::kZeroR, test.items, test.items), gold);
    row.zero_r_train =
        evaluate(train_predict_baseline(BaselineKind::kZeroR, train, test.items), gold);
    if (options.run_bow) {
      row.bow = evaluate(train_predict_baseline(BaselineKind::kBowLogistic, train,
                                                test.items, options.logistic),
                         gold);
    }
    if (options.adapter != nullptr) {
      std::vector<PredictionRecord> preds;
      for (const auto& t : test.items) {
        const auto it = adapter_by_id.find(t.pair_id);
        if (it != adapter_by_id.end()) preds.push_back(*it->second);
      }
      if (preds.size() == test.items.size()) {
        row.adapter = evaluate(preds, gold);
      } else {
        grid.notices.push_back("adapter predictions cover " + std::to_string(preds.size()) +
                               " of " + std::to_string(test.items.size()) +
                               " pairs for holdout " + test.tag);
      }
    }
    grid.rows.push_back(std::move(row));
  }
  return grid;
}

void write_confusion_csv(std::ostream& out, const ConfusionMatrix& m) {
  out << "gold,POS,NEG,NEU\n";
  for (Stance g : kAllStances) {
    out << stance_token(g);
    for (Stance p : kAllStances) out << ',' << m[index_of(g)][index_of(p)];
    out << '\n';
  }
}

}  // namespace stanceshift::eval
