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

#include "stanceshift/pipeline.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "json.hpp"
#include "stanceshift/corpus.hpp"
#include "stanceshift/figure.hpp"
#include "stanceshift/sentiment.hpp"
#include "stanceshift/stance_eval.hpp"
#include "stanceshift/termshift.hpp"

#ifndef STANCESHIFT_VERSION
#define STANCESHIFT_VERSION "0.0.0"
#endif

namespace stanceshift::pipeline {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kAllGroup = "ALL";

std::string merge_policy_name(annotation::MergePolicy p) {
  switch (p) {
    case annotation::MergePolicy::kKeepFirst:
      return "keep_first";
    case annotation::MergePolicy::kMajority:
      return "majority";
    case annotation::MergePolicy::kStrictAgreement:
      return "strict_agreement";
  }
  return "keep_first";
}

std::string hex(const unsigned char* data, unsigned int n) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * n);
  for (unsigned int i = 0; i < n; ++i) {
    out += kDigits[data[i] >> 4];
    out += kDigits[data[i] & 0xf];
  }
  return out;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Section reader that rejects keys it does not know.
class Section {
 public:
  Section(const json& obj, std::string name) : obj_(obj), name_(std::move(name)) {
    if (!obj_.is_object()) throw ConfigError("config: '" + name_ + "' must be an object");
  }

  const json* get(const char* key) {
    seen_.insert(key);
    const auto it = obj_.find(key);
    return it == obj_.end() || it->is_null() ? nullptr : &*it;
  }

  template <typename T>
  void read(const char* key, T& into) {
    if (const json* v = get(key)) {
      try {
        into = v->get<T>();
      } catch (const json::exception&) {
        throw ConfigError("config: '" + name_ + "." + key + "' has the wrong type");
      }
    }
  }

  void finish() const {
    for (const auto& [key, v] : obj_.items()) {
      if (!seen_.count(key)) throw ConfigError("config: unknown key '" + name_ + "." + key + "'");
    }
  }

 private:
  const json& obj_;
  std::string name_;
  std::set<std::string> seen_;
};

fs::path resolve(const std::string& p, const fs::path& base) {
  if (p.empty()) return {};
  fs::path path(p);
  if (path.is_relative()) path = base / path;
  return path.lexically_normal();
}

std::string safe_name(std::string_view s) {
  std::string out;
  for (char c : s) {
    const bool keep = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
    out += keep ? c : '_';
  }
  return out;
}

// Mutable state handed from stage to stage.
struct RunState {
  corpus::OutletRegistry registry;
  std::optional<corpus::Corpus> corpus;
  std::vector<corpus::TweetRecord> topic_news;
  std::vector<corpus::ConversationPair> pairs;
  std::map<std::string, double> news_scores;
  std::map<std::string, double> reply_scores;
  std::map<std::string, std::vector<series::SeriesPoint>> sentiment_series;
  std::map<std::string, std::vector<series::StancePoint>> stance_points;
  std::optional<std::vector<annotation::AnnotationRecord>> labels;  // merged
};

class BundleWriter {
 public:
  BundleWriter(fs::path root, std::vector<fs::path>& files)
      : root_(std::move(root)), files_(files) {}

  void write(const fs::path& rel, const std::string& content) {
    const fs::path full = root_ / rel;
    fs::create_directories(full.parent_path());
    std::ofstream out(full, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + full.string());
    out << content;
    files_.push_back(rel);
  }

  template <typename Fn>
  void write_with(const fs::path& rel, Fn&& fn) {
    std::ostringstream ss;
    fn(ss);
    write(rel, ss.str());
  }

 private:
  fs::path root_;
  std::vector<fs::path>& files_;
};

std::string rejections_csv(const RejectionReport& r) {
  std::ostringstream o;
  o << "line,id,reason\n";
  for (const auto& x : r) o << x.line << ',' << csv_field(x.id) << ',' << csv_field(x.reason) << '\n';
  return o.str();
}

class Runner {
 public:
  Runner(const PipelineConfig& cfg, BundleWriter& out) : cfg_(cfg), out_(out) {}

  eval::LogisticOptions logistic_options() const {
    eval::LogisticOptions o;
    o.l2_grid = cfg_.bow_l2_grid;
    return o;
  }

  std::vector<std::string> groups() const {
    std::vector<std::string> g;
    if (!cfg_.countries.empty()) {
      g = cfg_.countries;
    } else {
      std::set<std::string> seen;
      for (const auto& t : st_.topic_news) seen.insert(t.country.value_or("??"));
      g.assign(seen.begin(), seen.end());
    }
    g.push_back(kAllGroup);
    return g;
  }

  bool in_countries(const corpus::TweetRecord& t) const {
    if (cfg_.countries.empty()) return true;
    return t.country && std::find(cfg_.countries.begin(), cfg_.countries.end(), *t.country) !=
                            cfg_.countries.end();
  }

  void ingest() {
    if (cfg_.paths.tweets.empty()) throw Error("paths.tweets is not set");
    if (cfg_.paths.outlets.empty()) throw Error("paths.outlets is not set");
    st_.registry = corpus::OutletRegistry::load(cfg_.paths.outlets);
    corpus::LoadOptions opts;
    if (cfg_.window_filter) opts.study_window = cfg_.window;
    st_.corpus = corpus::load_corpus(cfg_.paths.tweets, st_.registry, opts);
    out_.write("tables/ingest_rejections.csv", rejections_csv(st_.corpus->rejections()));

    std::map<std::string, std::pair<std::size_t, std::size_t>> by_country;
    for (const auto& t : st_.corpus->records()) {
      auto& [news, replies] = by_country[t.country.value_or("??")];
      ++(t.is_reply() ? replies : news);
    }
    out_.write_with("tables/corpus_summary.csv", [&](std::ostream& o) {
      o << "country,news,replies\n";
      for (const auto& [c, n] : by_country) o << c << ',' << n.first << ',' << n.second << '\n';
    });
  }

  void filter() {
    std::vector<corpus::TweetRecord> news;
    for (const auto* t : st_.corpus->news()) {
      if (in_countries(*t)) news.push_back(*t);
    }
    st_.topic_news = corpus::filter_topic_news(news, cfg_.keywords);
    std::set<std::string> ids;
    for (const auto& t : st_.topic_news) ids.insert(t.id);
    corpus::PairSet ps = corpus::build_pairs(*st_.corpus, ids, cfg_.min_replies);
    RejectionReport rejected = ps.rejections;
    if (!cfg_.reply_lang.empty()) {
      corpus::PairSet kept = corpus::filter_replies_language(ps.pairs, cfg_.reply_lang);
      rejected.insert(rejected.end(), kept.rejections.begin(), kept.rejections.end());
      ps.pairs = std::move(kept.pairs);
    }
    st_.pairs = std::move(ps.pairs);

    std::map<std::string, std::pair<std::size_t, std::size_t>> counts;
    for (const auto& t : st_.topic_news) ++counts[t.country.value_or("??")].first;
    for (const auto& p : st_.pairs) ++counts[p.news.country.value_or("??")].second;
    out_.write_with("tables/topic_summary.csv", [&](std::ostream& o) {
      o << "country,topic_news,pairs\n";
      for (const auto& [c, n] : counts) o << c << ',' << n.first << ',' << n.second << '\n';
    });
    out_.write("tables/pair_rejections.csv", rejections_csv(rejected));
    out_.write_with("data/pairs.jsonl", [&](std::ostream& o) { corpus::write_pairs(o, st_.pairs); });
    if (!st_.pairs.empty()) {
      out_.write_with("data/rehydration_manifest.txt", [&](std::ostream& o) {
        corpus::export_manifest(st_.pairs, {}).write(o);
      });
    }
  }

  void sentiment() {
    if (cfg_.paths.lexicon.empty()) throw Error("paths.lexicon is not set");
    const auto lexicon = sentiment::SentimentLexicon::load(cfg_.paths.lexicon);
    std::map<std::string, std::vector<series::TimedValue>> values;
    for (const auto& t : st_.topic_news) {
      const double s = sentiment::score_text(t.english_text(), lexicon).compound;
      st_.news_scores[t.id] = s;
      values[t.country.value_or("??")].push_back({t.created_at, s});
      values[kAllGroup].push_back({t.created_at, s});
    }
    for (const auto& p : st_.pairs) {
      st_.reply_scores[p.pair_id] = sentiment::score_text(p.reply.english_text(), lexicon).compound;
    }
    out_.write_with("tables/news_sentiment.csv", [&](std::ostream& o) {
      o << "id,country,created_at,compound\n";
      for (const auto& t : st_.topic_news) {
        o << csv_field(t.id) << ',' << t.country.value_or("??") << ','
          << format_iso8601(t.created_at) << ',' << format_fixed(st_.news_scores[t.id]) << '\n';
      }
    });
    for (const auto& g : groups()) {
      auto pts = series::median_sentiment_series(values[g], cfg_.bucketing, cfg_.exclude_zero);
      out_.write_with("tables/sentiment_series_" + safe_name(g) + ".csv",
                      [&](std::ostream& o) { series::write_series_csv(o, pts); });
      st_.sentiment_series[g] = std::move(pts);
    }
  }

  void stance() {
    std::map<std::string, const corpus::ConversationPair*> by_id;
    for (const auto& p : st_.pairs) by_id[p.pair_id] = &p;

    std::vector<std::pair<std::string, Stance>> assigned;
    if (!cfg_.paths.predictions.empty()) {
      const auto pf = eval::load_predictions(cfg_.paths.predictions);
      out_.write("tables/prediction_rejections.csv", rejections_csv(pf.rejections));
      for (const auto& r : pf.records) assigned.emplace_back(r.pair_id, r.label);
    } else {
      load_labels();
      for (const auto& r : *st_.labels) assigned.emplace_back(r.pair_id, r.label);
    }

    std::map<std::string, std::vector<series::TimedLabel>> labels;
    std::size_t unmatched = 0;
    for (const auto& [id, label] : assigned) {
      const auto it = by_id.find(id);
      if (it == by_id.end()) {
        ++unmatched;
        continue;
      }
      const auto& pair = *it->second;
      labels[pair.news.country.value_or("??")].push_back({pair.reply.created_at, label});
      labels[kAllGroup].push_back({pair.reply.created_at, label});
    }
    for (const auto& g : groups()) {
      auto pts = series::stance_series(labels[g], cfg_.bucketing, cfg_.stance_scalar);
      const std::string base = "figures/stance_breakdown_" + safe_name(g);
      out_.write_with(base + ".csv", [&](std::ostream& o) { series::write_stance_csv(o, pts); });
      out_.write(base + ".svg",
                 figure::render_stance_breakdown(pts, "Reply stance breakdown, " + g));
      st_.stance_points[g] = std::move(pts);
    }
    out_.write_with("tables/stance_coverage.csv", [&](std::ostream& o) {
      o << "assigned,matched,unmatched\n"
        << assigned.size() << ',' << assigned.size() - unmatched << ',' << unmatched << '\n';
    });

    if (st_.labels && !st_.reply_scores.empty()) {
      std::map<std::string, std::string> country;
      for (const auto& p : st_.pairs) country[p.pair_id] = p.news.country.value_or("??");
      const auto rep = sentiment::stance_vs_sentiment_report(st_.reply_scores, *st_.labels, country);
      out_.write_with("tables/stance_sentiment.csv", [&](std::ostream& o) {
        o << "country,label,n,min,q1,median,q3,max\n";
        for (const auto& g : rep.groups) {
          const auto& s = g.summary;
          o << g.country << ',' << stance_token(g.label) << ',' << s.n << ','
            << format_fixed(s.min) << ',' << format_fixed(s.q1) << ',' << format_fixed(s.median)
            << ',' << format_fixed(s.q3) << ',' << format_fixed(s.max) << '\n';
        }
      });
    }
  }

  void termshift() {
    auto pc = termshift::PreprocessConfig::load(cfg_.paths.stopwords, cfg_.paths.entities,
                                                cfg_.paths.lemmas);
    pc.validate();
    const auto cols = termshift::top_k_shift_by_country(
        st_.topic_news, cfg_.termshift_foreground, cfg_.termshift_background, pc,
        cfg_.termshift_k, true);
    out_.write_with("tables/termshift.csv", [&](std::ostream& o) {
      o << "group,foreground,background,rank,term,tau,notice\n";
      for (const auto& c : cols) {
        if (c.terms.empty()) {
          o << c.group << ',' << c.foreground_period << ',' << c.background_period << ",,,,"
            << csv_field(c.notice) << '\n';
        }
        for (std::size_t i = 0; i < c.terms.size(); ++i) {
          o << c.group << ',' << c.foreground_period << ',' << c.background_period << ','
            << i + 1 << ',' << csv_field(c.terms[i].term) << ','
            << format_fixed(c.terms[i].tau, 9) << ",\n";
        }
      }
    });
  }

  void granger() {
    std::vector<std::pair<std::string, std::vector<series::GrangerResult>>> all;
    for (const auto& g : groups()) {
      const figure::NamedSeries x{"news_sentiment", st_.sentiment_series[g]};
      const figure::NamedSeries y{"reply_stance", series::scalar_series(st_.stance_points[g])};
      const std::string base = "figures/sentiment_stance_" + safe_name(g);
      out_.write_with(base + ".csv", [&](std::ostream& o) { figure::write_dual_csv(o, x, y); });
      out_.write(base + ".svg",
                 figure::render_dual_axis(x, y, "News sentiment and reply stance, " + g));
      all.emplace_back(g, series::granger_test(x.points, y.points, cfg_.max_lag, x.name, y.name));
    }
    out_.write_with("tables/granger.csv", [&](std::ostream& o) {
      std::ostringstream body;
      for (const auto& [g, results] : all) {
        std::ostringstream part;
        series::write_granger_csv(part, results);
        std::istringstream lines(part.str());
        std::string line;
        std::getline(lines, line);
        if (body.tellp() == 0) o << "group," << line << '\n';
        while (std::getline(lines, line)) body << g << ',' << line << '\n';
      }
      if (all.empty()) o << "group\n";
      o << body.str();
    });
  }

  void evaluate() {
    load_labels();
    const auto joined = eval::join_labels(st_.pairs, *st_.labels);
    std::map<std::string, std::vector<eval::LabeledPair>> by_group;
    std::map<std::string, std::string> country;
    for (const auto& p : st_.pairs) country[p.pair_id] = p.news.country.value_or("??");
    for (const auto& item : joined) {
      by_group[country[item.pair_id]].push_back(item);
      by_group[kAllGroup].push_back(item);
    }

    std::vector<eval::BaselineKind> kinds = {eval::BaselineKind::kZeroR};
    if (cfg_.eval_bow) kinds.push_back(eval::BaselineKind::kBowLogistic);
    out_.write_with("tables/eval_crossval.csv", [&](std::ostream& o) {
      o << "group,baseline,n,folds,accuracy,macro_f1,notice\n";
      for (const auto& g : groups()) {
        const auto& items = by_group[g];
        for (const auto kind : kinds) {
          o << g << ',' << eval::baseline_tag(kind) << ',' << items.size() << ',' << cfg_.folds
            << ',';
          if (items.size() < cfg_.folds) {
            o << ",,too few labeled pairs\n";
            continue;
          }
          const auto rep = eval::cross_validate(kind, items, cfg_.folds, cfg_.seed, logistic_options());
          std::string notes;
          for (const auto& w : rep.warnings) notes += (notes.empty() ? "" : "; ") + w;
          o << format_fixed(rep.accuracy) << ',' << format_fixed(rep.macro_f1) << ','
            << csv_field(notes) << '\n';
        }
      }
    });

    std::vector<eval::Dataset> datasets;
    for (const auto& g : groups()) {
      if (g != kAllGroup && !by_group[g].empty()) datasets.push_back({g, by_group[g]});
    }
    if (datasets.size() >= 2) {
      eval::CrossLingualOptions opts;
      opts.run_bow = cfg_.eval_bow;
      opts.logistic = logistic_options();
      const auto grid = eval::cross_lingual_experiment(datasets, opts);
      out_.write_with("tables/eval_crosslingual.csv", [&](std::ostream& o) {
        o << "train,test,zero_r_accuracy,zero_r_macro_f1,zero_r_train_accuracy,"
             "zero_r_train_macro_f1,bow_accuracy,bow_macro_f1\n";
        for (const auto& r : grid.rows) {
          std::string train;
          for (const auto& t : r.train_tags) train += (train.empty() ? "" : "+") + t;
          o << train << ',' << r.test_tag << ',' << format_fixed(r.zero_r.accuracy) << ','
            << format_fixed(r.zero_r.macro_f1) << ',' << format_fixed(r.zero_r_train.accuracy)
            << ',' << format_fixed(r.zero_r_train.macro_f1) << ','
            << (r.bow ? format_fixed(r.bow->accuracy) : "") << ','
            << (r.bow ? format_fixed(r.bow->macro_f1) : "") << '\n';
        }
      });
    }
  }

 private:
  void load_labels() {
    if (st_.labels) return;
    if (cfg_.paths.labels.empty()) throw Error("paths.labels is not set");
    const auto file = annotation::load_labels(cfg_.paths.labels);
    out_.write("tables/label_rejections.csv", rejections_csv(file.rejections));

    std::map<std::string, std::size_t> per_pair;
    for (const auto& r : file.records) ++per_pair[r.pair_id];
    const bool multi = std::any_of(per_pair.begin(), per_pair.end(),
                                   [](const auto& kv) { return kv.second >= 2; });
    out_.write_with("tables/agreement.csv", [&](std::ostream& o) {
      o << "items,single_items,pairable_values,observed_disagreement,expected_disagreement,"
           "alpha,notice\n";
      if (!multi) {
        o << ",,,,,,no doubly annotated items\n";
        return;
      }
      try {
        const auto a = annotation::krippendorff_alpha(file.records);
        o << a.n_items << ',' << a.n_single_items << ',' << a.n_pairable_values << ','
          << format_fixed(a.observed_disagreement) << ',' << format_fixed(a.expected_disagreement)
          << ',' << (a.alpha ? format_fixed(*a.alpha) : "") << ','
          << (a.alpha ? "" : "single class overall") << '\n';
      } catch (const Error& e) {
        o << ",,,,,," << csv_field(e.what()) << '\n';
      }
    });

    auto merged = annotation::merge_annotations(file.records, {}, cfg_.label_merge);
    std::map<std::string, std::vector<annotation::AnnotationRecord>> by_group;
    std::map<std::string, std::string> country;
    for (const auto& p : st_.pairs) country[p.pair_id] = p.news.country.value_or("??");
    for (const auto& r : merged.records) {
      const auto it = country.find(r.pair_id);
      if (it == country.end()) continue;
      by_group[it->second].push_back(r);
      by_group[kAllGroup].push_back(r);
    }
    out_.write_with("tables/label_distribution.csv", [&](std::ostream& o) {
      o << "group,total,POS,NEG,NEU\n";
      for (const auto& g : groups()) {
        const auto& recs = by_group[g];
        if (recs.empty()) {
          o << g << ",0,0,0,0\n";
          continue;
        }
        const auto d = annotation::label_distribution(recs, g);
        o << g << ',' << d.total << ',' << d.count(Stance::kPositive) << ','
          << d.count(Stance::kNegative) << ',' << d.count(Stance::kNeutral) << '\n';
      }
    });
    st_.labels = std::move(merged.records);
  }

  const PipelineConfig& cfg_;
  BundleWriter& out_;
  RunState st_;
};

std::vector<Stage> dependencies(Stage s) {
  switch (s) {
    case Stage::kIngest:
      return {};
    case Stage::kFilter:
      return {Stage::kIngest};
    case Stage::kSentiment:
    case Stage::kStance:
    case Stage::kTermshift:
    case Stage::kEval:
      return {Stage::kFilter};
    case Stage::kGranger:
      return {Stage::kSentiment, Stage::kStance};
  }
  return {};
}

}  // namespace

std::string_view tool_version() { return STANCESHIFT_VERSION; }

std::string_view stage_name(Stage s) {
  switch (s) {
    case Stage::kIngest:
      return "ingest";
    case Stage::kFilter:
      return "filter";
    case Stage::kSentiment:
      return "sentiment";
    case Stage::kStance:
      return "stance";
    case Stage::kTermshift:
      return "termshift";
    case Stage::kGranger:
      return "granger";
    case Stage::kEval:
      return "eval";
  }
  return "ingest";
}

std::optional<Stage> parse_stage(std::string_view s) {
  const std::string v = ascii_lower(trim(s));
  for (const Stage st : kAllStages) {
    if (stage_name(st) == v) return st;
  }
  return std::nullopt;
}

std::string_view stage_status_name(StageStatus s) {
  switch (s) {
    case StageStatus::kOk:
      return "ok";
    case StageStatus::kFailed:
      return "failed";
    case StageStatus::kBlocked:
      return "blocked";
    case StageStatus::kSkipped:
      return "skipped";
  }
  return "skipped";
}

PipelineConfig::PipelineConfig()
    : window{*parse_iso8601("2021-09-01T00:00:00Z"), *parse_iso8601("2022-09-01T00:00:00Z")},
      keywords(corpus::migration_keywords()),
      stages(std::begin(kAllStages), std::end(kAllStages)) {}

PipelineConfig PipelineConfig::parse(std::string_view json_text, const fs::path& base_dir) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  PipelineConfig c;
  Section top(root, "config");
  top.read("name", c.name);

  if (const json* p = top.get("paths")) {
    Section s(*p, "paths");
    const auto path = [&](const char* key, fs::path& into) {
      std::string v;
      s.read(key, v);
      if (!v.empty()) into = resolve(v, base_dir);
    };
    path("tweets", c.paths.tweets);
    path("outlets", c.paths.outlets);
    path("labels", c.paths.labels);
    path("predictions", c.paths.predictions);
    path("lexicon", c.paths.lexicon);
    path("stopwords", c.paths.stopwords);
    path("entities", c.paths.entities);
    path("lemmas", c.paths.lemmas);
    s.finish();
  }
  if (const json* w = top.get("window")) {
    Section s(*w, "window");
    std::string start, end;
    s.read("start", start);
    s.read("end", end);
    s.read("enabled", c.window_filter);
    s.finish();
    if (!start.empty()) {
      const auto t = parse_iso8601(start);
      if (!t) throw ConfigError("config: window.start is not an ISO-8601 UTC timestamp");
      c.window.start = *t;
    }
    if (!end.empty()) {
      const auto t = parse_iso8601(end);
      if (!t) throw ConfigError("config: window.end is not an ISO-8601 UTC timestamp");
      c.window.end = *t;
    }
  }
  top.read("countries", c.countries);
  if (const json* k = top.get("keywords")) {
    std::vector<std::string> kw;
    try {
      kw = k->get<std::vector<std::string>>();
    } catch (const json::exception&) {
      throw ConfigError("config: 'keywords' must be a list of strings");
    }
    c.keywords.clear();
    for (auto& w : kw) c.keywords.insert(ascii_lower(trim(w)));
  }
  std::string bucketing = std::string(bucketing_name(c.bucketing));
  top.read("bucketing", bucketing);
  const auto b = parse_bucketing(bucketing);
  if (!b) throw ConfigError("config: bucketing must be 'week' or 'month'");
  c.bucketing = *b;
  top.read("seed", c.seed);

  if (const json* f = top.get("filter")) {
    Section s(*f, "filter");
    s.read("min_replies", c.min_replies);
    s.read("reply_lang", c.reply_lang);
    s.finish();
  }
  if (const json* f = top.get("sentiment")) {
    Section s(*f, "sentiment");
    s.read("exclude_zero", c.exclude_zero);
    s.finish();
  }
  if (const json* f = top.get("stance")) {
    Section s(*f, "stance");
    std::string scalar(series::stance_scalar_name(c.stance_scalar));
    std::string merge = merge_policy_name(c.label_merge);
    s.read("scalar", scalar);
    s.read("label_merge", merge);
    s.finish();
    const auto sc = series::parse_stance_scalar(scalar);
    if (!sc) throw ConfigError("config: stance.scalar must be positive_share or signed_mean");
    c.stance_scalar = *sc;
    const auto mp = annotation::parse_merge_policy(merge);
    if (!mp) throw ConfigError("config: unknown stance.label_merge '" + merge + "'");
    c.label_merge = *mp;
  }
  if (const json* f = top.get("termshift")) {
    Section s(*f, "termshift");
    s.read("foreground", c.termshift_foreground);
    s.read("background", c.termshift_background);
    s.read("k", c.termshift_k);
    s.finish();
  }
  if (const json* f = top.get("granger")) {
    Section s(*f, "granger");
    s.read("max_lag", c.max_lag);
    s.finish();
  }
  if (const json* f = top.get("eval")) {
    Section s(*f, "eval");
    s.read("folds", c.folds);
    s.read("bow", c.eval_bow);
    s.read("l2_grid", c.bow_l2_grid);
    s.finish();
  }
  if (const json* f = top.get("stages")) {
    std::vector<std::string> names;
    try {
      names = f->get<std::vector<std::string>>();
    } catch (const json::exception&) {
      throw ConfigError("config: 'stages' must be a list of stage names");
    }
    c.stages.clear();
    for (const auto& n : names) {
      const auto st = parse_stage(n);
      if (!st) throw ConfigError("config: unknown stage '" + n + "'");
      if (std::find(c.stages.begin(), c.stages.end(), *st) == c.stages.end()) c.stages.push_back(*st);
    }
    std::sort(c.stages.begin(), c.stages.end());
  }
  if (const json* o = top.get("output_dir")) {
    if (!o->is_string()) throw ConfigError("config: 'output_dir' must be a string");
    c.output_dir = resolve(o->get<std::string>(), base_dir);
  }
  if (const json* a = top.get("adapter")) {
    if (!a->is_object()) throw ConfigError("config: 'adapter' must be an object");
    c.adapter_json = a->dump();
  }
  top.finish();
  c.validate();
  return c;
}

PipelineConfig PipelineConfig::load(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  const fs::path base = fs::absolute(path).parent_path();
  return parse(ss.str(), base);
}

std::string PipelineConfig::to_json() const {
  const auto p = [](const fs::path& x) { return x.empty() ? std::string() : x.string(); };
  json j;
  j["name"] = name;
  j["paths"] = {{"tweets", p(paths.tweets)},         {"outlets", p(paths.outlets)},
                {"labels", p(paths.labels)},         {"predictions", p(paths.predictions)},
                {"lexicon", p(paths.lexicon)},       {"stopwords", p(paths.stopwords)},
                {"entities", p(paths.entities)},     {"lemmas", p(paths.lemmas)}};
  j["window"] = {{"start", format_iso8601(window.start)},
                 {"end", format_iso8601(window.end)},
                 {"enabled", window_filter}};
  j["countries"] = countries;
  j["keywords"] = std::vector<std::string>(keywords.begin(), keywords.end());
  j["bucketing"] = std::string(bucketing_name(bucketing));
  j["seed"] = seed;
  j["filter"] = {{"min_replies", min_replies}, {"reply_lang", reply_lang}};
  j["sentiment"] = {{"exclude_zero", exclude_zero}};
  j["stance"] = {{"scalar", std::string(series::stance_scalar_name(stance_scalar))},
                 {"label_merge", merge_policy_name(label_merge)}};
  j["termshift"] = {{"foreground", termshift_foreground},
                    {"background", termshift_background},
                    {"k", termshift_k}};
  j["granger"] = {{"max_lag", max_lag}};
  j["eval"] = {{"folds", folds}, {"bow", eval_bow}, {"l2_grid", bow_l2_grid}};
  std::vector<std::string> names;
  for (const Stage s : stages) names.emplace_back(stage_name(s));
  j["stages"] = names;
  j["adapter"] = json::parse(adapter_json);
  return j.dump(2);
}

void PipelineConfig::validate() const {
  if (name.empty()) throw ConfigError("config: name must not be empty");
  if (!(window.start < window.end)) throw ConfigError("config: window.start must precede window.end");
  for (const auto& c : countries) {
    const bool ok = c.size() == 2 && std::all_of(c.begin(), c.end(), [](char ch) {
                      return ch >= 'A' && ch <= 'Z';
                    });
    if (!ok) throw ConfigError("config: country '" + c + "' is not an upper-case ISO code");
  }
  if (keywords.empty() || keywords.count("")) throw ConfigError("config: keywords must be non-empty");
  if (termshift_k < 1) throw ConfigError("config: termshift.k must be at least 1");
  if (!parse_month_window(termshift_foreground) || !parse_month_window(termshift_background)) {
    throw ConfigError("config: termshift windows must be YYYY-MM");
  }
  if (termshift_foreground == termshift_background) {
    throw ConfigError("config: termshift windows must differ");
  }
  if (max_lag < 1) throw ConfigError("config: granger.max_lag must be at least 1");
  if (folds < 2) throw ConfigError("config: eval.folds must be at least 2");
  for (const double l2 : bow_l2_grid) {
    if (!(l2 >= 0.0) || !std::isfinite(l2)) throw ConfigError("config: eval.l2_grid values must be >= 0");
  }
  if (stages.empty()) throw ConfigError("config: no stages requested");
}

bool PipelineConfig::requested(Stage s) const {
  return std::find(stages.begin(), stages.end(), s) != stages.end();
}

int ReportBundle::exit_code() const {
  for (const auto& s : stages) {
    if (s.status == StageStatus::kFailed || s.status == StageStatus::kBlocked) {
      return kExitStageFailure;
    }
  }
  return kExitOk;
}

const StageResult& ReportBundle::stage(Stage s) const {
  for (const auto& r : stages) {
    if (r.stage == s) return r;
  }
  throw Error("stage not in bundle: " + std::string(stage_name(s)));
}

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  return hex(md, len);
}

std::string sha256_file(const fs::path& path) { return sha256_hex(read_file(path)); }

std::vector<InputDigest> digest_inputs(const PipelineConfig& config) {
  const std::pair<const char*, const fs::path*> roles[] = {
      {"tweets", &config.paths.tweets},       {"outlets", &config.paths.outlets},
      {"labels", &config.paths.labels},       {"predictions", &config.paths.predictions},
      {"lexicon", &config.paths.lexicon},     {"stopwords", &config.paths.stopwords},
      {"entities", &config.paths.entities},   {"lemmas", &config.paths.lemmas}};
  std::vector<InputDigest> out;
  for (const auto& [role, path] : roles) {
    if (path->empty() || !fs::is_regular_file(*path)) continue;
    const std::string data = read_file(*path);
    out.push_back({role, *path, sha256_hex(data), data.size()});
  }
  return out;
}

std::string run_hash(const PipelineConfig& config, const std::vector<InputDigest>& inputs) {
  std::string material = config.to_json();
  for (const auto& d : inputs) material += "\n" + d.role + "\t" + d.sha256;
  return sha256_hex(material);
}

fs::path resolve_output_dir(const PipelineConfig& config, const std::optional<fs::path>& flag) {
  if (flag) return *flag;
  if (const char* root = std::getenv(kOutputRootEnv); root && *root) {
    return fs::path(root) / config.name;
  }
  if (config.output_dir) return *config.output_dir;
  return fs::path("stanceshift-out") / config.name;
}

ReportBundle run_pipeline(const PipelineConfig& config, const fs::path& out) {
  config.validate();
  ReportBundle bundle;
  bundle.root = out;
  for (const char* owned : {"tables", "figures", "data", "stages.csv", "run_manifest.json"}) {
    fs::remove_all(out / owned);
  }
  fs::create_directories(out);

  const auto inputs = digest_inputs(config);
  bundle.config_hash = sha256_hex(config.to_json());
  bundle.run_hash = run_hash(config, inputs);

  BundleWriter writer(out, bundle.files);
  Runner runner(config, writer);
  const std::map<Stage, std::function<void()>> actions = {
      {Stage::kIngest, [&] { runner.ingest(); }},
      {Stage::kFilter, [&] { runner.filter(); }},
      {Stage::kSentiment, [&] { runner.sentiment(); }},
      {Stage::kStance, [&] { runner.stance(); }},
      {Stage::kTermshift, [&] { runner.termshift(); }},
      {Stage::kGranger, [&] { runner.granger(); }},
      {Stage::kEval, [&] { runner.evaluate(); }},
  };

  std::map<Stage, StageStatus> status;
  for (const Stage s : kAllStages) {
    StageResult r{s, StageStatus::kSkipped, ""};
    // A stage that others depend on runs when any requested stage needs it.
    bool needed = config.requested(s);
    for (const Stage later : kAllStages) {
      if (!config.requested(later)) continue;
      std::vector<Stage> frontier = dependencies(later);
      while (!frontier.empty() && !needed) {
        const Stage d = frontier.back();
        frontier.pop_back();
        needed = d == s;
        for (const Stage dd : dependencies(d)) frontier.push_back(dd);
      }
    }
    if (!needed) {
      r.message = "not requested";
    } else {
      std::string blocked_by;
      for (const Stage d : dependencies(s)) {
        if (status[d] != StageStatus::kOk) blocked_by += (blocked_by.empty() ? "" : ",") +
                                                         std::string(stage_name(d));
      }
      if (!blocked_by.empty()) {
        r.status = StageStatus::kBlocked;
        r.message = "upstream stage did not complete: " + blocked_by;
      } else {
        try {
          actions.at(s)();
          r.status = StageStatus::kOk;
        } catch (const std::exception& e) {
          r.status = StageStatus::kFailed;
          r.message = e.what();
        }
      }
    }
    status[s] = r.status;
    bundle.stages.push_back(std::move(r));
  }

  writer.write_with("stages.csv", [&](std::ostream& o) {
    o << "stage,status,message\n";
    for (const auto& r : bundle.stages) {
      o << stage_name(r.stage) << ',' << stage_status_name(r.status) << ','
        << csv_field(r.message) << '\n';
    }
  });
  std::sort(bundle.files.begin(), bundle.files.end());

  json m;
  m["tool"] = "stanceshift";
  m["version"] = std::string(tool_version());
  m["config"] = json::parse(config.to_json());
  m["config_hash"] = bundle.config_hash;
  m["run_hash"] = bundle.run_hash;
  json ins = json::array();
  for (const auto& d : inputs) {
    ins.push_back({{"role", d.role}, {"path", d.path.string()}, {"sha256", d.sha256},
                   {"bytes", d.bytes}});
  }
  m["inputs"] = ins;
  json st = json::array();
  for (const auto& r : bundle.stages) {
    st.push_back({{"stage", std::string(stage_name(r.stage))},
                  {"status", std::string(stage_status_name(r.status))}});
  }
  m["stages"] = st;
  json files = json::array();
  for (const auto& f : bundle.files) {
    files.push_back({{"path", f.generic_string()}, {"sha256", sha256_file(out / f)}});
  }
  m["files"] = files;
  {
    std::ofstream mf(out / "run_manifest.json", std::ios::binary | std::ios::trunc);
    if (!mf) throw Error("cannot write run manifest");
    mf << m.dump(2) << '\n';
  }
  return bundle;
}

PipelineConfig config_from_manifest(const fs::path& manifest) {
  json m;
  try {
    m = json::parse(read_file(manifest));
  } catch (const std::exception& e) {
    throw ConfigError("cannot read run manifest: " + std::string(e.what()));
  }
  if (!m.contains("config")) throw ConfigError("run manifest has no config");
  PipelineConfig c = PipelineConfig::parse(m["config"].dump(), fs::path("/"));
  for (const auto& d : m.value("inputs", json::array())) {
    const fs::path p = d.at("path").get<std::string>();
    if (!fs::is_regular_file(p)) throw ConfigError("recorded input is missing: " + p.string());
    if (sha256_file(p) != d.at("sha256").get<std::string>()) {
      throw ConfigError("recorded input changed since the run: " + p.string());
    }
  }
  return c;
}

}  // namespace stanceshift::pipeline
