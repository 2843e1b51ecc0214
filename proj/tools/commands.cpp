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

#include "commands.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "stanceshift/annotation.hpp"
#include "stanceshift/corpus.hpp"
#include "stanceshift/figure.hpp"
#include "stanceshift/pipeline.hpp"
#include "stanceshift/sentiment.hpp"
#include "stanceshift/series.hpp"
#include "stanceshift/stance_eval.hpp"
#include "stanceshift/termshift.hpp"

namespace stanceshift::cli {
namespace {

namespace fs = std::filesystem;
namespace pl = stanceshift::pipeline;

// Options every subcommand shares. Flags win over the config file.
struct Base {
  std::string config;

  pl::PipelineConfig load() const {
    return config.empty() ? pl::PipelineConfig() : pl::PipelineConfig::load(config);
  }
};

void add_config(CLI::App* cmd, Base& base) {
  cmd->add_option("--config", base.config, "shared JSON config supplying defaults")
      ->check(CLI::ExistingFile);
}

fs::path pick(const std::string& flag, const fs::path& fallback, const char* what) {
  if (!flag.empty()) return flag;
  if (fallback.empty()) throw pl::ConfigError(std::string("missing --") + what);
  return fallback;
}

// Relative output paths land under $STANCESHIFT_OUTPUT_ROOT when it is set.
fs::path output_path(const std::string& p) {
  fs::path out(p);
  if (const char* root = std::getenv(pl::kOutputRootEnv); root && *root && out.is_relative()) {
    out = fs::path(root) / out;
  }
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  return out;
}

// Runs `fn` against the named output file, or stdout for "" and "-".
template <typename Fn>
void emit(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    return;
  }
  const fs::path p = output_path(path);
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + p.string());
  fn(out);
}

void print_rejections(const RejectionReport& r, const char* what) {
  for (const auto& x : r) {
    std::cerr << what << " rejected (line " << x.line << ", id " << x.id << "): " << x.reason
              << '\n';
  }
}

std::optional<TimeWindow> window_of(const pl::PipelineConfig& cfg, bool no_window) {
  if (no_window || !cfg.window_filter) return std::nullopt;
  return cfg.window;
}

corpus::Corpus load_corpus_from(const pl::PipelineConfig& cfg, const std::string& tweets,
                                const std::string& outlets, bool no_window) {
  const auto registry = corpus::OutletRegistry::load(pick(outlets, cfg.paths.outlets, "outlets"));
  corpus::LoadOptions opts;
  opts.study_window = window_of(cfg, no_window);
  return corpus::load_corpus(pick(tweets, cfg.paths.tweets, "tweets"), registry, opts);
}

std::set<std::string> keywords_from(const pl::PipelineConfig& cfg, const std::string& file) {
  if (file.empty()) return cfg.keywords;
  std::set<std::string> out;
  for (const auto& w : termshift::load_word_list(file)) out.insert(ascii_lower(w));
  if (out.empty()) throw pl::ConfigError("keywords file is empty");
  return out;
}

std::vector<annotation::AnnotationRecord> read_label_records(const fs::path& path) {
  auto file = annotation::load_labels(path);
  print_rejections(file.rejections, "label");
  return std::move(file.records);
}

Bucketing bucketing_of(const pl::PipelineConfig& cfg, const std::string& flag) {
  if (flag.empty()) return cfg.bucketing;
  const auto b = parse_bucketing(flag);
  if (!b) throw pl::ConfigError("--bucket must be week or month");
  return *b;
}

// --- corpus ------------------------------------------------------------------

void register_corpus(CLI::App& app, Action& action) {
  auto* corpus_cmd = app.add_subcommand("corpus", "load, filter and pair tweet records");
  corpus_cmd->require_subcommand(1);

  struct LoadOpts : Base {
    std::string tweets, outlets, out;
    bool no_window = false;
  };
  auto lo = std::make_shared<LoadOpts>();
  auto* load = corpus_cmd->add_subcommand("load", "validate a tweet file against an outlet registry");
  add_config(load, *lo);
  load->add_option("--tweets", lo->tweets, "tweet JSON lines");
  load->add_option("--outlets", lo->outlets, "outlet registry CSV");
  load->add_option("--out", lo->out, "write accepted records as JSON lines");
  load->add_flag("--no-window", lo->no_window, "do not filter by study window");
  load->callback([lo, &action] {
    action = [lo] {
      const auto cfg = lo->load();
      const auto c = load_corpus_from(cfg, lo->tweets, lo->outlets, lo->no_window);
      print_rejections(c.rejections(), "record");
      std::cout << "records=" << c.size() << " news=" << c.news_count()
                << " replies=" << c.reply_count() << " rejected=" << c.rejections().size()
                << '\n';
      if (!lo->out.empty()) {
        emit(lo->out, [&](std::ostream& o) {
          for (const auto& t : c.records()) o << corpus::to_json_line(t) << '\n';
        });
      }
      return 0;
    };
  });

  struct FilterOpts : Base {
    std::string tweets, outlets, keywords_file, lang, out;
    std::optional<std::size_t> min_replies;
    std::vector<std::string> countries;
    bool no_window = false;
  };
  auto fo = std::make_shared<FilterOpts>();
  auto* filter = corpus_cmd->add_subcommand("filter", "topic news and conversation pairs");
  add_config(filter, *fo);
  filter->add_option("--tweets", fo->tweets, "tweet JSON lines");
  filter->add_option("--outlets", fo->outlets, "outlet registry CSV");
  filter->add_option("--keywords-file", fo->keywords_file, "one keyword per line");
  filter->add_option("--lang", fo->lang, "keep replies in this language");
  filter->add_option("--min-replies", fo->min_replies, "minimum observed replies per news");
  filter->add_option("--countries", fo->countries, "restrict to these countries")->delimiter(',');
  filter->add_option("--out", fo->out, "pairs JSON lines (stdout when omitted)");
  filter->add_flag("--no-window", fo->no_window, "do not filter by study window");
  filter->callback([fo, &action] {
    action = [fo] {
      const auto cfg = fo->load();
      const auto c = load_corpus_from(cfg, fo->tweets, fo->outlets, fo->no_window);
      const auto& countries = fo->countries.empty() ? cfg.countries : fo->countries;
      std::vector<corpus::TweetRecord> news;
      for (const auto* t : c.news()) {
        if (countries.empty() ||
            (t->country && std::find(countries.begin(), countries.end(), *t->country) !=
                               countries.end())) {
          news.push_back(*t);
        }
      }
      const auto topic = corpus::filter_topic_news(news, keywords_from(cfg, fo->keywords_file));
      std::set<std::string> ids;
      for (const auto& t : topic) ids.insert(t.id);
      auto ps = corpus::build_pairs(c, ids, fo->min_replies.value_or(cfg.min_replies));
      const std::string lang = fo->lang.empty() ? cfg.reply_lang : fo->lang;
      if (!lang.empty()) {
        auto kept = corpus::filter_replies_language(ps.pairs, lang);
        print_rejections(kept.rejections, "pair");
        ps.pairs = std::move(kept.pairs);
      }
      print_rejections(ps.rejections, "pair");
      emit(fo->out, [&](std::ostream& o) { corpus::write_pairs(o, ps.pairs); });
      std::cerr << "topic_news=" << topic.size() << " pairs=" << ps.pairs.size() << '\n';
      return 0;
    };
  });

  auto* manifest = corpus_cmd->add_subcommand("manifest", "rehydration manifests");
  manifest->require_subcommand(1);

  struct ExportOpts : Base {
    std::string pairs, tweets, outlets, labels, out;
  };
  auto eo = std::make_shared<ExportOpts>();
  auto* exp = manifest->add_subcommand("export", "write ids (and label pointers) for sharing");
  add_config(exp, *eo);
  exp->add_option("--pairs", eo->pairs, "pairs JSON lines (otherwise the whole corpus)");
  exp->add_option("--tweets", eo->tweets, "tweet JSON lines");
  exp->add_option("--outlets", eo->outlets, "outlet registry CSV");
  exp->add_option("--labels", eo->labels, "label file whose pointers are listed");
  exp->add_option("--out", eo->out, "manifest file (stdout when omitted)");
  exp->callback([eo, &action] {
    action = [eo] {
      const auto cfg = eo->load();
      corpus::RehydrationManifest m;
      if (!eo->pairs.empty()) {
        const auto ps = corpus::read_pairs(fs::path(eo->pairs));
        std::vector<corpus::LabelPointer> pointers;
        if (!eo->labels.empty()) {
          for (const auto& r : read_label_records(eo->labels)) {
            pointers.push_back({r.pair_id, r.annotator_id});
          }
        }
        m = corpus::export_manifest(ps.pairs, pointers);
      } else {
        m = corpus::export_manifest(load_corpus_from(cfg, eo->tweets, eo->outlets, false));
      }
      emit(eo->out, [&](std::ostream& o) { m.write(o); });
      return 0;
    };
  });

  struct ImportOpts : Base {
    std::string manifest, hydrated, outlets, out;
  };
  auto io = std::make_shared<ImportOpts>();
  auto* imp = manifest->add_subcommand("import", "rebuild a corpus from hydrated records");
  add_config(imp, *io);
  imp->add_option("--manifest", io->manifest, "manifest file")->required();
  imp->add_option("--hydrated", io->hydrated, "hydrated tweet JSON lines")->required();
  imp->add_option("--outlets", io->outlets, "outlet registry CSV");
  imp->add_option("--out", io->out, "write the restored corpus as JSON lines");
  imp->callback([io, &action] {
    action = [io] {
      const auto cfg = io->load();
      std::ifstream mf(io->manifest);
      if (!mf) throw Error("cannot open " + io->manifest);
      const auto m = corpus::RehydrationManifest::read(mf);
      std::ifstream hf(io->hydrated);
      if (!hf) throw Error("cannot open " + io->hydrated);
      const auto registry =
          corpus::OutletRegistry::load(pick(io->outlets, cfg.paths.outlets, "outlets"));
      const auto r = corpus::import_manifest(m, hf, registry);
      print_rejections(r.corpus.rejections(), "record");
      std::cout << "expected=" << r.expected << " found=" << r.found
                << " coverage=" << format_fixed(r.coverage(), 4) << '\n';
      if (!io->out.empty()) {
        emit(io->out, [&](std::ostream& o) {
          for (const auto& t : r.corpus.records()) o << corpus::to_json_line(t) << '\n';
        });
      }
      return 0;
    };
  });
}

// --- annotate ------------------------------------------------------------------

void register_annotate(CLI::App& app, Action& action) {
  auto* cmd = app.add_subcommand("annotate", "inter-annotator agreement and label files");
  cmd->require_subcommand(1);

  struct AlphaOpts : Base {
    std::string labels;
  };
  auto ao = std::make_shared<AlphaOpts>();
  auto* alpha = cmd->add_subcommand("alpha", "nominal Krippendorff's alpha");
  add_config(alpha, *ao);
  alpha->add_option("--labels", ao->labels, "label file");
  alpha->callback([ao, &action] {
    action = [ao] {
      const auto cfg = ao->load();
      const auto recs = read_label_records(pick(ao->labels, cfg.paths.labels, "labels"));
      const auto r = annotation::krippendorff_alpha(recs);
      std::cout << "items=" << r.n_items << " single=" << r.n_single_items
                << " pairable=" << r.n_pairable_values
                << " D_o=" << format_fixed(r.observed_disagreement)
                << " D_e=" << format_fixed(r.expected_disagreement) << " alpha="
                << (r.alpha ? format_fixed(*r.alpha) : std::string("undefined")) << '\n';
      return 0;
    };
  });

  struct StatsOpts : Base {
    std::string labels, tag = "dataset";
  };
  auto so = std::make_shared<StatsOpts>();
  auto* stats = cmd->add_subcommand("stats", "label distribution");
  add_config(stats, *so);
  stats->add_option("--labels", so->labels, "label file");
  stats->add_option("--tag", so->tag, "dataset tag");
  stats->callback([so, &action] {
    action = [so] {
      const auto cfg = so->load();
      const auto recs = read_label_records(pick(so->labels, cfg.paths.labels, "labels"));
      const auto d = annotation::label_distribution(recs, so->tag);
      std::cout << "dataset,total,POS,NEG,NEU\n"
                << d.dataset_tag << ',' << d.total << ',' << d.count(Stance::kPositive) << ','
                << d.count(Stance::kNegative) << ',' << d.count(Stance::kNeutral) << '\n';
      return 0;
    };
  });

  struct MergeOpts : Base {
    std::string primary, secondary, policy = "majority", out;
  };
  auto mo = std::make_shared<MergeOpts>();
  auto* merge = cmd->add_subcommand("merge", "merge label files into one label per pair");
  add_config(merge, *mo);
  merge->add_option("--primary", mo->primary, "first label file")->required();
  merge->add_option("--secondary", mo->secondary, "second label file");
  merge->add_option("--policy", mo->policy, "keep_first | majority | strict_agreement");
  merge->add_option("--out", mo->out, "merged label file (stdout when omitted)");
  merge->callback([mo, &action] {
    action = [mo] {
      const auto policy = annotation::parse_merge_policy(mo->policy);
      if (!policy) throw pl::ConfigError("unknown --policy " + mo->policy);
      const auto a = read_label_records(mo->primary);
      const auto b = mo->secondary.empty() ? std::vector<annotation::AnnotationRecord>{}
                                           : read_label_records(mo->secondary);
      const auto r = annotation::merge_annotations(a, b, *policy);
      emit(mo->out, [&](std::ostream& o) { annotation::write_labels(o, r.records); });
      std::cerr << "merged=" << r.records.size() << " dropped=" << r.dropped.size() << '\n';
      return 0;
    };
  });
}

// --- sentiment ------------------------------------------------------------------

void register_sentiment(CLI::App& app, Action& action) {
  auto* cmd = app.add_subcommand("sentiment", "lexicon sentiment scoring");
  cmd->require_subcommand(1);
  struct ScoreOpts : Base {
    std::string lexicon, input, text, out;
  };
  auto so = std::make_shared<ScoreOpts>();
  auto* score = cmd->add_subcommand("score", "compound score per tweet or for one text");
  add_config(score, *so);
  score->add_option("--lexicon", so->lexicon, "lexicon file");
  score->add_option("--input", so->input, "tweet JSON lines");
  score->add_option("--text", so->text, "score a single text");
  score->add_option("--out", so->out, "CSV id,compound (stdout when omitted)");
  score->callback([so, &action] {
    action = [so] {
      const auto cfg = so->load();
      const auto lex = sentiment::SentimentLexicon::load(pick(so->lexicon, cfg.paths.lexicon, "lexicon"));
      if (!so->text.empty()) {
        std::cout << format_fixed(sentiment::score_text(so->text, lex).compound) << '\n';
        return 0;
      }
      std::ifstream in(pick(so->input, cfg.paths.tweets, "input"));
      if (!in) throw Error("cannot open tweet input");
      std::vector<corpus::TweetRecord> tweets;
      std::string line;
      while (std::getline(in, line)) {
        if (!trim(line).empty()) tweets.push_back(corpus::parse_tweet_json(line));
      }
      const auto scores = sentiment::score_corpus(tweets, lex);
      emit(so->out, [&](std::ostream& o) {
        o << "id,compound\n";
        for (const auto& [id, s] : scores) o << csv_field(id) << ',' << format_fixed(s.compound) << '\n';
      });
      return 0;
    };
  });
}

// --- termshift ------------------------------------------------------------------

void register_termshift(CLI::App& app, Action& action) {
  struct Opts : Base {
    std::string tweets, outlets, keywords_file, fg, bg, stopwords, entities, lemmas, out;
    std::size_t k = 0;
    bool no_window = false;
  };
  auto o = std::make_shared<Opts>();
  auto* cmd = app.add_subcommand("termshift", "rank-difference characteristic bigrams");
  add_config(cmd, *o);
  cmd->add_option("--tweets", o->tweets, "tweet JSON lines");
  cmd->add_option("--outlets", o->outlets, "outlet registry CSV");
  cmd->add_option("--keywords-file", o->keywords_file, "topic keywords");
  cmd->add_option("--fg-window", o->fg, "foreground month YYYY-MM");
  cmd->add_option("--bg-window", o->bg, "background month YYYY-MM");
  cmd->add_option("--k", o->k, "terms per column");
  cmd->add_option("--stopwords", o->stopwords, "stopword list");
  cmd->add_option("--entities", o->entities, "entity stoplist");
  cmd->add_option("--lemmas", o->lemmas, "lemma map surface<TAB>lemma");
  cmd->add_option("--out", o->out, "CSV (stdout when omitted)");
  cmd->add_flag("--no-window", o->no_window, "do not filter by study window");
  cmd->callback([o, &action] {
    action = [o] {
      const auto cfg = o->load();
      const auto c = load_corpus_from(cfg, o->tweets, o->outlets, o->no_window);
      std::vector<corpus::TweetRecord> news;
      for (const auto* t : c.news()) news.push_back(*t);
      const auto topic = corpus::filter_topic_news(news, keywords_from(cfg, o->keywords_file));
      const auto or_cfg = [](const std::string& flag, const fs::path& p) {
        return flag.empty() ? p : fs::path(flag);
      };
      auto pc = termshift::PreprocessConfig::load(or_cfg(o->stopwords, cfg.paths.stopwords),
                                                  or_cfg(o->entities, cfg.paths.entities),
                                                  or_cfg(o->lemmas, cfg.paths.lemmas));
      pc.validate();
      const auto cols = termshift::top_k_shift_by_country(
          topic, o->fg.empty() ? cfg.termshift_foreground : o->fg,
          o->bg.empty() ? cfg.termshift_background : o->bg, pc, o->k ? o->k : cfg.termshift_k,
          true);
      emit(o->out, [&](std::ostream& out) {
        out << "group,foreground,background,rank,term,tau,notice\n";
        for (const auto& col : cols) {
          if (col.terms.empty()) {
            out << col.group << ',' << col.foreground_period << ',' << col.background_period
                << ",,,," << csv_field(col.notice) << '\n';
          }
          for (std::size_t i = 0; i < col.terms.size(); ++i) {
            out << col.group << ',' << col.foreground_period << ',' << col.background_period
                << ',' << i + 1 << ',' << csv_field(col.terms[i].term) << ','
                << format_fixed(col.terms[i].tau, 9) << ",\n";
          }
        }
      });
      return 0;
    };
  });
}

// --- eval ------------------------------------------------------------------

std::vector<eval::LabeledPair> labeled_items(const std::string& pairs_path,
                                             const std::vector<annotation::AnnotationRecord>& labels) {
  if (!pairs_path.empty()) {
    const auto ps = corpus::read_pairs(fs::path(pairs_path));
    return eval::join_labels(ps.pairs, labels);
  }
  // Without texts only the majority baseline is meaningful.
  std::vector<eval::LabeledPair> out;
  std::set<std::string> seen;
  for (const auto& r : labels) {
    if (seen.insert(r.pair_id).second) out.push_back({r.pair_id, "", "", r.label});
  }
  return out;
}

void print_report(std::ostream& o, const std::string& name, const eval::EvalReport& r) {
  o << name << ",n=" << r.n << ",accuracy=" << format_fixed(r.accuracy, 4)
    << ",macro_f1=" << format_fixed(r.macro_f1, 4) << '\n';
}

void register_eval(CLI::App& app, Action& action) {
  auto* cmd = app.add_subcommand("eval", "stance classifier evaluation");
  cmd->require_subcommand(1);

  struct CvOpts : Base {
    std::string pairs, labels, predictions, baseline = "zero_r", confusion;
    std::size_t k = 0;
    std::vector<double> l2_grid;
    std::optional<std::uint64_t> seed;
  };
  auto co = std::make_shared<CvOpts>();
  auto* cv = cmd->add_subcommand("crossval", "stratified k-fold cross-validation");
  add_config(cv, *co);
  cv->add_option("--pairs", co->pairs, "pairs JSON lines (needed for bow)");
  cv->add_option("--labels", co->labels, "gold label file");
  cv->add_option("--predictions", co->predictions, "score an external prediction file per fold");
  cv->add_option("--baseline,--model", co->baseline, "zero_r | bow");
  cv->add_option("--k", co->k, "folds");
  cv->add_option("--seed", co->seed, "fold seed");
  cv->add_option("--confusion", co->confusion, "write the summed confusion matrix CSV");
  cv->add_option("--l2-grid", co->l2_grid, "bow: L2 values searched by inner CV (comma list)")
      ->delimiter(',');
  cv->callback([co, &action] {
    action = [co] {
      const auto cfg = co->load();
      const auto labels = read_label_records(pick(co->labels, cfg.paths.labels, "labels"));
      const auto items = labeled_items(co->pairs, labels);
      const std::size_t k = co->k ? co->k : cfg.folds;
      const std::uint64_t seed = co->seed.value_or(cfg.seed);
      eval::CrossValReport rep;
      std::string name;
      if (!co->predictions.empty()) {
        const auto pf = eval::load_predictions(co->predictions);
        print_rejections(pf.rejections, "prediction");
        rep = eval::cross_validate_predictions(pf.records, items, k, seed);
        name = "predictions";
      } else {
        const auto kind = eval::parse_baseline(co->baseline);
        if (!kind) throw pl::ConfigError("unknown --baseline " + co->baseline);
        if (*kind == eval::BaselineKind::kBowLogistic && co->pairs.empty()) {
          throw pl::ConfigError("--baseline bow needs --pairs for the texts");
        }
        eval::LogisticOptions lo;
        lo.l2_grid = co->l2_grid.empty() ? cfg.bow_l2_grid : co->l2_grid;
        rep = eval::cross_validate(*kind, items, k, seed, lo);
        name = std::string(eval::baseline_tag(*kind));
      }
      for (const auto& w : rep.warnings) std::cerr << "warning: " << w << '\n';
      for (std::size_t f = 0; f < rep.folds.size(); ++f) {
        print_report(std::cout, "fold" + std::to_string(f), rep.folds[f]);
      }
      std::cout << name << ",mean,accuracy=" << format_fixed(rep.accuracy, 4)
                << ",macro_f1=" << format_fixed(rep.macro_f1, 4) << '\n';
      if (!co->confusion.empty()) {
        emit(co->confusion, [&](std::ostream& o) { eval::write_confusion_csv(o, rep.confusion); });
      }
      return 0;
    };
  });

  struct XlOpts : Base {
    std::vector<std::string> datasets;
    std::string pairs, predictions, out;
    bool bow = false;
    std::vector<double> l2_grid;
  };
  auto xo = std::make_shared<XlOpts>();
  auto* xl = cmd->add_subcommand("crosslingual", "leave-one-dataset-out grid");
  add_config(xl, *xo);
  xl->add_option("--dataset,--datasets", xo->datasets, "TAG=labels file (repeatable)")->required();
  xl->add_option("--pairs", xo->pairs, "pairs JSON lines supplying texts");
  xl->add_option("--predictions", xo->predictions, "adapter predictions scored per holdout");
  xl->add_flag("--bow", xo->bow, "also train the bag-of-words baseline");
  xl->add_option("--l2-grid", xo->l2_grid, "bow: L2 values searched by inner CV (comma list)")
      ->delimiter(',');
  xl->add_option("--out", xo->out, "grid CSV (stdout when omitted)");
  xl->callback([xo, &action] {
    action = [xo] {
      std::vector<eval::Dataset> datasets;
      for (const auto& entry : xo->datasets) {
        const auto eq = entry.find('=');
        if (eq == std::string::npos || eq == 0) throw pl::ConfigError("--dataset expects TAG=FILE");
        datasets.push_back({entry.substr(0, eq),
                            labeled_items(xo->pairs, read_label_records(entry.substr(eq + 1)))});
      }
      eval::CrossLingualOptions opts;
      opts.run_bow = xo->bow;
      opts.logistic.l2_grid = xo->l2_grid.empty() ? xo->load().bow_l2_grid : xo->l2_grid;
      if (opts.run_bow && xo->pairs.empty()) throw pl::ConfigError("--bow needs --pairs");
      std::vector<eval::PredictionRecord> preds;
      if (!xo->predictions.empty()) {
        auto pf = eval::load_predictions(xo->predictions);
        print_rejections(pf.rejections, "prediction");
        preds = std::move(pf.records);
        opts.adapter = &preds;
      }
      const auto grid = eval::cross_lingual_experiment(datasets, opts);
      for (const auto& n : grid.notices) std::cerr << "notice: " << n << '\n';
      emit(xo->out, [&](std::ostream& o) {
        o << "train,test,zero_r_accuracy,zero_r_macro_f1,zero_r_train_accuracy,"
             "zero_r_train_macro_f1,bow_accuracy,bow_macro_f1,adapter_accuracy,adapter_macro_f1\n";
        const auto opt = [](const std::optional<eval::EvalReport>& r, bool f1) {
          return r ? format_fixed(f1 ? r->macro_f1 : r->accuracy, 4) : std::string();
        };
        for (const auto& r : grid.rows) {
          std::string train;
          for (const auto& t : r.train_tags) train += (train.empty() ? "" : "+") + t;
          o << train << ',' << r.test_tag << ',' << format_fixed(r.zero_r.accuracy, 4) << ','
            << format_fixed(r.zero_r.macro_f1, 4) << ','
            << format_fixed(r.zero_r_train.accuracy, 4) << ','
            << format_fixed(r.zero_r_train.macro_f1, 4) << ',' << opt(r.bow, false) << ','
            << opt(r.bow, true) << ',' << opt(r.adapter, false) << ',' << opt(r.adapter, true)
            << '\n';
        }
      });
      return 0;
    };
  });
}

// --- series ------------------------------------------------------------------

void register_series(CLI::App& app, Action& action) {
  auto* cmd = app.add_subcommand("series", "time series and Granger tests");
  cmd->require_subcommand(1);

  struct SentOpts : Base {
    std::string tweets, outlets, lexicon, keywords_file, bucket, country, out;
    bool include_zero = false;
  };
  auto so = std::make_shared<SentOpts>();
  auto* sent = cmd->add_subcommand("sentiment", "median news sentiment per bucket");
  add_config(sent, *so);
  sent->add_option("--tweets", so->tweets, "tweet JSON lines");
  sent->add_option("--outlets", so->outlets, "outlet registry CSV");
  sent->add_option("--lexicon", so->lexicon, "lexicon file");
  sent->add_option("--keywords-file", so->keywords_file, "topic keywords");
  sent->add_option("--bucket", so->bucket, "week | month");
  sent->add_option("--country", so->country, "restrict to one country");
  sent->add_flag("--include-zero", so->include_zero, "keep zero scores in the median");
  sent->add_option("--out", so->out, "series CSV (stdout when omitted)");
  sent->callback([so, &action] {
    action = [so] {
      const auto cfg = so->load();
      const auto c = load_corpus_from(cfg, so->tweets, so->outlets, false);
      const auto lex = sentiment::SentimentLexicon::load(pick(so->lexicon, cfg.paths.lexicon, "lexicon"));
      std::vector<corpus::TweetRecord> news;
      for (const auto* t : c.news()) {
        if (so->country.empty() || t->country == so->country) news.push_back(*t);
      }
      std::vector<series::TimedValue> values;
      for (const auto& t : corpus::filter_topic_news(news, keywords_from(cfg, so->keywords_file))) {
        values.push_back({t.created_at, sentiment::score_text(t.english_text(), lex).compound});
      }
      const bool exclude = so->include_zero ? false : cfg.exclude_zero;
      const auto pts = series::median_sentiment_series(values, bucketing_of(cfg, so->bucket), exclude);
      emit(so->out, [&](std::ostream& o) { series::write_series_csv(o, pts); });
      return 0;
    };
  });

  struct StanceOpts : Base {
    std::string pairs, labels, predictions, bucket, scalar, country, out, figure;
  };
  auto to = std::make_shared<StanceOpts>();
  auto* stance = cmd->add_subcommand("stance", "reply stance shares per bucket");
  add_config(stance, *to);
  stance->add_option("--pairs", to->pairs, "pairs JSON lines (reply timestamps)")->required();
  stance->add_option("--labels", to->labels, "label file");
  stance->add_option("--predictions", to->predictions, "prediction file instead of labels");
  stance->add_option("--bucket", to->bucket, "week | month");
  stance->add_option("--scalar", to->scalar, "positive_share | signed_mean");
  stance->add_option("--country", to->country, "restrict to one country");
  stance->add_option("--out", to->out, "stance CSV (stdout when omitted)");
  stance->add_option("--scalar-out", to->figure, "also write the scalar as a series CSV");
  stance->callback([to, &action] {
    action = [to] {
      const auto cfg = to->load();
      auto scalar = cfg.stance_scalar;
      if (!to->scalar.empty()) {
        const auto s = series::parse_stance_scalar(to->scalar);
        if (!s) throw pl::ConfigError("--scalar must be positive_share or signed_mean");
        scalar = *s;
      }
      const auto ps = corpus::read_pairs(fs::path(to->pairs));
      std::map<std::string, const corpus::ConversationPair*> by_id;
      for (const auto& p : ps.pairs) by_id[p.pair_id] = &p;
      std::vector<std::pair<std::string, Stance>> assigned;
      if (!to->predictions.empty()) {
        const auto pf = eval::load_predictions(to->predictions);
        print_rejections(pf.rejections, "prediction");
        for (const auto& r : pf.records) assigned.emplace_back(r.pair_id, r.label);
      } else {
        const auto recs = read_label_records(pick(to->labels, cfg.paths.labels, "labels"));
        const auto merged = annotation::merge_annotations(recs, {}, cfg.label_merge);
        for (const auto& r : merged.records) assigned.emplace_back(r.pair_id, r.label);
      }
      std::vector<series::TimedLabel> labels;
      for (const auto& [id, label] : assigned) {
        const auto it = by_id.find(id);
        if (it == by_id.end()) continue;
        if (!to->country.empty() && it->second->news.country != to->country) continue;
        labels.push_back({it->second->reply.created_at, label});
      }
      const auto pts = series::stance_series(labels, bucketing_of(cfg, to->bucket), scalar);
      emit(to->out, [&](std::ostream& o) { series::write_stance_csv(o, pts); });
      if (!to->figure.empty()) {
        emit(to->figure, [&](std::ostream& o) {
          series::write_series_csv(o, series::scalar_series(pts));
        });
      }
      return 0;
    };
  });

  struct GrangerOpts : Base {
    std::string x, y, out;
    int max_lag = 0;
  };
  auto go = std::make_shared<GrangerOpts>();
  auto* granger = cmd->add_subcommand("granger", "Granger tests in both directions");
  add_config(granger, *go);
  granger->add_option("--x", go->x, "series CSV")->required()->check(CLI::ExistingFile);
  granger->add_option("--y", go->y, "series CSV")->required()->check(CLI::ExistingFile);
  granger->add_option("--max-lag", go->max_lag, "largest lag tested");
  granger->add_option("--out", go->out, "CSV (stdout when omitted)");
  granger->callback([go, &action] {
    action = [go] {
      const auto cfg = go->load();
      const auto x = series::load_series_csv(go->x);
      const auto y = series::load_series_csv(go->y);
      const auto res = series::granger_test(x, y, go->max_lag ? go->max_lag : cfg.max_lag,
                                            fs::path(go->x).stem().string(),
                                            fs::path(go->y).stem().string());
      emit(go->out, [&](std::ostream& o) { series::write_granger_csv(o, res); });
      return 0;
    };
  });
}

// --- figure and report ------------------------------------------------------------

void register_figure(CLI::App& app, Action& action) {
  struct Opts : Base {
    std::string kind, title, out;
    std::vector<std::string> csvs;
  };
  auto o = std::make_shared<Opts>();
  auto* cmd = app.add_subcommand("figure", "render an SVG chart from series CSVs");
  add_config(cmd, *o);
  cmd->add_option("--kind", o->kind, "dual-axis-lines | stacked-shares")->required();
  cmd->add_option("--csv", o->csvs, "input CSV (repeatable)")->required();
  cmd->add_option("--title", o->title, "chart title");
  cmd->add_option("--out", o->out, "SVG file (stdout when omitted)");
  cmd->callback([o, &action] {
    action = [o] {
      const auto kind = figure::parse_figure_kind(o->kind);
      if (!kind) throw pl::ConfigError("unknown --kind " + o->kind);
      const std::vector<fs::path> paths(o->csvs.begin(), o->csvs.end());
      const std::string svg = figure::render_figure(*kind, paths, o->title);
      emit(o->out, [&](std::ostream& out) { out << svg; });
      return 0;
    };
  });
}

void register_report(CLI::App& app, Action& action) {
  struct Opts : Base {
    std::string manifest, out;
    std::vector<std::string> stages;
  };
  auto o = std::make_shared<Opts>();
  auto* cmd = app.add_subcommand("report", "run the end-to-end pipeline into a report bundle");
  add_config(cmd, *o);
  cmd->add_option("--manifest", o->manifest, "rerun from a bundle's run_manifest.json")
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", o->out, "bundle directory");
  cmd->add_option("--stages", o->stages, "stages to run")->delimiter(',');
  cmd->callback([o, &action] {
    action = [o] {
      if (o->config.empty() == o->manifest.empty()) {
        throw pl::ConfigError("report needs exactly one of --config or --manifest");
      }
      auto cfg = o->manifest.empty() ? o->load() : pl::config_from_manifest(o->manifest);
      if (!o->stages.empty()) {
        cfg.stages.clear();
        for (const auto& s : o->stages) {
          const auto st = pl::parse_stage(s);
          if (!st) throw pl::ConfigError("unknown stage " + s);
          cfg.stages.push_back(*st);
        }
        std::sort(cfg.stages.begin(), cfg.stages.end());
        cfg.stages.erase(std::unique(cfg.stages.begin(), cfg.stages.end()), cfg.stages.end());
      }
      const auto out = pl::resolve_output_dir(
          cfg, o->out.empty() ? std::nullopt : std::optional<fs::path>(o->out));
      const auto bundle = pl::run_pipeline(cfg, out);
      for (const auto& s : bundle.stages) {
        std::cout << pl::stage_name(s.stage) << ": " << pl::stage_status_name(s.status);
        if (!s.message.empty()) std::cout << " (" << s.message << ')';
        std::cout << '\n';
      }
      std::cout << "bundle: " << out.string() << "\nrun_hash: " << bundle.run_hash << '\n';
      return bundle.exit_code();
    };
  });
}

}  // namespace

void register_commands(CLI::App& app, Action& action) {
  register_corpus(app, action);
  register_annotate(app, action);
  register_sentiment(app, action);
  register_termshift(app, action);
  register_eval(app, action);
  register_series(app, action);
  register_figure(app, action);
  register_report(app, action);
}

}  // namespace stanceshift::cli
