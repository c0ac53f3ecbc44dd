#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tokbench/config.hpp"
#include "tokbench/corpus.hpp"
#include "tokbench/cross_validation.hpp"
#include "tokbench/error.hpp"
#include "tokbench/lattice.hpp"
#include "tokbench/logistic.hpp"
#include "tokbench/metrics.hpp"
#include "tokbench/naive_bayes.hpp"
#include "tokbench/report.hpp"
#include "tokbench/subword.hpp"
#include "tokbench/text_io.hpp"
#include "tokbench/tokenizer.hpp"
#include "tokbench/vectorize.hpp"

// End-to-end experiment flow: sample -> tokenizer -> timed TF-IDF -> fit ->
// evaluate -> optional grid search, with every stage's artifact written to
// the output directory.
namespace tokbench {

enum class ClassifierKind { mnb, lr };

inline const char* to_string(ClassifierKind k) { return k == ClassifierKind::mnb ? "mnb" : "lr"; }
inline const char* display_name(ClassifierKind k) { return k == ClassifierKind::mnb ? "MNB" : "LR"; }

inline ClassifierKind parse_classifier_kind(std::string_view s) {
  if (s == "mnb") return ClassifierKind::mnb;
  if (s == "lr") return ClassifierKind::lr;
  fail(ErrorKind::config, "unknown classifier '" + std::string(s) + "' (expected mnb or lr)");
}

struct PipelineConfig {
  std::string train_path;
  std::string test_path;  // optional
  std::string output_dir;
  TokenizerKind tokenizer = TokenizerKind::subword;
  std::string dictionary_path;     // lattice
  std::string subword_model_path;  // subword; trained on the train set when empty
  TrainerConfig subword;
  ClassifierKind classifier = ClassifierKind::lr;
  double alpha = 1.0;
  LrParams lr;
  double sample_fraction = 1.0;
  std::uint64_t sample_seed = 42;
  bool tune = false;
  std::vector<double> grid = default_c_grid();
  std::size_t cv_k = 5;
  std::size_t cv_repeats = 3;
  std::uint64_t cv_seed = 42;
  unsigned threads = 1;

  /// Settings that determine results, as key=value pairs. output_dir and
  /// threads are left out: neither changes any number.
  KeyValueConfig to_kv(bool include_run_settings = false) const {
    KeyValueConfig kv;
    kv.set("train", train_path);
    kv.set("test", test_path);
    if (include_run_settings) kv.set("output_dir", output_dir);
    kv.set("tokenizer", to_string(tokenizer));
    kv.set("dictionary", dictionary_path);
    kv.set("subword_model", subword_model_path);
    kv.set("vocab_size", std::to_string(subword.vocab_size));
    kv.set("max_piece_len", std::to_string(subword.max_piece_len));
    kv.set("seed_size", std::to_string(subword.effective_seed_size()));
    kv.set("shrink_factor", text::format_exact(subword.shrink_factor));
    kv.set("em_iters_per_round", std::to_string(subword.em_iters_per_round));
    kv.set("max_sentence_len", std::to_string(subword.max_sentence_len));
    kv.set("min_piece_freq", std::to_string(subword.min_piece_freq));
    kv.set("classifier", to_string(classifier));
    kv.set("alpha", text::format_exact(alpha));
    kv.set("C", text::format_exact(lr.C));
    kv.set("tol", text::format_exact(lr.tol));
    kv.set("max_iter", std::to_string(lr.max_iter));
    kv.set("sample_fraction", text::format_exact(sample_fraction));
    kv.set("sample_seed", std::to_string(sample_seed));
    kv.set("tune", tune ? "true" : "false");
    std::string g = "C=";
    for (std::size_t i = 0; i < grid.size(); ++i) g += (i ? "," : "") + text::format_exact(grid[i]);
    kv.set("grid", g);
    kv.set("cv_k", std::to_string(cv_k));
    kv.set("cv_repeats", std::to_string(cv_repeats));
    kv.set("cv_seed", std::to_string(cv_seed));
    if (include_run_settings) kv.set("threads", std::to_string(threads));
    return kv;
  }

  /// Applies recognized keys; an unknown key is a config error.
  static PipelineConfig from_kv(const KeyValueConfig& kv) { return from_kv(kv, PipelineConfig()); }

  static PipelineConfig from_kv(const KeyValueConfig& kv, PipelineConfig base) {
    PipelineConfig c = std::move(base);
    for (const auto& [key, value] : kv.entries()) c.apply(key, value);
    return c;
  }

  void apply(const std::string& key, const std::string& value) {
    auto size_value = [&]() {
      const auto v = text::parse_int(value);
      if (!v || *v < 0) fail(ErrorKind::config, "config key '" + key + "': expected a non-negative integer");
      return static_cast<std::size_t>(*v);
    };
    auto real_value = [&]() {
      const auto v = text::parse_double(value);
      if (!v) fail(ErrorKind::config, "config key '" + key + "': expected a number");
      return *v;
    };
    auto bool_value = [&]() {
      if (value == "true" || value == "1") return true;
      if (value == "false" || value == "0") return false;
      fail(ErrorKind::config, "config key '" + key + "': expected true or false");
    };
    if (key == "train") train_path = value;
    else if (key == "test") test_path = value;
    else if (key == "output_dir") output_dir = value;
    else if (key == "tokenizer") tokenizer = parse_tokenizer_kind(value);
    else if (key == "dictionary") dictionary_path = value;
    else if (key == "subword_model") subword_model_path = value;
    else if (key == "vocab_size") subword.vocab_size = size_value();
    else if (key == "max_piece_len") subword.max_piece_len = size_value();
    else if (key == "seed_size") subword.seed_size = size_value();
    else if (key == "shrink_factor") subword.shrink_factor = real_value();
    else if (key == "em_iters_per_round") subword.em_iters_per_round = size_value();
    else if (key == "max_sentence_len") subword.max_sentence_len = size_value();
    else if (key == "min_piece_freq") subword.min_piece_freq = size_value();
    else if (key == "classifier") classifier = parse_classifier_kind(value);
    else if (key == "alpha") alpha = real_value();
    else if (key == "C") lr.C = real_value();
    else if (key == "tol") lr.tol = real_value();
    else if (key == "max_iter") lr.max_iter = size_value();
    else if (key == "sample_fraction") sample_fraction = real_value();
    else if (key == "sample_seed") sample_seed = size_value();
    else if (key == "tune") tune = bool_value();
    else if (key == "grid") grid = parse_c_grid(value);
    else if (key == "cv_k") cv_k = size_value();
    else if (key == "cv_repeats") cv_repeats = size_value();
    else if (key == "cv_seed") cv_seed = size_value();
    else if (key == "threads") threads = static_cast<unsigned>(size_value());
    else fail(ErrorKind::config, "unknown config key '" + key + "'");
  }

  /// Checks everything that can be checked before any work starts.
  void validate(bool need_output_dir = true) const {
    namespace fs = std::filesystem;
    auto require_file = [](const std::string& path, const char* what) {
      if (path.empty()) fail(ErrorKind::config, std::string(what) + " path is not set");
      if (!fs::is_regular_file(path)) fail(ErrorKind::config, std::string(what) + " not found: " + path);
    };
    require_file(train_path, "train CSV");
    if (!test_path.empty()) require_file(test_path, "test CSV");
    if (tokenizer == TokenizerKind::lattice) require_file(dictionary_path, "dictionary");
    if (tokenizer == TokenizerKind::subword && !subword_model_path.empty()) require_file(subword_model_path, "subword model");
    if (need_output_dir && output_dir.empty()) fail(ErrorKind::config, "output_dir is not set");
    if (!(sample_fraction > 0.0 && sample_fraction <= 1.0)) fail(ErrorKind::config, "sample_fraction must be in (0, 1]");
    if (!(alpha > 0.0)) fail(ErrorKind::config, "alpha must be > 0");
    if (!(lr.C > 0.0)) fail(ErrorKind::config, "C must be > 0");
    if (tune && classifier != ClassifierKind::lr) fail(ErrorKind::config, "tune=true requires classifier=lr");
    if (tune && (cv_k < 2 || cv_repeats < 1 || grid.empty())) fail(ErrorKind::config, "bad cross-validation settings");
  }
};

inline PipelineConfig load_pipeline_config(const std::string& path) {
  return PipelineConfig::from_kv(KeyValueConfig::parse(text::read_file(path)));
}

/// Runs `fn`, prefixing any error with the stage name.
template <typename Fn>
auto run_stage(const char* stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.kind(), std::string("stage '") + stage + "': " + e.what());
  } catch (const std::exception& e) {
    throw Error(ErrorKind::internal, std::string("stage '") + stage + "': " + e.what());
  }
}

/// A fitted tokenizer + vectorizer + classifier, as stored in a model dir.
struct TrainedPipeline {
  TokenizerKind tokenizer_kind = TokenizerKind::subword;
  ClassifierKind classifier_kind = ClassifierKind::lr;
  std::shared_ptr<const LexDictionary> dictionary;
  std::shared_ptr<const SubwordVocab> subword;
  TfidfModel tfidf;
  std::optional<MnbModel> mnb;
  std::optional<LrModel> lr;

  AnyTokenizer tokenizer() const {
    if (tokenizer_kind == TokenizerKind::lattice) return LatticeTokenizer(dictionary);
    return SubwordTokenizer(subword);
  }

  std::vector<Sentiment> predict(const SparseMatrix& x) const {
    if (classifier_kind == ClassifierKind::mnb) return mnb_predict(*mnb, x).labels;
    return lr_predict(*lr, x).labels;
  }

  SparseMatrix vectorize(const std::vector<std::string>& texts, unsigned threads = 1) const {
    return transform_tfidf(tfidf, tokenize_all(tokenizer(), texts, threads), threads);
  }
};

/// Loads or trains the configured tokenizer.
inline void prepare_tokenizer(const PipelineConfig& cfg, const Dataset& train, TrainedPipeline& tp) {
  tp.tokenizer_kind = cfg.tokenizer;
  if (cfg.tokenizer == TokenizerKind::lattice) {
    tp.dictionary = std::make_shared<const LexDictionary>(load_dictionary_file(cfg.dictionary_path));
  } else if (!cfg.subword_model_path.empty()) {
    tp.subword = std::make_shared<const SubwordVocab>(load_subword_file(cfg.subword_model_path));
  } else {
    TrainerConfig tc = cfg.subword;
    tc.threads = cfg.threads;
    tp.subword = std::make_shared<const SubwordVocab>(train_subword(train.bodies(), tc));
  }
}

/// Tracks files written into the output directory so a failed run can be
/// rolled back.
class OutputDir {
 public:
  explicit OutputDir(std::filesystem::path dir) : dir_(std::move(dir)) {
    namespace fs = std::filesystem;
    if (!fs::exists(dir_)) {
      std::error_code ec;
      fs::create_directories(dir_, ec);
      if (ec) fail(ErrorKind::io, "cannot create output dir " + dir_.string() + ": " + ec.message());
      created_ = true;
    } else if (!fs::is_directory(dir_)) {
      fail(ErrorKind::config, "output path is not a directory: " + dir_.string());
    }
  }

  void write(const std::string& name, std::string_view content) {
    const auto path = dir_ / name;
    written_.push_back(path);
    text::write_file(path.string(), content);
  }

  void rollback() noexcept {
    std::error_code ec;
    for (const auto& p : written_) std::filesystem::remove(p, ec);
    if (created_) std::filesystem::remove(dir_, ec);
  }

  const std::filesystem::path& path() const { return dir_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::filesystem::path> written_;
  bool created_ = false;
};

struct PipelineOutcome {
  EvalReport report;                // configured classifier
  std::optional<EvalReport> tuned;  // LR refit with the grid-search winner
  std::optional<GridSearchResult> search;
};

namespace detail {

inline PipelineOutcome run_pipeline_into(const PipelineConfig& cfg, OutputDir& out) {
  Dataset train, test;
  run_stage("load", [&] {
    train = load_review_csv(cfg.train_path);
    if (!cfg.test_path.empty()) test = load_review_csv(cfg.test_path);
  });
  run_stage("sample", [&] {
    if (cfg.sample_fraction < 1.0) {
      train = random_sample(train, cfg.sample_fraction, cfg.sample_seed);
      if (!cfg.test_path.empty()) test = random_sample(test, cfg.sample_fraction, cfg.sample_seed);
    }
    if (train.empty()) fail(ErrorKind::invalid_argument, "training set is empty");
    out.write("train.csv", serialize_review_csv(train));
    if (!cfg.test_path.empty()) out.write("test.csv", serialize_review_csv(test));
  });

  TrainedPipeline tp;
  tp.classifier_kind = cfg.classifier;
  run_stage("tokenizer", [&] {
    prepare_tokenizer(cfg, train, tp);
    if (tp.dictionary) out.write("dictionary.tsv", serialize_dictionary(*tp.dictionary));
    if (tp.subword) out.write("subword.model", serialize_subword(*tp.subword));
  });

  TimedVectorization vec;
  run_stage("vectorize", [&] {
    vec = fit_transform_timed(tp.tokenizer(), train.bodies(), cfg.threads);
    tp.tfidf = vec.model;
    out.write("tfidf.tsv", serialize_tfidf(tp.tfidf));
  });

  const auto y_train = train.labels();
  run_stage("fit", [&] {
    if (cfg.classifier == ClassifierKind::mnb) {
      tp.mnb = mnb_fit(vec.matrix, y_train, cfg.alpha);
      out.write("mnb.tsv", serialize_mnb(*tp.mnb));
    } else {
      tp.lr = lr_fit(vec.matrix, y_train, cfg.lr);
      out.write("lr.tsv", serialize_lr(*tp.lr));
    }
  });

  PipelineOutcome outcome;
  const auto echo = cfg.to_kv().entries();
  const std::string stamp = utc_timestamp();
  SparseMatrix x_test;
  run_stage("evaluate", [&] {
    EvalReport& r = outcome.report;
    r.tokenizer = display_name(cfg.tokenizer);
    r.classifier = display_name(cfg.classifier);
    r.error_train = evaluate_error(tp.predict(vec.matrix), y_train);
    if (!cfg.test_path.empty() && !test.empty()) {
      x_test = tp.vectorize(test.bodies(), cfg.threads);
      r.error_test = evaluate_error(tp.predict(x_test), test.labels());
    }
    r.vectorize_seconds = vec.elapsed_seconds;
    r.n_train = train.size();
    r.n_test = test.size();
    r.config = echo;
    r.timestamp = stamp;
  });

  if (cfg.tune) {
    run_stage("tune", [&] {
      const auto plan = repeated_stratified_kfold(y_train, cfg.cv_k, cfg.cv_repeats, cfg.cv_seed);
      std::vector<LrParams> grid;
      for (double c : cfg.grid) grid.push_back({c, cfg.lr.tol, cfg.lr.max_iter});
      outcome.search = grid_search(vec.matrix, y_train, grid, plan, cfg.threads);
      const LrModel& best = outcome.search->refit;
      out.write("lr_tuned.tsv", serialize_lr(best));
      EvalReport t = outcome.report;
      t.classifier = "LR-tuned";
      t.error_train = evaluate_error(lr_predict(best, vec.matrix).labels, y_train);
      if (outcome.report.error_test) t.error_test = evaluate_error(lr_predict(best, x_test).labels, test.labels());
      t.config.emplace_back("tuned_C", text::format_exact(best.C));
      outcome.tuned = std::move(t);
    });
  }

  run_stage("write", [&] {
    std::vector<EvalReport> rows{outcome.report};
    if (outcome.tuned) rows.push_back(*outcome.tuned);
    out.write("pipeline.conf", cfg.to_kv(true).serialize());
    out.write("report.kv", serialize_report(outcome.report));
    if (outcome.tuned) out.write("report_tuned.kv", serialize_report(*outcome.tuned));
    out.write("report.txt", emit_report(rows, ReportFormat::text));
    out.write("report.csv", emit_report(rows, ReportFormat::csv));
  });
  return outcome;
}

}  // namespace detail

/// Runs every stage in order, writing artifacts to cfg.output_dir. On failure
/// the files written so far are removed and the error names the stage.
inline PipelineOutcome run_pipeline(const PipelineConfig& cfg) {
  run_stage("validate", [&] { cfg.validate(); });
  OutputDir out(cfg.output_dir);
  try {
    return detail::run_pipeline_into(cfg, out);
  } catch (...) {
    out.rollback();
    throw;
  }
}

/// Reloads a model directory written by run_pipeline.
inline TrainedPipeline load_model_dir(const std::string& dir) {
  namespace fs = std::filesystem;
  const fs::path root(dir);
  if (!fs::is_directory(root)) fail(ErrorKind::config, "model dir not found: " + dir);
  const auto cfg = load_pipeline_config((root / "pipeline.conf").string());
  TrainedPipeline tp;
  tp.tokenizer_kind = cfg.tokenizer;
  tp.classifier_kind = cfg.classifier;
  if (cfg.tokenizer == TokenizerKind::lattice) {
    tp.dictionary = std::make_shared<const LexDictionary>(load_dictionary_file((root / "dictionary.tsv").string()));
  } else {
    tp.subword = std::make_shared<const SubwordVocab>(load_subword_file((root / "subword.model").string()));
  }
  tp.tfidf = parse_tfidf(text::read_file((root / "tfidf.tsv").string()));
  if (cfg.classifier == ClassifierKind::mnb) {
    tp.mnb = parse_mnb(text::read_file((root / "mnb.tsv").string()));
  } else {
    tp.lr = parse_lr(text::read_file((root / "lr.tsv").string()));
  }
  return tp;
}

/// Scores a saved model on a test CSV. Training-side fields come from the
/// saved report.
inline EvalReport evaluate_model_dir(const std::string& dir, const std::string& test_path, unsigned threads = 1) {
  const auto tp = run_stage("load-model", [&] { return load_model_dir(dir); });
  EvalReport r = run_stage("load-model", [&] {
    return parse_report(text::read_file((std::filesystem::path(dir) / "report.kv").string()));
  });
  const Dataset test = run_stage("load", [&] { return load_review_csv(test_path); });
  run_stage("evaluate", [&] {
    if (test.empty()) fail(ErrorKind::invalid_argument, "test set is empty");
    r.error_test = evaluate_error(tp.predict(tp.vectorize(test.bodies(), threads)), test.labels());
    r.n_test = test.size();
    r.timestamp = utc_timestamp();
  });
  return r;
}

struct BenchRow {
  std::string tokenizer;
  std::size_t documents = 0;
  std::size_t features = 0;
  double seconds = 0.0;
};

/// Times tokenize + TF-IDF fit + transform on the first n training bodies for
/// every requested size. A subword model is trained once up front when none
/// is supplied; that training time is not part of the measurement.
inline std::vector<BenchRow> run_bench(const PipelineConfig& base, const std::vector<TokenizerKind>& tokenizers,
                                       const std::vector<std::size_t>& sizes) {
  const Dataset train = run_stage("load", [&] { return load_review_csv(base.train_path); });
  if (train.empty()) fail(ErrorKind::invalid_argument, "training set is empty");
  const auto bodies = train.bodies();
  std::vector<BenchRow> rows;
  for (TokenizerKind kind : tokenizers) {
    PipelineConfig cfg = base;
    cfg.tokenizer = kind;
    run_stage("validate", [&] { cfg.validate(false); });
    TrainedPipeline tp;
    run_stage("tokenizer", [&] { prepare_tokenizer(cfg, train, tp); });
    for (std::size_t n : sizes) {
      const std::size_t take = std::min(n, bodies.size());
      if (take == 0) fail(ErrorKind::config, "bench sizes must be positive");
      const std::vector<std::string> subset(bodies.begin(), bodies.begin() + static_cast<std::ptrdiff_t>(take));
      const auto vec = run_stage("vectorize", [&] { return fit_transform_timed(tp.tokenizer(), subset, cfg.threads); });
      rows.push_back({display_name(kind), take, vec.model.features(), vec.elapsed_seconds});
    }
  }
  return rows;
}

inline std::string format_bench(const std::vector<BenchRow>& rows) {
  std::string out = "Tokenizer   Documents   Features   Elapsed-s\n";
  for (const auto& r : rows) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%-9s %11zu %10zu %11s\n", r.tokenizer.c_str(), r.documents, r.features,
                  text::format_fixed(r.seconds, 2).c_str());
    out += buf;
  }
  return out;
}

/// Vectorizes the training set with the configured tokenizer and grid
/// searches C for logistic regression.
inline GridSearchResult run_gridsearch(const PipelineConfig& cfg) {
  run_stage("validate", [&] { cfg.validate(false); });
  Dataset train = run_stage("load", [&] { return load_review_csv(cfg.train_path); });
  if (cfg.sample_fraction < 1.0) train = random_sample(train, cfg.sample_fraction, cfg.sample_seed);
  TrainedPipeline tp;
  run_stage("tokenizer", [&] { prepare_tokenizer(cfg, train, tp); });
  const auto vec = run_stage("vectorize", [&] { return fit_transform_timed(tp.tokenizer(), train.bodies(), cfg.threads); });
  return run_stage("tune", [&] {
    const auto y = train.labels();
    const auto plan = repeated_stratified_kfold(y, cfg.cv_k, cfg.cv_repeats, cfg.cv_seed);
    std::vector<LrParams> grid;
    for (double c : cfg.grid) grid.push_back({c, cfg.lr.tol, cfg.lr.max_iter});
    return grid_search(vec.matrix, y, grid, plan, cfg.threads);
  });
}

inline std::string format_gridsearch(const GridSearchResult& r) {
  std::string out = "C           Mean-Error   Folds\n";
  for (std::size_t i = 0; i < r.cells.size(); ++i) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%-10s %11s %7zu%s\n", text::format_exact(r.cells[i].params.C).c_str(),
                  text::format_fixed(r.cells[i].mean_error, 2).c_str(), r.cells[i].fold_errors.size(),
                  i == r.best ? "  *" : "");
    out += buf;
  }
  out += "best C=" + text::format_exact(r.best_params().C) + "\n";
  return out;
}

}  // namespace tokbench
