// tokbench command-line front end.
#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <map>

#include "tokbench/tokbench.hpp"

using namespace tokbench;

namespace {

enum Exit { ok = 0, usage = 1, data = 2, internal = 3 };

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::invalid_argument:
    case ErrorKind::config:
      return usage;
    case ErrorKind::internal:
      return internal;
    default:
      return data;
  }
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
  } else {
    text::write_file(path, content);
  }
}

// Every pipeline key becomes --key (and --dashed-key), applied after --config.
struct PipelineFlags {
  std::string config_path;
  std::vector<std::pair<std::string, std::string>> overrides;

  void attach(CLI::App* sub, const std::map<std::string, std::string>& aliases = {}) {
    sub->add_option("--config", config_path, "key=value config file")->check(CLI::ExistingFile);
    const auto defaults = PipelineConfig().to_kv(true);
    for (const auto& [key, value] : defaults.entries()) {
      std::string names = "--" + key;
      std::string dashed = key;
      std::replace(dashed.begin(), dashed.end(), '_', '-');
      if (dashed != key) names += ",--" + dashed;
      if (auto it = aliases.find(key); it != aliases.end()) names += "," + it->second;
      const std::string k = key;
      sub->add_option_function<std::string>(
             names, [this, k](const std::string& v) { overrides.emplace_back(k, v); }, "overrides '" + key + "'")
          ->default_str(value);
    }
  }

  PipelineConfig build() const {
    PipelineConfig c = config_path.empty() ? PipelineConfig() : load_pipeline_config(config_path);
    for (const auto& [k, v] : overrides) c.apply(k, v);
    return c;
  }
};

std::vector<std::string> read_bodies(const std::string& path, bool lines) {
  if (!lines) return load_review_csv(path).bodies();
  const auto raw = path == "-" ? text::read_stream(std::cin) : text::read_file(path);
  std::vector<std::string> out;
  for (auto l : text::lines(raw)) {
    utf8::require_valid(l, path);
    out.emplace_back(l);
  }
  return out;
}

template <typename T>
std::vector<T> parse_list(const std::string& csv, T (*one)(std::string_view)) {
  std::vector<T> out;
  for (auto item : text::split(csv, ',')) {
    const auto t = text::trim(item);
    if (!t.empty()) out.push_back(one(t));
  }
  if (out.empty()) fail(ErrorKind::config, "empty list '" + csv + "'");
  return out;
}

std::size_t parse_size(std::string_view s) {
  const auto v = text::parse_int(s);
  if (!v || *v <= 0) fail(ErrorKind::config, "bad size '" + std::string(s) + "'");
  return static_cast<std::size_t>(*v);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tokbench: tokenizer and classifier benchmark for Japanese review sentiment"};
  app.require_subcommand(1);
  std::string format = "text";

  // sample
  auto* sample = app.add_subcommand("sample", "draw a seeded random sample of a review CSV");
  std::string s_in, s_out = "-";
  double s_frac = 0.1;
  std::uint64_t s_seed = 42;
  sample->add_option("--input", s_in)->required();
  sample->add_option("--fraction", s_frac)->capture_default_str();
  sample->add_option("--seed", s_seed)->capture_default_str();
  sample->add_option("--output", s_out)->capture_default_str();

  // train-subword
  auto* tsub = app.add_subcommand("train-subword", "train a unigram subword model on CSV review bodies");
  std::string t_in, t_out = "-";
  bool t_lines = false;
  TrainerConfig tc;
  tsub->add_option("--input", t_in)->required();
  tsub->add_option("--output", t_out)->capture_default_str();
  tsub->add_flag("--lines", t_lines, "input is plain text, one document per line");
  tsub->add_option("--vocab-size,--vocab_size", tc.vocab_size)->capture_default_str();
  tsub->add_option("--max-piece-len,--max_piece_len", tc.max_piece_len)->capture_default_str();
  tsub->add_option("--seed-size,--seed_size", tc.seed_size, "0 = 20 x vocab size");
  tsub->add_option("--shrink-factor,--shrink_factor", tc.shrink_factor)->capture_default_str();
  tsub->add_option("--em-iters-per-round,--em_iters_per_round", tc.em_iters_per_round)->capture_default_str();
  tsub->add_option("--max-sentence-len,--max_sentence_len", tc.max_sentence_len)->capture_default_str();
  tsub->add_option("--min-piece-freq,--min_piece_freq", tc.min_piece_freq)->capture_default_str();
  tsub->add_option("--threads", tc.threads)->capture_default_str();

  // tokenize
  auto* tok = app.add_subcommand("tokenize", "write one tab-separated tokenized document per line");
  std::string k_kind, k_model, k_in, k_out = "-";
  bool k_lines = false;
  tok->add_option("--tokenizer", k_kind)->required()->check(CLI::IsMember({"lattice", "subword"}));
  tok->add_option("--model", k_model, "dictionary TSV (lattice) or subword model")->required();
  tok->add_option("--input", k_in)->required();
  tok->add_option("--output", k_out)->capture_default_str();
  tok->add_flag("--lines", k_lines, "input is plain text, one document per line");

  // fit
  auto* fit = app.add_subcommand("fit", "train tokenizer + TF-IDF + classifier into a model dir");
  PipelineFlags fit_flags;
  std::string fit_model;
  fit->add_option("--model", fit_model, "dictionary (lattice) or pretrained subword model");
  fit_flags.attach(fit);

  // evaluate
  auto* eval = app.add_subcommand("evaluate", "score a model dir on a test CSV");
  std::string e_dir, e_test;
  unsigned e_threads = 1;
  eval->add_option("--model-dir,--model_dir", e_dir)->required();
  eval->add_option("--test", e_test)->required();
  eval->add_option("--threads", e_threads)->capture_default_str();
  eval->add_option("--format", format)->check(CLI::IsMember({"text", "csv", "kv"}))->capture_default_str();

  // gridsearch
  auto* grid = app.add_subcommand("gridsearch", "repeated stratified k-fold grid search over LR C");
  PipelineFlags grid_flags;
  grid_flags.attach(grid, {{"cv_k", "--k"}, {"cv_repeats", "--repeats"}, {"cv_seed", "--seed"}});

  // bench
  auto* bench = app.add_subcommand("bench", "time vectorization per tokenizer and training-set size");
  PipelineFlags bench_flags;
  std::string b_kinds = "lattice,subword", b_sizes = "1000";
  bench->add_option("--tokenizers", b_kinds)->capture_default_str();
  bench->add_option("--sizes", b_sizes)->capture_default_str();
  bench_flags.attach(bench);

  // run
  auto* run = app.add_subcommand("run", "full experiment from a config file");
  PipelineFlags run_flags;
  run_flags.attach(run);
  run->add_option("--format", format)->check(CLI::IsMember({"text", "csv"}))->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? ok : usage;
  }

  try {
    if (*sample) {
      const auto ds = random_sample(load_review_csv(s_in), s_frac, s_seed);
      write_output(s_out, serialize_review_csv(ds));
      std::fprintf(stderr, "sampled %zu records\n", ds.size());
    } else if (*tsub) {
      const auto vocab = train_subword(read_bodies(t_in, t_lines), tc);
      write_output(t_out, serialize_subword(vocab));
      std::fprintf(stderr, "trained %zu pieces\n", vocab.size());
    } else if (*tok) {
      AnyTokenizer tokenizer;
      if (parse_tokenizer_kind(k_kind) == TokenizerKind::lattice) {
        tokenizer = LatticeTokenizer(std::make_shared<const LexDictionary>(load_dictionary_file(k_model)));
      } else {
        tokenizer = SubwordTokenizer(std::make_shared<const SubwordVocab>(load_subword_file(k_model)));
      }
      std::string out;
      for (const auto& body : read_bodies(k_in, k_lines)) {
        const auto toks = tokenizer(body);
        for (std::size_t i = 0; i < toks.size(); ++i) {
          if (i) out.push_back('\t');
          out += text::escape(toks[i]);
        }
        out.push_back('\n');
      }
      write_output(k_out, out);
    } else if (*fit) {
      auto cfg = fit_flags.build();
      if (!fit_model.empty()) {
        (cfg.tokenizer == TokenizerKind::lattice ? cfg.dictionary_path : cfg.subword_model_path) = fit_model;
      }
      const auto o = run_pipeline(cfg);
      std::printf("vectorize elapsed: %s s\n", text::format_fixed(o.report.vectorize_seconds, 2).c_str());
      std::printf("%s", emit_report({o.report}, ReportFormat::text).c_str());
    } else if (*eval) {
      const auto r = evaluate_model_dir(e_dir, e_test, e_threads);
      if (format == "kv") {
        std::printf("%s", serialize_report(r).c_str());
      } else {
        std::printf("%s", emit_report({r}, format == "csv" ? ReportFormat::csv : ReportFormat::text).c_str());
      }
    } else if (*grid) {
      auto cfg = grid_flags.build();
      std::printf("%s", format_gridsearch(run_gridsearch(cfg)).c_str());
    } else if (*bench) {
      const auto cfg = bench_flags.build();
      const auto rows = run_bench(cfg, parse_list<TokenizerKind>(b_kinds, parse_tokenizer_kind),
                                  parse_list<std::size_t>(b_sizes, parse_size));
      std::printf("%s", format_bench(rows).c_str());
    } else if (*run) {
      const auto o = run_pipeline(run_flags.build());
      std::vector<EvalReport> rows{o.report};
      if (o.tuned) rows.push_back(*o.tuned);
      std::printf("%s", emit_report(rows, format == "csv" ? ReportFormat::csv : ReportFormat::text).c_str());
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error (%s): %s\n", to_string(e.kind()), e.what());
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return internal;
  }
  return ok;
}
