// emetree: command-line front end for the parsing pipeline.
//
// Settings resolve as defaults < emetree.json (or --config) < EMETREE_*
// environment < flags. Exit status: 0 ok, 1 runtime failure, 2 usage error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

#include "emetree/pipeline.hpp"

namespace fs = std::filesystem;
using namespace emetree;

namespace {

struct Overrides {
  std::optional<std::string> config_file;
  std::optional<std::size_t> jobs;
  std::optional<int> ftags;
  std::optional<std::size_t> folds;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> min_count;
  std::optional<std::string> lexicon;
  std::optional<std::string> sources;
  std::optional<std::string> corpus;
  std::optional<std::string> out;
};

PipelineConfig load_config(const Overrides& o) {
  PipelineConfig c;
  fs::path file = o.config_file ? fs::path(*o.config_file) : fs::path("emetree.json");
  if (o.config_file && !fs::exists(file)) throw std::runtime_error("config file not found: " + file.string());
  if (fs::exists(file)) c = PipelineConfig::from_json(read_json(file));
  c.apply_env();
  if (o.jobs) c.jobs = *o.jobs;
  if (o.ftags) c.ftags_policy = *o.ftags;
  if (o.folds) c.folds = *o.folds;
  if (o.seed) c.seed = *o.seed;
  if (o.min_count) c.min_char_count = *o.min_count;
  if (o.lexicon) c.abbreviation_lexicon = *o.lexicon;
  if (o.sources) c.sources_map = *o.sources;
  if (o.corpus) c.corpus_dir = *o.corpus;
  if (o.out) c.output_dir = *o.out;
  c.policy();  // validates the level
  c.resolve_paths();
  return c;
}

void require_exists(const fs::path& p) {
  if (!fs::exists(p)) throw std::runtime_error("input not found: " + p.string());
}

// A directory means every .psd in it, in name order.
std::vector<Tree> load_trees(const fs::path& p) {
  require_exists(p);
  if (!fs::is_directory(p)) return read_psd(p);
  std::vector<Tree> out;
  for (const auto& f : list_psd(p)) {
    auto trees = read_psd(f);
    out.insert(out.end(), std::make_move_iterator(trees.begin()), std::make_move_iterator(trees.end()));
  }
  return out;
}

std::vector<std::vector<std::string>> load_sentences(const fs::path& p) {
  require_exists(p);
  std::vector<std::vector<std::string>> out;
  if (p.extension() == ".psd" || fs::is_directory(p)) {
    for (const auto& t : load_trees(p)) out.push_back(tree_words(t));
    return out;
  }
  std::ifstream in(p);
  for (std::string line; std::getline(in, line);) {
    std::istringstream ss(line);
    std::vector<std::string> words;
    for (std::string w; ss >> w;) words.push_back(w);
    if (!words.empty()) out.push_back(std::move(words));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"emetree: constituency parsing toolkit for Early Modern English treebanks"};
  app.fallthrough();
  app.set_version_flag("--version", std::string(EMETREE_VERSION));
  app.require_subcommand(1);

  Overrides o;
  app.add_option("--config", o.config_file, "JSON config file (default: ./emetree.json if present)");
  app.add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);

  // preprocess
  auto* pre = app.add_subcommand("preprocess", "Clean raw PPCEME trees");
  std::string pre_in, pre_out, pre_report;
  pre->add_option("--ftags", o.ftags, "Function-tag policy")->check(CLI::IsMember({0, 10, 31}));
  pre->add_option("--in", pre_in, "Directory of raw .psd files")->required();
  pre->add_option("--out", pre_out, "Output directory")->required();
  pre->add_option("--report", pre_report, "Report JSON path");

  // tokenize
  auto* tok = app.add_subcommand("tokenize", "Normalize, filter and tokenize raw text");
  std::string tok_in, tok_out, tok_census;
  tok->add_option("--in", tok_in, "UTF-8 text, one sentence per line")->required();
  tok->add_option("--out", tok_out, "Tokens, space-separated, one sentence per line")->required();
  tok->add_option("--census", tok_census, "Character census JSON path");
  tok->add_option("--min-count", o.min_count, "Drop lines holding characters rarer than this");
  tok->add_option("--lexicon", o.lexicon, "Tokenizer lexicon file");

  // split
  auto* split = app.add_subcommand("split", "Generate period-balanced cross-validation folds");
  std::string split_out;
  double tolerance = 0.02;
  split->add_option("--corpus", o.corpus, "Directory of preprocessed .psd files");
  split->add_option("--folds", o.folds, "Number of folds")->check(CLI::PositiveNumber);
  split->add_option("--seed", o.seed, "Random seed");
  split->add_option("--sources", o.sources, "File source/period overrides JSON");
  split->add_option("--tolerance", tolerance, "Section share tolerance for validation (fraction)");
  split->add_option("--out", split_out, "Plan JSON path")->required();

  // vocab
  auto* vocab = app.add_subcommand("vocab", "Report span-label vocabularies");
  std::string vocab_train, vocab_dev, vocab_out;
  bool no_collapse = false;
  vocab->add_option("--train", vocab_train, "Training trees (.psd file or directory)")->required();
  vocab->add_option("--dev", vocab_dev, "Dev trees (.psd file or directory)")->required();
  vocab->add_flag("--no-collapse", no_collapse, "List members without unary collapsing");
  vocab->add_option("--out", vocab_out, "Report JSON path (default: stdout)");

  // train
  auto* train = app.add_subcommand("train", "Train the count scorer and POS baseline");
  std::string train_in, train_out;
  train->add_option("--train", train_in, "Training trees (.psd file or directory)")->required();
  train->add_option("--out", train_out, "Model file")->required();

  // decode
  auto* dec = app.add_subcommand("decode", "Parse tokenized sentences");
  std::string dec_model, dec_in, dec_out;
  dec->add_option("--model", dec_model, "Model file")->required();
  dec->add_option("--in", dec_in, "Token file, or trees whose yields are parsed")->required();
  dec->add_option("--out", dec_out, "Output .psd")->required();

  // eval
  auto* ev = app.add_subcommand("eval", "Score predicted trees against gold");
  std::string ev_gold, ev_pred, ev_report;
  bool ev_ftags = false, ev_pos = false, ev_skip_root = false, ev_text = false;
  ev->add_option("--gold", ev_gold, "Gold trees")->required();
  ev->add_option("--pred", ev_pred, "Predicted trees")->required();
  ev->add_option("--report", ev_report, "Report JSON path");
  ev->add_flag("--ftags", ev_ftags, "Include function-tag scores");
  ev->add_flag("--pos", ev_pos, "Include POS scores");
  ev->add_flag("--skip-root", ev_skip_root, "Ignore the root bracket");
  ev->add_flag("--text", ev_text, "Print an evalb-style summary to stdout");

  // pipeline
  auto* pipe = app.add_subcommand("pipeline", "Run every stage per fold and summarise");
  pipe->add_option("--corpus", o.corpus, "Directory of raw .psd files");
  pipe->add_option("--out", o.out, "Output directory");
  pipe->add_option("--ftags", o.ftags, "Function-tag policy")->check(CLI::IsMember({0, 10, 31}));
  pipe->add_option("--folds", o.folds, "Number of folds")->check(CLI::PositiveNumber);
  pipe->add_option("--seed", o.seed, "Random seed");
  pipe->add_option("--sources", o.sources, "File source/period overrides JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    const PipelineConfig config = load_config(o);
    OutputGuard guard;

    if (*pre) {
      require_exists(pre_in);
      if (!fs::exists(pre_out)) guard.add(pre_out);
      const auto report = preprocess_dir(pre_in, pre_out, config.policy(), config.empty_lexicon(), config.jobs);
      const auto j = stamped(to_json(report), config, "preprocess");
      if (!pre_report.empty())
        write_json(guard.add(pre_report), j);
      else
        std::cout << dump_json(j);
    } else if (*tok) {
      require_exists(tok_in);
      std::ifstream in(tok_in, std::ios::binary);
      const auto filtered = normalize_and_filter(in, config.min_char_count);
      const auto lexicon = config.tokenizer_lexicon();
      std::ofstream out(guard.add(tok_out), std::ios::binary);
      if (!out) throw std::runtime_error("cannot write " + tok_out);
      for (const auto& line : filtered.kept) {
        const auto sentence = tokenize(line.text, lexicon, line.line);
        for (std::size_t i = 0; i < sentence.tokens.size(); ++i) out << (i ? " " : "") << sentence.tokens[i];
        out << '\n';
      }
      out.close();
      if (!tok_census.empty()) {
        auto j = stamped(to_json(filtered.census), config, "tokenize");
        j["kept_lines"] = filtered.kept.size();
        j["dropped_lines"] = filtered.dropped;
        j["min_char_count"] = config.min_char_count;
        write_json(guard.add(tok_census), j);
      }
      std::cerr << "kept " << filtered.kept.size() << " lines, dropped " << filtered.dropped << '\n';
    } else if (*split) {
      if (config.corpus_dir.empty()) throw std::runtime_error("split needs --corpus");
      require_exists(config.corpus_dir);
      const auto corpus = read_corpus(config.corpus_dir, config.jobs);
      const auto overrides = config.sources_map.empty() ? FileOverrides{} : FileOverrides::load(config.sources_map);
      const auto files = corpus_files(corpus, overrides);
      const auto plan = generate_splits(files, config.folds, {}, config.seed);
      auto j = stamped(to_json(plan), config, "split");
      const auto validation = validate_splits(plan, files, tolerance);
      j["validation"] = to_json(validation);
      write_json(guard.add(split_out), j);
      for (const auto& w : plan.warnings) std::cerr << "warning: " << w << '\n';
      if (!validation.passed()) std::cerr << "warning: plan fails some balance checks; see validation in " << split_out << '\n';
    } else if (*vocab) {
      const auto report = build_vocab(load_trees(vocab_train), load_trees(vocab_dev), !no_collapse);
      const auto j = stamped(to_json(report), config, "vocab");
      if (vocab_out.empty())
        std::cout << dump_json(j);
      else
        write_json(guard.add(vocab_out), j);
    } else if (*train) {
      Model::train(load_trees(train_in)).save(guard.add(train_out));
    } else if (*dec) {
      require_exists(dec_model);
      const auto model = Model::load(dec_model);
      const auto sentences = load_sentences(dec_in);
      std::vector<Tree> trees(sentences.size());
      parallel_for(sentences.size(), config.jobs, [&](std::size_t i) { trees[i] = parse_sentence(model, sentences[i]); });
      write_psd(guard.add(dec_out), trees);
    } else if (*ev) {
      if (ev_report.empty() && !ev_text) throw CLI::ValidationError("eval", "give --report, --text, or both");
      EvalOptions options;
      options.skip_root = ev_skip_root;
      const auto report = evaluate(load_trees(ev_gold), load_trees(ev_pred), options);
      if (!ev_report.empty()) write_json(guard.add(ev_report), stamped(to_json(report, ev_ftags, ev_pos), config, "eval"));
      if (ev_text) std::cout << format_summary(report);
    } else if (*pipe) {
      const auto summary = run_pipeline(config);
      const auto& s = summary.at("summary");
      for (const char* key : {"bracket.f1", "pos.accuracy"})
        if (s.contains(key))
          std::cout << key << ": " << s[key]["mean"].get<double>() << " +/- " << s[key]["sd"].get<double>() << '\n';
      std::cout << "summary written to " << (config.output_dir / "summary.json").string() << '\n';
    }
    guard.commit();
  } catch (const CLI::ValidationError& e) {
    std::cerr << "emetree: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "emetree: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
