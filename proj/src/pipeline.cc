#include "emetree/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <unicode/utf8.h>

#include "emetree/decoder.hpp"

#ifndef EMETREE_VERSION
#define EMETREE_VERSION "0.0.0"
#endif

namespace emetree {

// ---------------------------------------------------------------------------
// Config

PipelineConfig PipelineConfig::from_json(const json& j) {
  PipelineConfig c;
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  static const std::set<std::string> known{"corpus_dir",     "output_dir", "ftags_policy",
                                           "folds",          "seed",       "min_char_count",
                                           "empty_element_lexicon",        "abbreviation_lexicon",
                                           "sources_map",    "jobs"};
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) throw std::invalid_argument("unknown config key '" + key + "'");
  c.corpus_dir = j.value("corpus_dir", std::string());
  c.output_dir = j.value("output_dir", std::string());
  c.ftags_policy = j.value("ftags_policy", c.ftags_policy);
  c.folds = j.value("folds", c.folds);
  c.seed = j.value("seed", c.seed);
  c.min_char_count = j.value("min_char_count", c.min_char_count);
  c.empty_element_lexicon = j.value("empty_element_lexicon", c.empty_element_lexicon);
  c.abbreviation_lexicon = j.value("abbreviation_lexicon", std::string());
  c.sources_map = j.value("sources_map", std::string());
  c.jobs = j.value("jobs", c.jobs);
  FtagPolicy::from_level(c.ftags_policy);
  return c;
}

json PipelineConfig::to_json() const {
  return {{"corpus_dir", corpus_dir.string()},
          {"output_dir", output_dir.string()},
          {"ftags_policy", ftags_policy},
          {"folds", folds},
          {"seed", seed},
          {"min_char_count", min_char_count},
          {"empty_element_lexicon", empty_element_lexicon},
          {"abbreviation_lexicon", abbreviation_lexicon.string()},
          {"sources_map", sources_map.string()},
          {"jobs", jobs}};
}

namespace {

std::optional<std::string> env(const char* name) {
  const char* v = std::getenv(name);
  if (!v || !*v) return std::nullopt;
  return std::string(v);
}

std::uint64_t env_uint(const char* name, const std::string& v) {
  try {
    std::size_t used = 0;
    auto x = std::stoull(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string(name) + " must be a non-negative integer, got '" + v + "'");
  }
}

}  // namespace

void PipelineConfig::apply_env() {
  if (auto v = env("EMETREE_CORPUS_DIR")) corpus_dir = *v;
  if (auto v = env("EMETREE_OUTPUT_DIR")) output_dir = *v;
  if (auto v = env("EMETREE_FTAGS")) {
    ftags_policy = static_cast<int>(env_uint("EMETREE_FTAGS", *v));
    FtagPolicy::from_level(ftags_policy);
  }
  if (auto v = env("EMETREE_FOLDS")) folds = env_uint("EMETREE_FOLDS", *v);
  if (auto v = env("EMETREE_SEED")) seed = env_uint("EMETREE_SEED", *v);
  if (auto v = env("EMETREE_MIN_CHAR_COUNT")) min_char_count = env_uint("EMETREE_MIN_CHAR_COUNT", *v);
  if (auto v = env("EMETREE_JOBS")) jobs = env_uint("EMETREE_JOBS", *v);
  if (auto v = env("EMETREE_ABBREVIATIONS")) abbreviation_lexicon = *v;
  if (auto v = env("EMETREE_SOURCES")) sources_map = *v;
}

void PipelineConfig::resolve_paths() {
  for (fs::path* p : {&corpus_dir, &output_dir, &abbreviation_lexicon, &sources_map})
    if (!p->empty()) *p = fs::absolute(*p).lexically_normal();
}

EmptyElementLexicon PipelineConfig::empty_lexicon() const {
  EmptyElementLexicon lex;
  lex.exact.insert(empty_element_lexicon.begin(), empty_element_lexicon.end());
  return lex;
}

TokenizerLexicon PipelineConfig::tokenizer_lexicon() const {
  if (abbreviation_lexicon.empty()) return TokenizerLexicon::defaults();
  std::ifstream in(abbreviation_lexicon);
  if (!in) throw std::runtime_error("cannot open lexicon " + abbreviation_lexicon.string());
  return TokenizerLexicon::load(in);
}

std::string config_hash(const PipelineConfig& config) {
  json j = config.to_json();
  j.erase("jobs");  // worker count never changes results
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : j.dump()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json manifest(const PipelineConfig& config, const std::string& stage) {
  return {{"tool", "emetree"},
          {"version", EMETREE_VERSION},
          {"stage", stage},
          {"config_hash", config_hash(config)},
          {"seed", config.seed}};
}

json stamped(json artifact, const PipelineConfig& config, const std::string& stage) {
  artifact["manifest"] = manifest(config, stage);
  return artifact;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

void round_floats(json& j) {
  if (j.is_number_float()) {
    const double x = j.get<double>();
    if (!std::isfinite(x)) {
      j = nullptr;
      return;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    j = std::strtod(buf, nullptr);
  } else if (j.is_structured()) {
    for (auto& v : j) round_floats(v);
  }
}

json counts_json(const PRCounts& c) {
  return {{"matched", c.matched},
          {"gold", c.gold},
          {"predicted", c.predicted},
          {"precision", c.precision()},
          {"recall", c.recall()},
          {"f1", c.f1()}};
}

json tag_scores(const std::map<std::string, TagScore>& m) {
  json out = json::object();
  for (const auto& [tag, s] : m)
    out[tag] = {{"share", s.share}, {"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}, {"gold", s.gold}};
  return out;
}

json section_json(const VocabSection& s) {
  return {{"size_with_collapse", s.size_with_collapse},
          {"size_without_collapse", s.size_without_collapse},
          {"members", s.members}};
}

}  // namespace

std::string dump_json(const json& j) {
  json copy = j;
  round_floats(copy);
  return copy.dump(2) + "\n";
}

void write_json(const fs::path& path, const json& j) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << dump_json(j);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

json read_json(const fs::path& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

json to_json(const PreprocessReport& r) {
  return {{"trees_in", r.trees_in},
          {"trees_out", r.trees_out},
          {"trees_removed_code", r.trees_removed_code},
          {"trees_removed_meta", r.trees_removed_meta},
          {"trees_removed_break", r.trees_removed_break},
          {"trees_removed_empty", r.trees_removed_empty},
          {"labels_rewritten", r.labels_rewritten},
          {"ftags_dropped", r.ftags_dropped}};
}

json to_json(const VocabReport& r) {
  return {{"collapse", r.collapse},
          {"train", section_json(r.train)},
          {"dev", section_json(r.dev)},
          {"both", section_json(r.both)},
          {"oov_labels", r.oov_labels}};
}

json to_json(const SplitPlan& p) {
  json folds = json::array();
  for (std::size_t k = 0; k < p.folds.size(); ++k)
    folds.push_back({{"train", p.files_in(k, Section::train)},
                     {"dev", p.files_in(k, Section::dev)},
                     {"test", p.files_in(k, Section::test)}});
  return {{"folds", folds},
          {"seed", p.seed},
          {"targets", {{"train", p.targets.train}, {"dev", p.targets.dev}, {"test", p.targets.test}}},
          {"warnings", p.warnings}};
}

SplitPlan split_plan_from_json(const json& j) {
  SplitPlan p;
  p.seed = j.value("seed", std::uint64_t{0});
  if (j.contains("targets")) {
    const auto& t = j.at("targets");
    p.targets = {t.at("train").get<double>(), t.at("dev").get<double>(), t.at("test").get<double>()};
  }
  p.warnings = j.value("warnings", std::vector<std::string>{});
  for (const auto& fold : j.at("folds")) {
    std::map<std::string, Section> assignment;
    for (Section s : {Section::train, Section::dev, Section::test}) {
      const std::string key(to_string(s));
      if (!fold.contains(key)) continue;
      for (const auto& id : fold.at(key)) {
        if (!assignment.emplace(id.get<std::string>(), s).second)
          throw std::invalid_argument("file '" + id.get<std::string>() + "' assigned twice in one fold");
      }
    }
    p.folds.push_back(std::move(assignment));
  }
  return p;
}

json to_json(const SplitValidation& v) {
  json checks = json::array();
  for (const auto& c : v.checks) {
    json e = {{"name", c.name}, {"passed", c.passed}, {"measured", c.measured}, {"expected", c.expected}};
    if (c.fold) e["fold"] = *c.fold;
    if (!c.detail.empty()) e["detail"] = c.detail;
    checks.push_back(std::move(e));
  }
  return {{"passed", v.passed()}, {"sources", v.sources}, {"coverage_by_fold", v.coverage_by_fold}, {"checks", checks}};
}

json to_json(const EvalReport& r, bool with_ftags, bool with_pos) {
  json j = {{"sentences", r.sentences},
            {"brackets", counts_json(r.brackets)},
            {"word_mismatches", r.brackets.word_mismatches},
            {"bracket_precision", r.bracket_precision},
            {"bracket_recall", r.bracket_recall},
            {"bracket_f1", r.bracket_f1}};
  if (with_pos) {
    j["pos_accuracy"] = r.pos_accuracy;
    j["pos"] = tag_scores(r.pos);
  }
  if (with_ftags) {
    j["ftags"] = tag_scores(r.ftags);
    j["ftags_total"] = counts_json(r.ftags_total);
  }
  return j;
}

json to_json(const CvSummary& s) {
  json out = json::object();
  for (const auto& [metric, m] : s) out[metric] = {{"mean", m.mean}, {"sd", m.sd}, {"folds", m.folds}};
  return out;
}

json to_json(const CharCensus& c) {
  json chars = json::array();
  for (const auto& [cp, n] : c.counts) {
    char hex[16];
    std::snprintf(hex, sizeof hex, "U+%04X", static_cast<unsigned>(cp));
    uint8_t buf[U8_MAX_LENGTH];
    int32_t len = 0;
    U8_APPEND_UNSAFE(buf, len, static_cast<UChar32>(cp));
    const std::string utf8(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(len));
    chars.push_back({{"code_point", hex}, {"char", utf8}, {"count", n}});
  }
  return {{"total_lines", c.total_lines}, {"total_chars", c.total_chars()}, {"chars", chars}};
}

// ---------------------------------------------------------------------------
// Model

Model Model::train(const std::vector<Tree>& trees) { return {CountScorer::train(trees), PosLexicon::build(trees)}; }

void Model::save(const fs::path& path) const {
  json contexts = json::array();
  for (const auto& [ctx, row] : scorer.counts())
    contexts.push_back({ctx.length_bucket, ctx.first_tag, ctx.last_tag, ctx.whole_sentence, row});
  json j = {{"format", "emetree-count-model"},
            {"version", 1},
            {"labels", scorer.labels()},
            {"contexts", contexts},
            {"lexicon", {{"counts", lexicon.counts}, {"default_tag", lexicon.default_tag}}}};
  const auto bytes = json::to_cbor(j);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

Model Model::load(const fs::path& path) {
  const std::string raw = read_text(path);
  json j;
  try {
    j = json::from_cbor(raw);
  } catch (const json::exception& e) {
    throw std::runtime_error(path.string() + ": not a model file (" + e.what() + ")");
  }
  if (j.value("format", std::string()) != "emetree-count-model" || j.value("version", 0) != 1)
    throw std::runtime_error(path.string() + ": unsupported model format");
  std::map<SpanContext, std::vector<std::uint64_t>> counts;
  for (const auto& c : j.at("contexts"))
    counts[{c.at(0).get<unsigned>(), c.at(1).get<std::string>(), c.at(2).get<std::string>(), c.at(3).get<bool>()}] =
        c.at(4).get<std::vector<std::uint64_t>>();
  Model m;
  m.scorer = CountScorer(j.at("labels").get<std::vector<std::string>>(), std::move(counts));
  m.lexicon.counts = j.at("lexicon").at("counts").get<decltype(m.lexicon.counts)>();
  m.lexicon.default_tag = j.at("lexicon").at("default_tag").get<std::string>();
  return m;
}

namespace {

std::string escape_word(const std::string& w) {
  std::string out;
  for (char c : w) {
    if (c == '(')
      out += "-LRB-";
    else if (c == ')')
      out += "-RRB-";
    else
      out += c;
  }
  return out;
}

}  // namespace

Tree parse_sentence(const Model& model, const std::vector<std::string>& words) {
  DecodeOptions options;
  options.words.reserve(words.size());
  for (const auto& w : words) options.words.push_back(escape_word(w));
  options.tags = tag_pos_baseline(model.lexicon, options.words);
  return decode(model.scorer.score(options.tags), options).tree;
}

// ---------------------------------------------------------------------------
// Corpus files

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<fs::path> list_psd(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw std::runtime_error("not a directory: " + dir.string());
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".psd") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Tree> read_psd(const fs::path& path) {
  try {
    return parse_trees(read_text(path));
  } catch (const SyntaxError& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

void write_psd(const fs::path& path, const std::vector<Tree>& trees) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (const auto& t : trees) out << render_tree(t) << '\n';
}

PreprocessReport preprocess_dir(const fs::path& in, const fs::path& out, const FtagPolicy& policy,
                                const EmptyElementLexicon& lexicon, std::size_t jobs) {
  const auto files = list_psd(in);
  std::vector<PreprocessReport> reports(files.size());
  fs::create_directories(out);
  parallel_for(files.size(), jobs, [&](std::size_t i) {
    auto trees = preprocess(read_psd(files[i]), policy, reports[i], lexicon);
    write_psd(out / files[i].filename(), trees);
  });
  PreprocessReport total;
  for (const auto& r : reports) total.merge(r);
  return total;
}

FileOverrides FileOverrides::load(const fs::path& path) {
  FileOverrides o;
  const json j = read_json(path);
  if (!j.is_object()) throw std::runtime_error(path.string() + ": expected an object keyed by file id");
  for (const auto& [id, v] : j.items()) {
    if (v.is_string()) {
      o.source[id] = v.get<std::string>();
      continue;
    }
    if (v.contains("source")) o.source[id] = v.at("source").get<std::string>();
    if (v.contains("period")) o.period[id] = parse_period(v.at("period").get<std::string>());
  }
  return o;
}

std::vector<CorpusFile> corpus_files(const std::map<std::string, std::vector<Tree>>& corpus,
                                     const FileOverrides& overrides) {
  std::vector<CorpusFile> out;
  for (const auto& [id, trees] : corpus) {
    CorpusFile f;
    f.file_id = id;
    auto p = overrides.period.count(id) ? std::optional(overrides.period.at(id)) : period_from_name(id);
    if (!p) throw std::runtime_error("cannot infer period (e1/e2/e3) from file name '" + id + "'");
    f.period = *p;
    f.source_id = overrides.source.count(id) ? overrides.source.at(id) : source_from_name(id);
    for (const auto& t : trees) f.token_count += tree_words(t).size();
    out.push_back(std::move(f));
  }
  return out;
}

std::map<std::string, std::vector<Tree>> read_corpus(const fs::path& dir, std::size_t jobs) {
  const auto files = list_psd(dir);
  std::vector<std::vector<Tree>> trees(files.size());
  parallel_for(files.size(), jobs, [&](std::size_t i) { trees[i] = read_psd(files[i]); });
  std::map<std::string, std::vector<Tree>> out;
  for (std::size_t i = 0; i < files.size(); ++i) out[files[i].stem().string()] = std::move(trees[i]);
  return out;
}

// ---------------------------------------------------------------------------
// Output cleanup

OutputGuard::~OutputGuard() {
  if (committed_) return;
  std::error_code ec;
  for (auto it = paths_.rbegin(); it != paths_.rend(); ++it) fs::remove_all(*it, ec);
}

const fs::path& OutputGuard::add(const fs::path& p) {
  paths_.push_back(p);
  return paths_.back();
}

// ---------------------------------------------------------------------------
// Pipeline

namespace {

std::vector<Tree> gather(const std::map<std::string, std::vector<Tree>>& corpus, const std::vector<std::string>& ids) {
  std::vector<Tree> out;
  for (const auto& id : ids) {
    const auto& trees = corpus.at(id);
    out.insert(out.end(), trees.begin(), trees.end());
  }
  return out;
}

// Output trees carry the gold id so paired files stay aligned by eye.
std::vector<Tree> decode_all(const Model& model, const std::vector<Tree>& gold, std::size_t jobs) {
  std::vector<Tree> pred(gold.size());
  parallel_for(gold.size(), jobs, [&](std::size_t i) {
    pred[i] = parse_sentence(model, tree_words(gold[i]));
    pred[i].id = gold[i].id;
  });
  return pred;
}

}  // namespace

json run_pipeline(const PipelineConfig& config) {
  if (config.corpus_dir.empty() || config.output_dir.empty())
    throw std::invalid_argument("pipeline needs both corpus_dir and output_dir");
  if (config.folds < 2) throw std::invalid_argument("pipeline needs at least 2 folds to summarise");
  if (!fs::is_directory(config.corpus_dir)) throw std::runtime_error("corpus directory not found: " + config.corpus_dir.string());

  const fs::path out = config.output_dir;
  OutputGuard guard;
  if (!fs::exists(out)) guard.add(out);
  fs::create_directories(out);

  const fs::path pre_dir = out / "preprocessed";
  guard.add(pre_dir);
  const auto pre = preprocess_dir(config.corpus_dir, pre_dir, config.policy(), config.empty_lexicon(), config.jobs);
  write_json(guard.add(out / "preprocess.json"), stamped(to_json(pre), config, "preprocess"));

  const auto corpus = read_corpus(pre_dir, config.jobs);
  const auto overrides = config.sources_map.empty() ? FileOverrides{} : FileOverrides::load(config.sources_map);
  const auto files = corpus_files(corpus, overrides);
  const auto plan = generate_splits(files, config.folds, {}, config.seed);
  const auto validation = validate_splits(plan, files, 0.02);
  json split = stamped(to_json(plan), config, "split");
  split["validation"] = to_json(validation);
  write_json(guard.add(out / "split.json"), split);

  std::vector<EvalReport> reports;
  json folds = json::array();
  for (std::size_t k = 0; k < plan.folds.size(); ++k) {
    const fs::path dir = guard.add(out / ("fold-" + std::to_string(k + 1)));
    const auto train = gather(corpus, plan.files_in(k, Section::train));
    const auto dev = gather(corpus, plan.files_in(k, Section::dev));
    if (train.empty()) throw std::runtime_error("fold " + std::to_string(k + 1) + " has no training trees");

    const auto vocab = build_vocab(train, dev, true);
    write_json(dir / "vocab.json", stamped(to_json(vocab), config, "vocab"));

    const auto model = Model::train(train);
    model.save(dir / "model.bin");

    const auto pred = decode_all(model, dev, config.jobs);
    write_psd(dir / "dev.gold.psd", dev);
    write_psd(dir / "dev.pred.psd", pred);

    const auto report = evaluate(dev, pred);
    write_json(dir / "eval.json", stamped(to_json(report), config, "eval"));
    folds.push_back({{"fold", k + 1},
                     {"sentences", report.sentences},
                     {"bracket_f1", report.bracket_f1},
                     {"pos_accuracy", report.pos_accuracy}});
    if (report.sentences > 0) reports.push_back(report);
  }
  if (reports.size() < 2) throw std::runtime_error("fewer than two folds had dev sentences; nothing to summarise");

  json summary = {{"manifest", manifest(config, "pipeline")},
                  {"folds", folds},
                  {"summary", to_json(aggregate_cv(reports))}};
  write_json(guard.add(out / "summary.json"), summary);
  guard.commit();
  return summary;
}

}  // namespace emetree
