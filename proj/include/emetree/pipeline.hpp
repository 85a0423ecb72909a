// Stage wiring behind the `emetree` command line: configuration, JSON
// artifacts, model files and the end-to-end cross-validation run.

#ifndef EMETREE_PIPELINE_HPP
#define EMETREE_PIPELINE_HPP

#include <algorithm>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "emetree/count_scorer.hpp"
#include "emetree/evaluate.hpp"
#include "emetree/labelspace.hpp"
#include "emetree/preprocess.hpp"
#include "emetree/splitgen.hpp"
#include "emetree/textnorm.hpp"
#include "emetree/tree.hpp"

namespace emetree {

namespace fs = std::filesystem;
using json = nlohmann::json;

struct PipelineConfig {
  fs::path corpus_dir;
  fs::path output_dir;
  int ftags_policy = 31;
  std::size_t folds = 8;
  std::uint64_t seed = 0;
  std::uint64_t min_char_count = 200;
  std::vector<std::string> empty_element_lexicon;  // extra exact forms
  fs::path abbreviation_lexicon;                   // tokenizer lexicon file
  fs::path sources_map;                            // FileOverrides JSON
  std::size_t jobs = 1;

  static PipelineConfig from_json(const json& j);
  json to_json() const;
  /// Reads EMETREE_CORPUS_DIR, EMETREE_OUTPUT_DIR, EMETREE_FTAGS, EMETREE_FOLDS,
  /// EMETREE_SEED, EMETREE_MIN_CHAR_COUNT, EMETREE_JOBS, EMETREE_ABBREVIATIONS,
  /// EMETREE_SOURCES.
  void apply_env();
  /// Makes every non-empty path absolute.
  void resolve_paths();

  FtagPolicy policy() const { return FtagPolicy::from_level(ftags_policy); }
  EmptyElementLexicon empty_lexicon() const;
  TokenizerLexicon tokenizer_lexicon() const;
};

/// FNV-1a over the canonical config JSON, as 16 hex digits.
std::string config_hash(const PipelineConfig& config);

/// {tool, version, stage, config_hash, seed}.
json manifest(const PipelineConfig& config, const std::string& stage);
/// `artifact` with a "manifest" member added.
json stamped(json artifact, const PipelineConfig& config, const std::string& stage);

/// Pretty JSON with sorted keys and doubles rounded to 12 significant digits.
std::string dump_json(const json& j);
void write_json(const fs::path& path, const json& j);
json read_json(const fs::path& path);

json to_json(const PreprocessReport& r);
json to_json(const VocabReport& r);
json to_json(const SplitPlan& p);
json to_json(const SplitValidation& v);
json to_json(const EvalReport& r, bool with_ftags = true, bool with_pos = true);
json to_json(const CvSummary& s);
json to_json(const CharCensus& c);
SplitPlan split_plan_from_json(const json& j);

/// Trained count scorer plus POS lexicon, stored as CBOR.
struct Model {
  CountScorer scorer;
  PosLexicon lexicon;

  static Model train(const std::vector<Tree>& trees);
  void save(const fs::path& path) const;
  static Model load(const fs::path& path);

  bool operator==(const Model&) const = default;
};

/// Decodes one tokenized sentence with predicted tags; parens become -LRB-/-RRB-.
Tree parse_sentence(const Model& model, const std::vector<std::string>& words);

// Corpus files ---------------------------------------------------------------

std::vector<fs::path> list_psd(const fs::path& dir);
std::vector<Tree> read_psd(const fs::path& path);
/// One compact tree per line.
void write_psd(const fs::path& path, const std::vector<Tree>& trees);
std::string read_text(const fs::path& path);

/// Preprocesses every .psd in `in` into `out` under the same name.
PreprocessReport preprocess_dir(const fs::path& in, const fs::path& out, const FtagPolicy& policy,
                                const EmptyElementLexicon& lexicon, std::size_t jobs = 1);

/// Per-file source and period overrides for names that do not follow the
/// `<source>-e<N>` convention.
struct FileOverrides {
  std::map<std::string, std::string> source;
  std::map<std::string, Period> period;

  /// JSON object keyed by file id; values are a source id string or
  /// {"source": ..., "period": "e1"|"e2"|"e3"} with either key optional.
  static FileOverrides load(const fs::path& path);
};

/// Token counts from tree yields; period and source from file names unless
/// overridden. Throws std::runtime_error when no period can be inferred.
std::vector<CorpusFile> corpus_files(const std::map<std::string, std::vector<Tree>>& corpus,
                                     const FileOverrides& overrides = {});
/// File stem -> trees, for every .psd in `dir`.
std::map<std::string, std::vector<Tree>> read_corpus(const fs::path& dir, std::size_t jobs = 1);

/// Runs every stage per fold under `config.output_dir` and returns the
/// cross-validation summary it also writes to `summary.json`.
json run_pipeline(const PipelineConfig& config);

/// Removes registered outputs on destruction unless committed.
class OutputGuard {
public:
  OutputGuard() = default;
  OutputGuard(const OutputGuard&) = delete;
  OutputGuard& operator=(const OutputGuard&) = delete;
  ~OutputGuard();

  const fs::path& add(const fs::path& p);
  void commit() { committed_ = true; }

private:
  std::vector<fs::path> paths_;
  bool committed_ = false;
};

/// Runs fn(i) for i in [0, n) on up to `jobs` threads.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t jobs, Fn&& fn) {
  jobs = std::max<std::size_t>(1, std::min(jobs, n));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(jobs);
  std::vector<std::thread> workers;
  for (std::size_t w = 0; w < jobs; ++w) {
    workers.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += jobs) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : workers) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace emetree

#endif  // EMETREE_PIPELINE_HPP
