// Bracket, function-tag and POS scoring.
//
// Bracket scoring keeps every word (no punctuation deletion), compares
// (start, end, category) with function tags ignored, and expands collapsed
// labels first. Function tags are scored only on bracket-matched node
// pairs, one count per (node, tag).

#ifndef EMETREE_EVALUATE_HPP
#define EMETREE_EVALUATE_HPP

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "emetree/tree.hpp"

namespace emetree {

/// Thrown when gold and predicted yields differ in length.
class YieldMismatch : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct PRCounts {
  std::size_t matched = 0;
  std::size_t gold = 0;
  std::size_t predicted = 0;

  double precision() const;  // percentages
  double recall() const;
  double f1() const;

  PRCounts& operator+=(const PRCounts& o);
  bool operator==(const PRCounts&) const = default;
};

/// Harmonic mean of two percentages; 0 when both are 0.
double f1_score(double precision, double recall);

struct BracketCounts : PRCounts {
  std::size_t word_mismatches = 0;  // case-sensitive word differences, reported only
};

struct EvalOptions {
  bool skip_root = false;
};

BracketCounts score_brackets(const Tree& gold, const Tree& pred, const EvalOptions& options = {});

/// Per function tag counts over bracket-matched node pairs.
std::map<std::string, PRCounts> score_function_tags(const Tree& gold, const Tree& pred,
                                                    const EvalOptions& options = {});

struct PosCounts {
  std::size_t correct = 0;
  std::size_t total = 0;
  std::map<std::string, PRCounts> per_tag;

  PosCounts& operator+=(const PosCounts& o);
};

PosCounts score_pos(const Tree& gold, const Tree& pred);
PosCounts score_pos(std::span<const std::string> gold_tags, std::span<const std::string> pred_tags);

struct TagScore {
  double share = 0.0;  // percentage of gold tokens (or gold tags for ftags)
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t gold = 0;
};

struct EvalReport {
  std::size_t sentences = 0;
  BracketCounts brackets;
  double bracket_precision = 0.0;
  double bracket_recall = 0.0;
  double bracket_f1 = 0.0;
  double pos_accuracy = 0.0;
  std::map<std::string, TagScore> pos;
  std::map<std::string, TagScore> ftags;
  PRCounts ftags_total;
};

/// Scores a corpus pairwise and fills the derived percentages.
EvalReport evaluate(const std::vector<Tree>& gold, const std::vector<Tree>& pred, const EvalOptions& options = {});

/// Flat metric map, e.g. "bracket.f1", "pos.accuracy", "ftag.SBJ.f1".
std::map<std::string, double> report_metrics(const EvalReport& report);

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation (n - 1)
  std::size_t folds = 0;
};

using CvSummary = std::map<std::string, MeanSd>;

/// Throws std::invalid_argument for fewer than two values.
MeanSd mean_sd(std::span<const double> values);

/// Macro average over folds. A metric missing from some folds is summarised
/// over the folds that have it, and skipped if fewer than two do.
CvSummary aggregate_cv(const std::vector<EvalReport>& reports);

/// evalb-style plain-text summary.
std::string format_summary(const EvalReport& report);

}  // namespace emetree

#endif  // EMETREE_EVALUATE_HPP
