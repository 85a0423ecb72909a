// Exact CKY decoding over span-factored scores.
//
// A tree's score is the sum of s(i, j, l) over its labeled spans. The decoder
// searches binary bracketings in which any non-root span may take the NULL
// label (no bracket in the output), so n-ary and unary structure is
// expressible through NULL spans and collapsed `A::B` labels.

#ifndef EMETREE_DECODER_HPP
#define EMETREE_DECODER_HPP

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "emetree/tree.hpp"

namespace emetree {

/// Scores for every span (i, j), 0 <= i < j <= n, and every label. Label 0 is
/// always NULL.
class SpanScoreTable {
public:
  static constexpr std::size_t null_label = 0;
  static constexpr std::string_view null_surface = "<null>";

  SpanScoreTable() = default;
  /// `labels` lists the non-NULL vocabulary; NULL is prepended.
  SpanScoreTable(std::size_t n, const std::vector<std::string>& labels, double fill = 0.0);

  std::size_t length() const { return n_; }
  std::size_t num_labels() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<std::size_t> label_index(std::string_view surface) const;

  double& at(std::size_t i, std::size_t j, std::size_t label) { return scores_[offset(i, j) + label]; }
  double at(std::size_t i, std::size_t j, std::size_t label) const { return scores_[offset(i, j) + label]; }
  std::span<const double> cell(std::size_t i, std::size_t j) const {
    return {scores_.data() + offset(i, j), labels_.size()};
  }

  /// Highest-scoring label for a span; ties go to the lowest index.
  std::size_t best_label(std::size_t i, std::size_t j, bool allow_null = true) const;

  /// Dense binary form: magic, n, |labels|, length-prefixed label strings,
  /// then little-endian float64 scores for i ascending, j ascending (j > i),
  /// label ascending.
  void write(std::ostream& out) const;
  static SpanScoreTable read(std::istream& in);

  bool operator==(const SpanScoreTable&) const = default;

private:
  std::size_t offset(std::size_t i, std::size_t j) const { return (i * (n_ + 1) + j) * labels_.size(); }

  std::size_t n_ = 0;
  std::vector<std::string> labels_;
  std::vector<double> scores_;
};

struct DecodeOptions {
  bool require_root_label = true;
  /// Words and tags for the output preterminals; defaults are `w<i>` / `X`.
  std::vector<std::string> words;
  std::vector<std::string> tags;
  /// Root used only when the full span is NULL and has several children.
  std::string fallback_root = "ROOT";
};

struct Decoded {
  Tree tree;    // collapsed labels already expanded into unary chains
  double score = 0.0;
  std::vector<LabeledSpan> spans;  // non-NULL spans, labels still collapsed
};

/// Throws std::invalid_argument for n = 0, or when a root label is required
/// but the vocabulary has no non-NULL label.
Decoded decode(const SpanScoreTable& scores, const DecodeOptions& options = {});

/// +1 for each gold (collapsed) span label, 0 for NULL, -1 for everything
/// else; the gold tree is then the unique optimum up to NULL binarization.
/// `extra_labels` widens the vocabulary beyond the gold labels.
SpanScoreTable oracle_scores(const Tree& gold, const std::vector<std::string>& extra_labels = {});

/// DecodeOptions carrying a tree's own words and tags.
DecodeOptions options_from(const Tree& tree, bool require_root_label = true);

}  // namespace emetree

#endif  // EMETREE_DECODER_HPP
