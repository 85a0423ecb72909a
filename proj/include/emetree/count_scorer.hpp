// Count-based span scorer and most-frequent-tag POS baseline.
//
// Neither is meant to be accurate; they give the decoder a trainable,
// deterministic model so the full pipeline can run without a neural encoder.

#ifndef EMETREE_COUNT_SCORER_HPP
#define EMETREE_COUNT_SCORER_HPP

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "emetree/decoder.hpp"
#include "emetree/tree.hpp"

namespace emetree {

/// Conditioning context of one span.
struct SpanContext {
  unsigned length_bucket = 0;
  std::string first_tag;
  std::string last_tag;
  bool whole_sentence = false;

  auto operator<=>(const SpanContext&) const = default;
};

/// 1..5 map to themselves, then 6-7 -> 6, 8-11 -> 8, 12-19 -> 12, 20+ -> 20.
unsigned length_bucket(std::size_t length);

SpanContext span_context(std::span<const std::string> tags, std::size_t i, std::size_t j);

/// s(i, j, l) = log((c(ctx, l) + 1) / (c(ctx) + V)), where V counts NULL and
/// every training label, and NULL is counted for each non-constituent span.
class CountScorer {
public:
  CountScorer() = default;
  CountScorer(std::vector<std::string> labels, std::map<SpanContext, std::vector<std::uint64_t>> counts);

  /// Throws std::invalid_argument on an empty training set.
  static CountScorer train(const std::vector<Tree>& train);

  SpanScoreTable score(std::span<const std::string> tags) const;

  /// Non-NULL vocabulary (collapsed surfaces), sorted.
  const std::vector<std::string>& labels() const { return labels_; }
  /// Per context: counts indexed like SpanScoreTable labels (NULL first).
  const std::map<SpanContext, std::vector<std::uint64_t>>& counts() const { return counts_; }

  bool operator==(const CountScorer&) const = default;

private:
  std::vector<std::string> labels_;
  std::map<SpanContext, std::vector<std::uint64_t>> counts_;
};

/// word -> tag -> count, plus the fallback for unseen words.
struct PosLexicon {
  std::map<std::string, std::map<std::string, std::uint64_t>> counts;
  std::string default_tag;

  static PosLexicon build(const std::vector<Tree>& train);
  /// Most frequent tag; ties go to the lexicographically smaller tag.
  std::string tag(const std::string& word) const;

  bool operator==(const PosLexicon&) const = default;
};

/// Open-class tags are the fallback candidates for unknown words.
bool is_open_class(const std::string& tag);

std::vector<std::string> tag_pos_baseline(const PosLexicon& lexicon, std::span<const std::string> words);

}  // namespace emetree

#endif  // EMETREE_COUNT_SCORER_HPP
