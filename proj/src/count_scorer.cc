#include "emetree/count_scorer.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "emetree/labelspace.hpp"

namespace emetree {

unsigned length_bucket(std::size_t length) {
  if (length <= 5) return static_cast<unsigned>(length);
  if (length < 8) return 6;
  if (length < 12) return 8;
  if (length < 20) return 12;
  return 20;
}

SpanContext span_context(std::span<const std::string> tags, std::size_t i, std::size_t j) {
  return {length_bucket(j - i), tags[i], tags[j - 1], i == 0 && j == tags.size()};
}

CountScorer::CountScorer(std::vector<std::string> labels, std::map<SpanContext, std::vector<std::uint64_t>> counts)
    : labels_(std::move(labels)), counts_(std::move(counts)) {
  for (const auto& [ctx, row] : counts_)
    if (row.size() != labels_.size() + 1) throw std::invalid_argument("CountScorer: count row has wrong width");
}

CountScorer CountScorer::train(const std::vector<Tree>& train) {
  if (train.empty()) throw std::invalid_argument("CountScorer::train: empty training set");

  std::set<std::string> vocab;
  std::vector<Tree> collapsed;
  collapsed.reserve(train.size());
  for (const auto& t : train) {
    collapsed.push_back(collapse_unaries(t));
    for (const auto& s : tree_spans(collapsed.back())) vocab.insert(s.label.str());
  }
  std::vector<std::string> labels(vocab.begin(), vocab.end());
  auto index_of = [&](const std::string& surface) {
    return static_cast<std::size_t>(std::lower_bound(labels.begin(), labels.end(), surface) - labels.begin()) + 1;
  };

  std::map<SpanContext, std::vector<std::uint64_t>> counts;
  for (const auto& t : collapsed) {
    const auto tags = tree_tags(t);
    const std::size_t n = tags.size();
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> gold;
    for (const auto& s : tree_spans(t)) gold[{s.start, s.end}] = index_of(s.label.str());
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j <= n; ++j) {
        auto& row = counts[span_context(tags, i, j)];
        row.resize(labels.size() + 1, 0);
        auto it = gold.find({i, j});
        ++row[it == gold.end() ? SpanScoreTable::null_label : it->second];
      }
    }
  }
  return CountScorer(std::move(labels), std::move(counts));
}

SpanScoreTable CountScorer::score(std::span<const std::string> tags) const {
  const std::size_t n = tags.size();
  const std::size_t width = labels_.size() + 1;
  const double vocab = static_cast<double>(width);
  SpanScoreTable table(n, labels_, -std::log(vocab));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j <= n; ++j) {
      auto it = counts_.find(span_context(tags, i, j));
      if (it == counts_.end()) continue;
      const auto& row = it->second;
      double total = 0.0;
      for (auto c : row) total += static_cast<double>(c);
      for (std::size_t l = 0; l < width; ++l)
        table.at(i, j, l) = std::log((static_cast<double>(row[l]) + 1.0) / (total + vocab));
    }
  }
  return table;
}

// ---------------------------------------------------------------------------
// POS baseline

bool is_open_class(const std::string& tag) {
  static const std::vector<std::string> prefixes{"N", "VB", "VAG", "VAN", "ADJ", "ADV", "FW"};
  if (tag.rfind("NEG", 0) == 0 || tag.rfind("NUM", 0) == 0) return false;
  return std::any_of(prefixes.begin(), prefixes.end(), [&](const std::string& p) { return tag.rfind(p, 0) == 0; });
}

namespace {

// Highest count, ties to the smaller key; map iteration is already sorted.
std::string argmax(const std::map<std::string, std::uint64_t>& counts) {
  std::string best;
  std::uint64_t best_count = 0;
  for (const auto& [tag, c] : counts)
    if (c > best_count) {
      best = tag;
      best_count = c;
    }
  return best;
}

}  // namespace

PosLexicon PosLexicon::build(const std::vector<Tree>& train) {
  PosLexicon lex;
  std::map<std::string, std::uint64_t> totals, open_totals;
  for (const auto& t : train) {
    for_each_node(t.root, [&](const Node& n) {
      if (!n.is_preterminal()) return;
      ++lex.counts[n.word][n.tag];
      ++totals[n.tag];
      if (is_open_class(n.tag)) ++open_totals[n.tag];
    });
  }
  lex.default_tag = argmax(open_totals.empty() ? totals : open_totals);
  if (lex.default_tag.empty()) lex.default_tag = "N";
  return lex;
}

std::string PosLexicon::tag(const std::string& word) const {
  auto it = counts.find(word);
  if (it == counts.end() || it->second.empty()) return default_tag;
  return argmax(it->second);
}

std::vector<std::string> tag_pos_baseline(const PosLexicon& lexicon, std::span<const std::string> words) {
  std::vector<std::string> out;
  out.reserve(words.size());
  for (const auto& w : words) out.push_back(lexicon.tag(w));
  return out;
}

}  // namespace emetree
