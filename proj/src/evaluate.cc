#include "emetree/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <tuple>

#include "emetree/labelspace.hpp"

namespace emetree {

namespace {

double ratio(std::size_t num, std::size_t den, std::size_t other) {
  if (den == 0) return other == 0 ? 100.0 : 0.0;
  return 100.0 * static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

double f1_score(double precision, double recall) {
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

double PRCounts::precision() const { return ratio(matched, predicted, gold); }
double PRCounts::recall() const { return ratio(matched, gold, predicted); }
double PRCounts::f1() const { return f1_score(precision(), recall()); }

PRCounts& PRCounts::operator+=(const PRCounts& o) {
  matched += o.matched;
  gold += o.gold;
  predicted += o.predicted;
  return *this;
}

PosCounts& PosCounts::operator+=(const PosCounts& o) {
  correct += o.correct;
  total += o.total;
  for (const auto& [tag, c] : o.per_tag) per_tag[tag] += c;
  return *this;
}

// ---------------------------------------------------------------------------
// Bracket matching

namespace {

struct Bracket {
  std::size_t start, end, depth;
  const NodeLabel* label;
};

std::size_t collect(const Node& n, std::size_t start, std::size_t depth, std::vector<Bracket>& out) {
  if (n.is_preterminal()) return start + 1;
  std::size_t slot = out.size();
  out.push_back({start, start, depth, &n.label});
  std::size_t end = start;
  for (const auto& c : n.children) end = collect(c, end, depth + 1, out);
  out[slot].end = end;
  return end;
}

using Key = std::tuple<std::size_t, std::size_t, std::string>;

// Groups brackets by (start, end, category); each group deepest first.
std::map<Key, std::vector<Bracket>> group(const Node& root, bool skip_root) {
  std::vector<Bracket> all;
  collect(root, 0, 0, all);
  std::map<Key, std::vector<Bracket>> groups;
  for (const auto& b : all) {
    if (skip_root && b.depth == 0) continue;
    groups[{b.start, b.end, b.label->category}].push_back(b);
  }
  for (auto& [key, list] : groups)
    std::stable_sort(list.begin(), list.end(), [](const Bracket& a, const Bracket& b) { return a.depth > b.depth; });
  return groups;
}

struct Matching {
  BracketCounts counts;
  std::vector<std::pair<NodeLabel, NodeLabel>> pairs;
};

Matching match(const Tree& gold_in, const Tree& pred_in, const EvalOptions& options) {
  const auto gold_words = tree_words(gold_in);
  const auto pred_words = tree_words(pred_in);
  if (gold_words.size() != pred_words.size())
    throw YieldMismatch("sentence length mismatch: gold " + std::to_string(gold_words.size()) + " words, predicted " +
                        std::to_string(pred_words.size()));

  const Tree gold = expand_label(gold_in);
  const Tree pred = expand_label(pred_in);

  Matching m;
  for (std::size_t i = 0; i < gold_words.size(); ++i)
    if (gold_words[i] != pred_words[i]) ++m.counts.word_mismatches;

  auto g = group(gold.root, options.skip_root);
  auto p = group(pred.root, options.skip_root);
  for (const auto& [key, list] : g) m.counts.gold += list.size();
  for (const auto& [key, list] : p) m.counts.predicted += list.size();
  for (const auto& [key, glist] : g) {
    auto it = p.find(key);
    if (it == p.end()) continue;
    const auto& plist = it->second;
    std::size_t k = std::min(glist.size(), plist.size());
    m.counts.matched += k;
    for (std::size_t i = 0; i < k; ++i) m.pairs.emplace_back(*glist[i].label, *plist[i].label);
  }
  return m;
}

}  // namespace

BracketCounts score_brackets(const Tree& gold, const Tree& pred, const EvalOptions& options) {
  return match(gold, pred, options).counts;
}

std::map<std::string, PRCounts> score_function_tags(const Tree& gold, const Tree& pred, const EvalOptions& options) {
  auto m = match(gold, pred, options);
  std::map<std::string, PRCounts> out;
  for (const auto& [g, p] : m.pairs) {
    for (const auto& tag : g.ftags) {
      auto& c = out[tag];
      ++c.gold;
      if (std::find(p.ftags.begin(), p.ftags.end(), tag) != p.ftags.end()) ++c.matched;
    }
    for (const auto& tag : p.ftags) ++out[tag].predicted;
  }
  return out;
}

// ---------------------------------------------------------------------------
// POS

PosCounts score_pos(std::span<const std::string> gold_tags, std::span<const std::string> pred_tags) {
  if (gold_tags.size() != pred_tags.size())
    throw YieldMismatch("tag sequence length mismatch: gold " + std::to_string(gold_tags.size()) + ", predicted " +
                        std::to_string(pred_tags.size()));
  PosCounts c;
  c.total = gold_tags.size();
  for (std::size_t i = 0; i < gold_tags.size(); ++i) {
    ++c.per_tag[gold_tags[i]].gold;
    ++c.per_tag[pred_tags[i]].predicted;
    if (gold_tags[i] == pred_tags[i]) {
      ++c.correct;
      ++c.per_tag[gold_tags[i]].matched;
    }
  }
  return c;
}

PosCounts score_pos(const Tree& gold, const Tree& pred) {
  if (tree_words(gold).size() != tree_words(pred).size())
    throw YieldMismatch("sentence length mismatch in POS scoring");
  const auto g = tree_tags(gold);
  const auto p = tree_tags(pred);
  return score_pos(g, p);
}

// ---------------------------------------------------------------------------
// Corpus level

EvalReport evaluate(const std::vector<Tree>& gold, const std::vector<Tree>& pred, const EvalOptions& options) {
  if (gold.size() != pred.size())
    throw std::invalid_argument("evaluate: " + std::to_string(gold.size()) + " gold trees but " +
                                std::to_string(pred.size()) + " predicted");
  EvalReport r;
  r.sentences = gold.size();
  PosCounts pos;
  std::map<std::string, PRCounts> ftags;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    auto b = score_brackets(gold[i], pred[i], options);
    r.brackets += b;
    r.brackets.word_mismatches += b.word_mismatches;
    for (const auto& [tag, c] : score_function_tags(gold[i], pred[i], options)) ftags[tag] += c;
    pos += score_pos(gold[i], pred[i]);
  }
  r.bracket_precision = r.brackets.precision();
  r.bracket_recall = r.brackets.recall();
  r.bracket_f1 = r.brackets.f1();
  r.pos_accuracy = ratio(pos.correct, pos.total, 0);

  for (const auto& [tag, c] : pos.per_tag)
    r.pos[tag] = {ratio(c.gold, pos.total, 0), c.precision(), c.recall(), c.f1(), c.gold};

  std::size_t gold_tags = 0;
  for (const auto& [tag, c] : ftags) {
    r.ftags_total += c;
    gold_tags += c.gold;
  }
  for (const auto& [tag, c] : ftags) r.ftags[tag] = {ratio(c.gold, gold_tags, 0), c.precision(), c.recall(), c.f1(), c.gold};
  return r;
}

std::map<std::string, double> report_metrics(const EvalReport& r) {
  std::map<std::string, double> m{
      {"bracket.precision", r.bracket_precision},
      {"bracket.recall", r.bracket_recall},
      {"bracket.f1", r.bracket_f1},
      {"pos.accuracy", r.pos_accuracy},
      {"ftag.all.precision", r.ftags_total.precision()},
      {"ftag.all.recall", r.ftags_total.recall()},
      {"ftag.all.f1", r.ftags_total.f1()},
  };
  for (const auto& [tag, s] : r.pos) m["pos." + tag + ".f1"] = s.f1;
  for (const auto& [tag, s] : r.ftags) {
    m["ftag." + tag + ".precision"] = s.precision;
    m["ftag." + tag + ".recall"] = s.recall;
    m["ftag." + tag + ".f1"] = s.f1;
  }
  return m;
}

MeanSd mean_sd(std::span<const double> values) {
  if (values.size() < 2) throw std::invalid_argument("standard deviation needs at least two values");
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / static_cast<double>(values.size() - 1)), values.size()};
}

CvSummary aggregate_cv(const std::vector<EvalReport>& reports) {
  if (reports.size() < 2) throw std::invalid_argument("aggregate_cv: need at least two folds");
  std::map<std::string, std::vector<double>> by_metric;
  for (const auto& r : reports)
    for (const auto& [name, v] : report_metrics(r)) by_metric[name].push_back(v);
  CvSummary out;
  for (const auto& [name, values] : by_metric)
    if (values.size() >= 2) out[name] = mean_sd(values);
  return out;
}

std::string format_summary(const EvalReport& r) {
  std::string out;
  char line[160];
  auto row = [&](const char* name, double v) {
    std::snprintf(line, sizeof line, "%-26s= %8.2f\n", name, v);
    out += line;
  };
  auto count = [&](const char* name, std::size_t v) {
    std::snprintf(line, sizeof line, "%-26s= %8zu\n", name, v);
    out += line;
  };
  out += "-- All --\n";
  count("Number of sentence", r.sentences);
  count("Number of Error sentence", 0);
  row("Bracketing Recall", r.bracket_recall);
  row("Bracketing Precision", r.bracket_precision);
  row("Bracketing FMeasure", r.bracket_f1);
  count("Matched Bracket", r.brackets.matched);
  count("Gold Bracket", r.brackets.gold);
  count("Test Bracket", r.brackets.predicted);
  row("Tagging accuracy", r.pos_accuracy);
  if (!r.ftags.empty()) {
    out += "\n-- Function tags --\n";
    std::snprintf(line, sizeof line, "%-8s %8s %8s %8s %8s\n", "tag", "share", "prec", "recall", "f1");
    out += line;
    for (const auto& [tag, s] : r.ftags) {
      std::snprintf(line, sizeof line, "%-8s %8.2f %8.2f %8.2f %8.2f\n", tag.c_str(), s.share, s.precision, s.recall,
                    s.f1);
      out += line;
    }
    std::snprintf(line, sizeof line, "%-8s %8.2f %8.2f %8.2f %8.2f\n", "ALL", 100.0, r.ftags_total.precision(),
                  r.ftags_total.recall(), r.ftags_total.f1());
    out += line;
  }
  return out;
}

}  // namespace emetree
