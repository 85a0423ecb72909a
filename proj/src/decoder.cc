#include "emetree/decoder.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "emetree/labelspace.hpp"

namespace emetree {

SpanScoreTable::SpanScoreTable(std::size_t n, const std::vector<std::string>& labels, double fill) : n_(n) {
  labels_.reserve(labels.size() + 1);
  labels_.emplace_back(null_surface);
  for (const auto& l : labels) {
    if (l == null_surface) throw std::invalid_argument("label list must not contain the NULL label");
    labels_.push_back(l);
  }
  scores_.assign((n + 1) * (n + 1) * labels_.size(), fill);
}

std::optional<std::size_t> SpanScoreTable::label_index(std::string_view surface) const {
  auto it = std::find(labels_.begin(), labels_.end(), surface);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels_.begin());
}

std::size_t SpanScoreTable::best_label(std::size_t i, std::size_t j, bool allow_null) const {
  auto c = cell(i, j);
  std::size_t best = allow_null ? 0 : 1;
  for (std::size_t l = best + 1; l < c.size(); ++l)
    if (c[l] > c[best]) best = l;
  return best;
}

// ---------------------------------------------------------------------------
// Binary IO

namespace {

constexpr char kMagic[4] = {'E', 'M', 'S', 'T'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ostream& out, T value) {
  if constexpr (std::endian::native == std::endian::big) {
    auto bytes = std::bit_cast<std::array<char, sizeof(T)>>(value);
    std::reverse(bytes.begin(), bytes.end());
    value = std::bit_cast<T>(bytes);
  }
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T value;
  if (!in.read(reinterpret_cast<char*>(&value), sizeof(T))) throw std::runtime_error("score table: truncated input");
  if constexpr (std::endian::native == std::endian::big) {
    auto bytes = std::bit_cast<std::array<char, sizeof(T)>>(value);
    std::reverse(bytes.begin(), bytes.end());
    value = std::bit_cast<T>(bytes);
  }
  return value;
}

}  // namespace

void SpanScoreTable::write(std::ostream& out) const {
  out.write(kMagic, sizeof kMagic);
  put<std::uint32_t>(out, kVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(n_));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(labels_.size()));
  for (const auto& l : labels_) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(l.size()));
    out.write(l.data(), static_cast<std::streamsize>(l.size()));
  }
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j <= n_; ++j)
      for (double s : cell(i, j)) put<double>(out, s);
}

SpanScoreTable SpanScoreTable::read(std::istream& in) {
  char magic[4];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0)
    throw std::runtime_error("score table: bad magic");
  if (get<std::uint32_t>(in) != kVersion) throw std::runtime_error("score table: unsupported version");
  auto n = get<std::uint32_t>(in);
  auto count = get<std::uint32_t>(in);
  if (count == 0) throw std::runtime_error("score table: missing NULL label");
  std::vector<std::string> labels(count);
  for (auto& l : labels) {
    l.resize(get<std::uint32_t>(in));
    if (!in.read(l.data(), static_cast<std::streamsize>(l.size()))) throw std::runtime_error("score table: truncated label");
  }
  if (labels.front() != null_surface) throw std::runtime_error("score table: label 0 must be NULL");
  SpanScoreTable table(n, {labels.begin() + 1, labels.end()});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j <= n; ++j)
      for (std::size_t l = 0; l < count; ++l) table.at(i, j, l) = get<double>(in);
  return table;
}

// ---------------------------------------------------------------------------
// CKY

namespace {

struct Cell {
  double best = -std::numeric_limits<double>::infinity();
  std::size_t label = 0;
  std::size_t split = 0;
};

class Chart {
public:
  explicit Chart(std::size_t n) : n_(n), cells_((n + 1) * (n + 1)) {}
  Cell& operator()(std::size_t i, std::size_t j) { return cells_[i * (n_ + 1) + j]; }

private:
  std::size_t n_;
  std::vector<Cell> cells_;
};

struct Builder {
  const DecodeOptions& options;
  const std::vector<NodeLabel>& labels;
  Chart& chart;
  std::vector<LabeledSpan>& spans;

  std::vector<Node> build(std::size_t i, std::size_t j) {
    const Cell& c = chart(i, j);
    std::vector<Node> kids;
    if (j - i == 1) {
      kids.push_back(Node::preterminal(options.tags.empty() ? "X" : options.tags[i],
                                       options.words.empty() ? "w" + std::to_string(i) : options.words[i]));
    } else {
      kids = build(i, c.split);
      auto right = build(c.split, j);
      kids.insert(kids.end(), std::make_move_iterator(right.begin()), std::make_move_iterator(right.end()));
    }
    if (c.label == SpanScoreTable::null_label) return kids;
    spans.push_back({i, j, labels[c.label]});
    std::vector<Node> out;
    out.push_back(expand_label(Node::internal(labels[c.label], std::move(kids))));
    return out;
  }
};

}  // namespace

Decoded decode(const SpanScoreTable& scores, const DecodeOptions& options) {
  const std::size_t n = scores.length();
  if (n == 0) throw std::invalid_argument("decode: empty sentence");
  if (options.require_root_label && scores.num_labels() < 2)
    throw std::invalid_argument("decode: root label required but vocabulary has no non-NULL label");
  if ((!options.words.empty() && options.words.size() != n) || (!options.tags.empty() && options.tags.size() != n))
    throw std::invalid_argument("decode: words/tags do not match sentence length");

  Chart chart(n);
  for (std::size_t len = 1; len <= n; ++len) {
    for (std::size_t i = 0; i + len <= n; ++i) {
      const std::size_t j = i + len;
      Cell& c = chart(i, j);
      const bool root = len == n && options.require_root_label;
      c.label = scores.best_label(i, j, !root);
      double split_best = 0.0;
      if (len > 1) {
        split_best = -std::numeric_limits<double>::infinity();
        for (std::size_t k = i + 1; k < j; ++k) {
          double s = chart(i, k).best + chart(k, j).best;
          if (s > split_best) {
            split_best = s;
            c.split = k;
          }
        }
      }
      c.best = scores.at(i, j, c.label) + split_best;
    }
  }

  std::vector<NodeLabel> labels;
  labels.reserve(scores.num_labels());
  labels.emplace_back();
  for (std::size_t l = 1; l < scores.num_labels(); ++l) labels.push_back(NodeLabel::parse(scores.labels()[l]));

  Decoded out;
  out.score = chart(0, n).best;
  Builder builder{options, labels, chart, out.spans};
  auto forest = builder.build(0, n);
  if (forest.size() == 1)
    out.tree.root = std::move(forest.front());
  else
    out.tree.root = Node::internal(NodeLabel::parse(options.fallback_root), std::move(forest));
  std::sort(out.spans.begin(), out.spans.end(), [](const LabeledSpan& a, const LabeledSpan& b) {
    return a.start != b.start ? a.start < b.start : a.end > b.end;
  });
  return out;
}

SpanScoreTable oracle_scores(const Tree& gold, const std::vector<std::string>& extra_labels) {
  const auto collapsed = collapse_unaries(gold);
  const auto spans = tree_spans(collapsed);
  std::vector<std::string> vocab = extra_labels;
  for (const auto& s : spans) vocab.push_back(s.label.str());
  std::sort(vocab.begin(), vocab.end());
  vocab.erase(std::unique(vocab.begin(), vocab.end()), vocab.end());

  const std::size_t n = tree_words(gold).size();
  SpanScoreTable table(n, vocab, -1.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j <= n; ++j) table.at(i, j, SpanScoreTable::null_label) = 0.0;
  for (const auto& s : spans) table.at(s.start, s.end, *table.label_index(s.label.str())) = 1.0;
  return table;
}

DecodeOptions options_from(const Tree& tree, bool require_root_label) {
  DecodeOptions o;
  o.require_root_label = require_root_label;
  o.words = tree_words(tree);
  o.tags = tree_tags(tree);
  return o;
}

}  // namespace emetree
