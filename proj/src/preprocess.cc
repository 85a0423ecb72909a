#include "emetree/preprocess.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace emetree {

const std::set<std::string>& ftag_inventory() {
  static const std::set<std::string> tags{
      "SBJ", "OB1", "OB2", "SPR", "MSR", "POS", "VOC", "DIR", "LOC", "TMP", "ADV",
      "CAR", "REL", "THT", "CMP", "QUE", "FRL", "EOP", "INF", "PPL", "IMP", "SMC",
      "PRP", "ABS", "SUB", "MAT", "SPE", "DEG", "PRN", "RSP", "LFD"};
  return tags;
}

const std::set<std::string>& rare_ftags() {
  static const std::set<std::string> tags{"CLF", "COM", "TMC", "RFL", "ADT", "EXL",
                                          "YYY", "ELAB", "XXX", "TAG", "TPC"};
  return tags;
}

FtagPolicy FtagPolicy::ftags0() { return {"ftags-0", {}}; }

FtagPolicy FtagPolicy::ftags10() {
  return {"ftags-10", {"SBJ", "OB1", "OB2", "VOC", "QUE", "INF", "IMP", "MAT", "SUB", "PRN"}};
}

FtagPolicy FtagPolicy::ftags31() { return {"ftags-31", ftag_inventory()}; }

FtagPolicy FtagPolicy::from_level(int level) {
  switch (level) {
    case 0: return ftags0();
    case 10: return ftags10();
    case 31: return ftags31();
    default: throw std::invalid_argument("function tag level must be 0, 10 or 31, got " + std::to_string(level));
  }
}

PreprocessReport& PreprocessReport::merge(const PreprocessReport& other) {
  trees_in += other.trees_in;
  trees_out += other.trees_out;
  trees_removed_code += other.trees_removed_code;
  trees_removed_meta += other.trees_removed_meta;
  trees_removed_break += other.trees_removed_break;
  trees_removed_empty += other.trees_removed_empty;
  for (const auto& [k, v] : other.labels_rewritten) labels_rewritten[k] += v;
  for (const auto& [k, v] : other.ftags_dropped) ftags_dropped[k] += v;
  return *this;
}

bool PreprocessReport::balanced() const {
  return trees_in ==
         trees_out + trees_removed_code + trees_removed_meta + trees_removed_break + trees_removed_empty;
}

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

void bump(PreprocessReport* report, const std::string& rule) {
  if (report) ++report->labels_rewritten[rule];
}

// Strips a trailing `-N` co-index from a raw tag or word.
std::string_view without_coindex(std::string_view s) {
  auto dash = s.rfind('-');
  if (dash != std::string_view::npos && dash > 0 && all_digits(s.substr(dash + 1))) return s.substr(0, dash);
  return s;
}

}  // namespace

bool EmptyElementLexicon::is_empty(const std::string& word) const {
  if (exact.count(word)) return true;
  if (!star_delimited) return false;
  auto core = without_coindex(word);
  return core.size() >= 2 && core.front() == '*' && core.back() == '*';
}

// ---------------------------------------------------------------------------
// Metadata

namespace {

const std::set<std::string> kMetadata{"CODE", "META", "REF"};

const std::string& head_symbol(const Node& n) { return n.is_preterminal() ? n.tag : n.label.category; }

bool contains_symbol(const Node& root, const std::string& sym) {
  bool found = false;
  for_each_node(root, [&](const Node& n) { found = found || head_symbol(n) == sym; });
  return found;
}

std::optional<Node> drop_metadata(const Node& n, PreprocessReport& report) {
  if (n.is_preterminal()) {
    if (n.tag == "CODE" && n.word == "<paren>") {
      ++report.labels_rewritten["code_open_paren"];
      return Node::preterminal("OPAREN", "-LRB-");
    }
    if (n.tag == "CODE" && n.word == "<$$paren>") {
      ++report.labels_rewritten["code_close_paren"];
      return Node::preterminal("CPAREN", "-RRB-");
    }
    if (kMetadata.count(n.tag)) return std::nullopt;
    return n;
  }
  if (kMetadata.count(n.label.category)) return std::nullopt;
  std::vector<Node> kept;
  for (const auto& c : n.children)
    if (auto k = drop_metadata(c, report)) kept.push_back(std::move(*k));
  if (kept.empty()) return std::nullopt;
  return Node::internal(n.label, std::move(kept));
}

}  // namespace

std::optional<Tree> strip_metadata(const Tree& tree, PreprocessReport& report) {
  ++report.trees_in;
  if (head_symbol(tree.root) == "META") {
    ++report.trees_removed_meta;
    return std::nullopt;
  }
  if (contains_symbol(tree.root, "BREAK")) {
    ++report.trees_removed_break;
    return std::nullopt;
  }
  auto root = drop_metadata(tree.root, report);
  if (!root) {
    ++report.trees_removed_code;
    return std::nullopt;
  }
  ++report.trees_out;
  return Tree{std::move(*root), tree.id};
}

std::vector<Tree> strip_metadata(const std::vector<Tree>& trees, PreprocessReport& report) {
  std::vector<Tree> out;
  out.reserve(trees.size());
  for (const auto& t : trees)
    if (auto s = strip_metadata(t, report)) out.push_back(std::move(*s));
  return out;
}

// ---------------------------------------------------------------------------
// POS tags

namespace {

// Righthand Head Rule: keep the last `+` segment.
std::string rightmost_segment(const std::string& tag) {
  auto plus = tag.rfind('+');
  if (plus == std::string::npos || plus + 1 == tag.size()) return tag;
  return tag.substr(plus + 1);
}

// `ADJ21` under `ADJ`: the category followed by exactly two digits.
bool is_segment_of(const std::string& tag, const std::string& category) {
  return tag.size() == category.size() + 2 && tag.compare(0, category.size(), category) == 0 &&
         all_digits(std::string_view(tag).substr(category.size()));
}

bool is_segmented_word(const Node& n) {
  if (n.is_preterminal() || !n.label.ftags.empty() || n.label.index || n.label.is_collapsed()) return false;
  return std::all_of(n.children.begin(), n.children.end(), [&](const Node& c) {
    return c.is_preterminal() && is_segment_of(c.tag, n.label.category);
  });
}

std::string simplify_tag(const std::string& tag, PreprocessReport* report) {
  std::string out = rightmost_segment(tag);
  if (out != tag) bump(report, "complex_tag");
  if (out == "MD0") {
    out = "MD";
    bump(report, "md0");
  }
  return out;
}

Node simplify_node(const Node& n, PreprocessReport* report) {
  if (n.is_preterminal()) return Node::preterminal(simplify_tag(n.tag, report), n.word);
  if (is_segmented_word(n)) {
    bump(report, "segmented_nt");
    std::vector<Node> kids;
    for (const auto& c : n.children) {
      std::string base = c.tag.substr(0, c.tag.size() - 2);
      kids.push_back(Node::preterminal(simplify_tag(base, nullptr), c.word));
    }
    NodeLabel label = n.label;
    label.category = rightmost_segment(label.category) + "_NT";
    return Node::internal(std::move(label), std::move(kids));
  }
  std::vector<Node> kids;
  kids.reserve(n.children.size());
  for (const auto& c : n.children) kids.push_back(simplify_node(c, report));
  return Node::internal(n.label, std::move(kids));
}

}  // namespace

Tree simplify_pos_tags(const Tree& tree, PreprocessReport* report) {
  return Tree{simplify_node(tree.root, report), tree.id};
}

// ---------------------------------------------------------------------------
// Empty categories

namespace {

void strip_index(NodeLabel& label, PreprocessReport* report) {
  if (label.index) {
    label.index.reset();
    bump(report, "coindex");
  }
  for (auto& part : label.chain) strip_index(part, report);
}

std::optional<Node> prune_empty(const Node& n, const EmptyElementLexicon& lexicon, PreprocessReport* report) {
  if (n.is_preterminal()) {
    if (lexicon.is_empty(n.word)) {
      bump(report, "empty_element");
      return std::nullopt;
    }
    auto tag = without_coindex(n.tag);
    if (tag.size() != n.tag.size()) bump(report, "coindex");
    return Node::preterminal(std::string(tag), n.word);
  }
  std::vector<Node> kept;
  for (const auto& c : n.children)
    if (auto k = prune_empty(c, lexicon, report)) kept.push_back(std::move(*k));
  if (kept.empty()) return std::nullopt;
  NodeLabel label = n.label;
  strip_index(label, report);
  return Node::internal(std::move(label), std::move(kept));
}

}  // namespace

std::optional<Tree> remove_empty_categories(const Tree& tree, const EmptyElementLexicon& lexicon,
                                            PreprocessReport* report) {
  auto root = prune_empty(tree.root, lexicon, report);
  if (!root) return std::nullopt;
  return Tree{std::move(*root), tree.id};
}

// ---------------------------------------------------------------------------
// Function tags

namespace {

void filter_label(NodeLabel& label, const FtagPolicy& policy, PreprocessReport* report) {
  std::vector<std::string> kept;
  for (const auto& tag : label.ftags) {
    bool keep = policy.kept.count(tag) && ftag_inventory().count(tag) &&
                std::find(kept.begin(), kept.end(), tag) == kept.end();
    if (keep)
      kept.push_back(tag);
    else if (report)
      ++report->ftags_dropped[tag];
  }
  label.ftags = std::move(kept);
  for (auto& part : label.chain) filter_label(part, policy, report);
}

Node filter_node(const Node& n, const FtagPolicy& policy, PreprocessReport* report) {
  if (n.is_preterminal()) return n;
  NodeLabel label = n.label;
  filter_label(label, policy, report);
  std::vector<Node> kids;
  kids.reserve(n.children.size());
  for (const auto& c : n.children) kids.push_back(filter_node(c, policy, report));
  return Node::internal(std::move(label), std::move(kids));
}

}  // namespace

Tree filter_function_tags(const Tree& tree, const FtagPolicy& policy, PreprocessReport* report) {
  return Tree{filter_node(tree.root, policy, report), tree.id};
}

std::vector<Tree> preprocess(const std::vector<Tree>& trees, const FtagPolicy& policy, PreprocessReport& report,
                             const EmptyElementLexicon& lexicon) {
  PreprocessReport local;
  auto stripped = strip_metadata(trees, local);
  std::vector<Tree> out;
  out.reserve(stripped.size());
  for (const auto& t : stripped) {
    auto clean = remove_empty_categories(simplify_pos_tags(t, &local), lexicon, &local);
    if (!clean) {
      --local.trees_out;
      ++local.trees_removed_empty;
      continue;
    }
    out.push_back(filter_function_tags(*clean, policy, &local));
  }
  report.merge(local);
  return out;
}

}  // namespace emetree
