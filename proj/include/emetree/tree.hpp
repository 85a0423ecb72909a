// Penn-style bracketed trees with PPCEME label conventions.

#ifndef EMETREE_TREE_HPP
#define EMETREE_TREE_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace emetree {

/// Raised for unbalanced or otherwise unreadable bracketed input.
class SyntaxError : public std::runtime_error {
public:
  SyntaxError(const std::string& what, std::size_t line, std::size_t column);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

private:
  std::size_t line_;
  std::size_t column_;
};

/// Raised when a nonterminal label does not follow CATEGORY(-FTAG)*(-DIGITS)?.
class MalformedLabel : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A nonterminal label: category, function tags, optional co-index, and the
/// lower parts of a collapsed unary chain (empty for ordinary labels).
///
/// Surface form is `CAT-FT1-FT2-IDX`; collapsed chains are joined top-down
/// with `::`, e.g. `NP-SBJ::CP-FRL`.
struct NodeLabel {
  std::string category;
  std::vector<std::string> ftags;
  std::optional<unsigned> index;
  std::vector<NodeLabel> chain;

  /// Parses a surface label, including `::`-joined chains.
  static NodeLabel parse(std::string_view surface);

  std::string str() const;
  /// Surface of this part only, ignoring the chain.
  std::string part_str() const;
  /// This label and its chain flattened top-down, each part chain-free.
  std::vector<NodeLabel> parts() const;
  bool is_collapsed() const { return !chain.empty(); }

  bool operator==(const NodeLabel&) const = default;
};

/// A tree node. Preterminals carry a POS tag and a word; every other node is
/// an internal node with a label and at least one child.
struct Node {
  NodeLabel label;             // internal nodes only
  std::string tag;             // preterminals only
  std::string word;            // preterminals only
  std::vector<Node> children;  // empty iff preterminal

  static Node internal(NodeLabel label, std::vector<Node> children);
  static Node preterminal(std::string tag, std::string word);

  bool is_preterminal() const { return children.empty(); }
  /// Label for internal nodes, raw tag for preterminals.
  std::string label_str() const;

  bool operator==(const Node&) const = default;
};

struct Tree {
  Node root;
  /// Sentence id carried by the PPCEME `(ID ...)` sibling of the wrapper.
  std::optional<std::string> id;

  bool operator==(const Tree&) const = default;
};

struct LabeledSpan {
  std::size_t start = 0;  // inclusive word index
  std::size_t end = 0;    // exclusive word index
  NodeLabel label;

  bool operator==(const LabeledSpan&) const = default;
};

enum class RenderStyle { compact, pretty };

/// Reads every top-level S-expression in `text`. An unlabeled outer wrapper
/// `( tree (ID x) )` is unwrapped and the id kept on the tree.
std::vector<Tree> parse_trees(std::string_view text);

/// Parses exactly one tree; throws SyntaxError if there are zero or several.
Tree parse_tree(std::string_view text);

std::string render_tree(const Tree& tree, RenderStyle style = RenderStyle::compact);
std::string render_node(const Node& node, RenderStyle style = RenderStyle::compact);

/// One span per internal node, in pre-order. Preterminals are not spans.
std::vector<LabeledSpan> tree_spans(const Tree& tree);

std::vector<std::string> tree_words(const Tree& tree);
std::vector<std::string> tree_tags(const Tree& tree);

std::size_t count_internal(const Node& node);

/// Structural checks beyond what parsing enforces. Returns human-readable
/// issues; an empty result means the tree is clean.
std::vector<std::string> validate_tree(const Tree& tree);

/// Applies `fn` to every node, parents before children.
template <typename Fn>
void for_each_node(const Node& node, Fn&& fn) {
  fn(node);
  for (const auto& child : node.children) for_each_node(child, fn);
}

}  // namespace emetree

#endif  // EMETREE_TREE_HPP
