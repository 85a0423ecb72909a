// Unary-chain collapsing and span-label vocabularies.

#ifndef EMETREE_LABELSPACE_HPP
#define EMETREE_LABELSPACE_HPP

#include <set>
#include <string>
#include <vector>

#include "emetree/tree.hpp"

namespace emetree {

/// Replaces every maximal chain of nonterminals that each have exactly one
/// nonterminal child with a single node labeled `TOP::...::BOTTOM`.
Tree collapse_unaries(const Tree& tree);
Node collapse_unaries(const Node& node);

/// Inverse of collapse_unaries: a k-part label becomes k nested nodes.
Tree expand_label(const Tree& tree);
Node expand_label(const Node& node);

/// True if some nonterminal has exactly one child and that child is a nonterminal.
bool has_unary_chain(const Node& node);

/// Surface labels of all nonterminals, optionally after collapsing.
std::set<std::string> label_set(const std::vector<Tree>& trees, bool collapse);

struct VocabSection {
  std::size_t size_with_collapse = 0;
  std::size_t size_without_collapse = 0;
  std::vector<std::string> members;  // sorted; collapsed or not per the build flag
};

struct VocabReport {
  bool collapse = true;
  VocabSection train;
  VocabSection dev;
  VocabSection both;
  /// Dev labels missing from train, under the same collapse setting.
  std::vector<std::string> oov_labels;
};

/// Throws std::invalid_argument if `train` is empty.
VocabReport build_vocab(const std::vector<Tree>& train, const std::vector<Tree>& dev, bool collapse = true);

}  // namespace emetree

#endif  // EMETREE_LABELSPACE_HPP
