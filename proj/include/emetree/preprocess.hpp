// Turns raw PPCEME trees into parser-ready corpora.
//
// Stages run in a fixed order: strip_metadata, simplify_pos_tags,
// remove_empty_categories, filter_function_tags. Each stage is a pure
// per-tree transform; counters go into a PreprocessReport that merges
// associatively across files.

#ifndef EMETREE_PREPROCESS_HPP
#define EMETREE_PREPROCESS_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "emetree/tree.hpp"

namespace emetree {

/// The 31 function tags retained after dropping rare ones.
const std::set<std::string>& ftag_inventory();

/// Rare tags that are removed under every policy.
const std::set<std::string>& rare_ftags();

struct FtagPolicy {
  std::string name;
  std::set<std::string> kept;

  static FtagPolicy ftags0();
  static FtagPolicy ftags10();
  static FtagPolicy ftags31();
  /// 0, 10 or 31; anything else throws std::invalid_argument.
  static FtagPolicy from_level(int level);

  bool operator==(const FtagPolicy&) const = default;
};

struct PreprocessReport {
  std::size_t trees_in = 0;
  std::size_t trees_out = 0;
  std::size_t trees_removed_code = 0;
  std::size_t trees_removed_meta = 0;
  std::size_t trees_removed_break = 0;
  std::size_t trees_removed_empty = 0;  // yield emptied by empty-category removal
  std::map<std::string, std::size_t> labels_rewritten;
  std::map<std::string, std::size_t> ftags_dropped;

  PreprocessReport& merge(const PreprocessReport& other);
  bool balanced() const;

  bool operator==(const PreprocessReport&) const = default;
};

/// Which preterminal words count as empty elements.
struct EmptyElementLexicon {
  std::set<std::string> exact{"*", "0"};
  bool star_delimited = true;  // any `*...*`, optionally followed by `-N`

  bool is_empty(const std::string& word) const;
};

/// Rewrites CODE parens, then deletes CODE/META/REF subtrees. Dropped trees
/// are counted in `report`, never raised.
std::vector<Tree> strip_metadata(const std::vector<Tree>& trees, PreprocessReport& report);
std::optional<Tree> strip_metadata(const Tree& tree, PreprocessReport& report);

/// Righthand Head Rule for complex tags, MD0 -> MD, and `_NT` for
/// nonterminals over numbered segment tags.
Tree simplify_pos_tags(const Tree& tree, PreprocessReport* report = nullptr);

/// Deletes empty elements and the nodes they orphan, and strips co-indices.
/// Returns nothing when the whole yield was empty.
std::optional<Tree> remove_empty_categories(const Tree& tree, const EmptyElementLexicon& lexicon = {},
                                            PreprocessReport* report = nullptr);

Tree filter_function_tags(const Tree& tree, const FtagPolicy& policy, PreprocessReport* report = nullptr);

/// All four stages in order.
std::vector<Tree> preprocess(const std::vector<Tree>& trees, const FtagPolicy& policy, PreprocessReport& report,
                             const EmptyElementLexicon& lexicon = {});

}  // namespace emetree

#endif  // EMETREE_PREPROCESS_HPP
