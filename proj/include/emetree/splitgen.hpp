// Period-balanced cross-validation splits over atomic source texts.

#ifndef EMETREE_SPLITGEN_HPP
#define EMETREE_SPLITGEN_HPP

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace emetree {

enum class Section { train, dev, test };
enum class Period { e1, e2, e3 };

std::string_view to_string(Section s);
std::string_view to_string(Period p);
Section parse_section(std::string_view s);
Period parse_period(std::string_view s);

/// First `e1`/`e2`/`e3` bounded by non-alphanumerics in a file name.
std::optional<Period> period_from_name(std::string_view file_name);

/// Default source id: the file name up to and including its period token,
/// so `armin-e2-p1` and `armin-e2-p2` share `armin-e2`.
std::string source_from_name(std::string_view file_name);

struct CorpusFile {
  std::string file_id;
  std::string source_id;
  Period period = Period::e1;
  std::size_t token_count = 0;
};

struct SplitTargets {
  double train = 0.90;
  double dev = 0.05;
  double test = 0.05;
};

struct SplitPlan {
  std::vector<std::map<std::string, Section>> folds;
  std::uint64_t seed = 0;
  SplitTargets targets;
  std::vector<std::string> warnings;

  std::vector<std::string> files_in(std::size_t fold, Section section) const;
};

/// Greedy largest-first assignment per period, preferring source groups not
/// yet used in an earlier fold's dev or test. Deterministic for a given seed.
/// Throws std::invalid_argument if some period has fewer than 3 sources or a
/// source mixes periods.
SplitPlan generate_splits(const std::vector<CorpusFile>& files, std::size_t folds = 8,
                          SplitTargets targets = {}, std::uint64_t seed = 0);

struct SplitCheck {
  std::string name;
  std::optional<std::size_t> fold;
  bool passed = true;
  double measured = 0.0;
  double expected = 0.0;
  std::string detail;
};

struct SplitValidation {
  std::vector<SplitCheck> checks;
  /// Distinct sources placed in dev or test by fold k or earlier.
  std::vector<std::size_t> coverage_by_fold;
  std::size_t sources = 0;

  bool passed() const;
};

/// Checks partition exactness, source atomicity, section shares within
/// `tolerance` of the targets, and each period's share of each non-empty
/// section within `period_tolerance` of its corpus share. Shares are
/// fractions. Throws std::invalid_argument for file ids unknown to `files`.
SplitValidation validate_splits(const SplitPlan& plan, const std::vector<CorpusFile>& files, double tolerance,
                                double period_tolerance = 0.05);

/// Token share of each section in one fold, as fractions.
std::array<double, 3> section_shares(const SplitPlan& plan, std::size_t fold, const std::vector<CorpusFile>& files);

}  // namespace emetree

#endif  // EMETREE_SPLITGEN_HPP
