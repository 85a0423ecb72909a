// NFC normalization, rare-character filtering and PPCEME-style tokenization
// of raw historical text.

#ifndef EMETREE_TEXTNORM_HPP
#define EMETREE_TEXTNORM_HPP

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace emetree {

class InvalidUtf8 : public std::runtime_error {
public:
  InvalidUtf8(std::size_t offset);
  std::size_t offset() const { return offset_; }

private:
  std::size_t offset_;
};

/// Throws InvalidUtf8 carrying the offset of the first bad byte, counted from
/// `base_offset`.
void check_utf8(std::string_view text, std::size_t base_offset = 0);

/// Canonical composition (NFC). Input must be valid UTF-8.
std::string nfc(std::string_view text);

struct CharCensus {
  std::map<char32_t, std::uint64_t> counts;
  std::size_t total_lines = 0;

  std::uint64_t total_chars() const;
};

struct NumberedLine {
  std::size_t line = 0;  // 1-based line number in the input
  std::string text;
};

struct FilterResult {
  std::vector<NumberedLine> kept;
  CharCensus census;
  std::size_t dropped = 0;
};

/// Normalizes every line to NFC, counts code points over the normalized
/// corpus, and drops lines holding any character seen fewer than
/// `min_char_count` times.
FilterResult normalize_and_filter(const std::vector<std::string>& lines, std::uint64_t min_char_count = 200);
FilterResult normalize_and_filter(std::istream& in, std::uint64_t min_char_count = 200);

/// Closed word lists that steer tokenization.
struct TokenizerLexicon {
  std::set<std::string> abbreviations;  // lowercase, with trailing period: "mr."
  std::set<std::string> special;        // lowercase, kept whole: "&c"
  /// Lowercase th-initial words that never lose their `th`: exact forms.
  std::set<std::string> th_words;
  /// Lowercase prefixes that block the `th` split: "thi" keeps "thing".
  std::vector<std::string> th_prefixes;

  static TokenizerLexicon defaults();
  /// One entry per line; `#` starts a comment. Sections are introduced by
  /// `[abbreviations]`, `[special]`, `[th-words]`, `[th-prefixes]`.
  static TokenizerLexicon load(std::istream& in);
};

struct TokenizedSentence {
  std::vector<std::string> tokens;
  std::size_t line = 0;
};

TokenizedSentence tokenize(std::string_view line, const TokenizerLexicon& lexicon, std::size_t line_no = 0);
TokenizedSentence tokenize(std::string_view line);

/// `.xiiii.C.`-style numerals: ivxlcdm runs (with j as a final i) separated or bounded by periods,
/// with at least one leading or internal period.
bool is_roman_numeral(std::string_view token);

}  // namespace emetree

#endif  // EMETREE_TEXTNORM_HPP
