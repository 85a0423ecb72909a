#include "emetree/textnorm.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <algorithm>

namespace emetree {

InvalidUtf8::InvalidUtf8(std::size_t offset)
    : std::runtime_error("invalid UTF-8 at byte offset " + std::to_string(offset)), offset_(offset) {}

void check_utf8(std::string_view text, std::size_t base_offset) {
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    int32_t start = i;
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (c < 0) throw InvalidUtf8(base_offset + static_cast<std::size_t>(start));
  }
}

namespace {

std::u32string decode(std::string_view text) {
  std::u32string out;
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    int32_t start = i;
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (c < 0) throw InvalidUtf8(static_cast<std::size_t>(start));
    out.push_back(static_cast<char32_t>(c));
  }
  return out;
}

std::string encode(std::u32string_view text) {
  std::string out;
  for (char32_t c : text) {
    uint8_t buf[U8_MAX_LENGTH];
    int32_t n = 0;
    U8_APPEND_UNSAFE(buf, n, static_cast<UChar32>(c));
    out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(n));
  }
  return out;
}

const icu::Normalizer2& nfc_instance() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* n = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw std::runtime_error(std::string("ICU NFC unavailable: ") + u_errorName(status));
  return *n;
}

}  // namespace

std::string nfc(std::string_view text) {
  check_utf8(text);
  UErrorCode status = U_ZERO_ERROR;
  auto src = icu::UnicodeString::fromUTF8(icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  auto normalized = nfc_instance().normalize(src, status);
  if (U_FAILURE(status)) throw std::runtime_error(std::string("NFC normalization failed: ") + u_errorName(status));
  std::string out;
  normalized.toUTF8String(out);
  return out;
}

std::uint64_t CharCensus::total_chars() const {
  std::uint64_t total = 0;
  for (const auto& [c, n] : counts) total += n;
  return total;
}

FilterResult normalize_and_filter(const std::vector<std::string>& lines, std::uint64_t min_char_count) {
  FilterResult result;
  std::vector<std::u32string> normalized;
  normalized.reserve(lines.size());
  std::size_t offset = 0;
  for (const auto& line : lines) {
    check_utf8(line, offset);
    offset += line.size() + 1;
    normalized.push_back(decode(nfc(line)));
    for (char32_t c : normalized.back()) ++result.census.counts[c];
  }
  result.census.total_lines = lines.size();

  for (std::size_t i = 0; i < normalized.size(); ++i) {
    const auto& line = normalized[i];
    bool rare = std::any_of(line.begin(), line.end(),
                            [&](char32_t c) { return result.census.counts.at(c) < min_char_count; });
    if (rare)
      ++result.dropped;
    else
      result.kept.push_back({i + 1, encode(line)});
  }
  return result;
}

FilterResult normalize_and_filter(std::istream& in, std::uint64_t min_char_count) {
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return normalize_and_filter(lines, min_char_count);
}

// ---------------------------------------------------------------------------
// Tokenization

TokenizerLexicon TokenizerLexicon::defaults() {
  TokenizerLexicon lex;
  lex.abbreviations = {"mr.",   "mrs.",  "mris.", "dr.",   "st.",   "sr.",   "esq.",  "viz.",  "wm.",   "tho.",
                       "jo.",   "geo.",  "rich.", "eliz.", "edw.",  "hen.",  "jas.",  "chas.", "capt.", "col.",
                       "gen.",  "lieut.", "maj.", "rev.",  "ld.",   "bp.",   "abp.",  "ibid.", "cap.",  "chap.",
                       "fol.",  "lib.",  "vol.",  "ver.",  "pp.",   "sc.",   "ult.",  "inst.", "jan.",  "feb.",
                       "apr.",  "aug.",  "sept.", "oct.",  "nov.",  "dec.",  "etc.",  "i.e.",  "e.g.",  "q."};
  lex.special = {"&c"};
  lex.th_words = {"the"};
  lex.th_prefixes = {"thee", "they", "them", "then", "ther", "thes", "thei", "thi",
                     "tho",  "thu",  "thar", "that", "than", "thank"};
  return lex;
}

TokenizerLexicon TokenizerLexicon::load(std::istream& in) {
  TokenizerLexicon lex;
  std::string section;
  for (std::string line; std::getline(in, line);) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line.erase(0, line.find_first_not_of(" \t\r"));
    line.erase(line.find_last_not_of(" \t\r") + 1);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      section = line.substr(1, line.size() - 2);
      continue;
    }
    if (section == "abbreviations")
      lex.abbreviations.insert(line);
    else if (section == "special")
      lex.special.insert(line);
    else if (section == "th-words")
      lex.th_words.insert(line);
    else if (section == "th-prefixes")
      lex.th_prefixes.push_back(line);
    else
      throw std::runtime_error("lexicon entry outside a known section: '" + line + "'");
  }
  return lex;
}

namespace {

bool is_space(char32_t c) { return u_isUWhiteSpace(static_cast<UChar32>(c)); }

// Characters split off as their own tokens. Apostrophes, hyphens, `&`, and
// the OCR gap bullet belong to words.
bool is_punct(char32_t c) {
  switch (c) {
    case U'.': case U',': case U';': case U':': case U'!': case U'?': case U'(': case U')':
    case U'[': case U']': case U'{': case U'}': case U'"': case U'/': case U'¶': case U'«':
    case U'»': case U'“': case U'”': case U'‘': case U'—': case U'–': case U'¿': case U'¡':
      return true;
    default:
      return false;
  }
}

bool is_apostrophe(char32_t c) { return c == U'\'' || c == U'’'; }

bool is_vowel(char32_t c) { return c == U'a' || c == U'e' || c == U'i' || c == U'o' || c == U'u'; }

std::u32string lower(std::u32string_view s) {
  std::u32string out(s);
  for (auto& c : out) c = static_cast<char32_t>(u_tolower(static_cast<UChar32>(c)));
  return out;
}

bool is_roman_char(char32_t c) {
  switch (c) {
    case U'i': case U'v': case U'x': case U'l': case U'c': case U'd': case U'm': case U'j':
    case U'I': case U'V': case U'X': case U'L': case U'C': case U'D': case U'M': case U'J':
      return true;
    default:
      return false;
  }
}

bool roman(std::u32string_view s) {
  if (s.empty()) return false;
  std::size_t i = 0;
  bool leading = s[0] == U'.';
  if (leading) ++i;
  bool internal = false;
  bool any = false;
  while (i < s.size()) {
    std::size_t run = 0;
    while (i < s.size() && is_roman_char(s[i])) ++i, ++run;
    if (run == 0) return false;
    any = true;
    if (i == s.size()) break;
    if (s[i] != U'.') return false;
    ++i;
    if (i < s.size()) internal = true;
  }
  return any && (leading || internal);
}

class Tokenizer {
public:
  Tokenizer(const TokenizerLexicon& lex, std::vector<std::string>& out) : lex_(lex), out_(out) {}

  void chunk(std::u32string_view s) {
    if (s.empty()) return;
    if (whole(s)) return emit(s);
    if (s.front() != U'.' && opens_or_closes(s.front())) {
      emit(s.substr(0, 1));
      return chunk(s.substr(1));
    }
    if (s.back() != U'.' && opens_or_closes(s.back())) {
      chunk(s.substr(0, s.size() - 1));
      return emit(s.substr(s.size() - 1));
    }
    if (s.front() == U'.') {
      emit(s.substr(0, 1));
      return chunk(s.substr(1));
    }
    if (s.back() == U'.') {
      chunk(s.substr(0, s.size() - 1));
      return emit(s.substr(s.size() - 1));
    }
    for (std::size_t k = 1; k + 1 < s.size(); ++k) {
      if (!is_punct(s[k])) continue;
      if (s[k] == U'.' && u_isdigit(static_cast<UChar32>(s[k - 1])) && u_isdigit(static_cast<UChar32>(s[k + 1])))
        continue;
      chunk(s.substr(0, k));
      emit(s.substr(k, 1));
      return chunk(s.substr(k + 1));
    }
    word(s);
  }

private:
  bool opens_or_closes(char32_t c) const { return is_punct(c) || c == U'-'; }

  bool whole(std::u32string_view s) const {
    if (s.size() == 1) return true;
    const std::string lw = encode(lower(s));
    return lex_.special.count(lw) || lex_.abbreviations.count(lw) || roman(s);
  }

  void word(std::u32string_view s) {
    const std::u32string lw = lower(s);
    if (lw.size() > 3 && lw[0] == U't' && lw[1] == U'h' && is_apostrophe(lw[2])) {
      emit(s.substr(0, 3));
      return chunk(s.substr(3));
    }
    if (lw.size() == 4 && lw[0] == U'i' && lw[1] == U't' && is_apostrophe(lw[2]) && lw[3] == U's') {
      emit(s.substr(0, 2));
      return emit(s.substr(2));
    }
    if (splits_th(lw)) {
      emit(s.substr(0, 2));
      return chunk(s.substr(2));
    }
    emit(s);
  }

  bool splits_th(const std::u32string& lw) const {
    if (lw.size() < 5 || lw[0] != U't' || lw[1] != U'h' || !is_vowel(lw[2])) return false;
    const std::string utf8 = encode(lw);
    if (lex_.th_words.count(utf8)) return false;
    return std::none_of(lex_.th_prefixes.begin(), lex_.th_prefixes.end(),
                        [&](const std::string& p) { return utf8.rfind(p, 0) == 0; });
  }

  void emit(std::u32string_view s) { out_.push_back(encode(s)); }

  const TokenizerLexicon& lex_;
  std::vector<std::string>& out_;
};

}  // namespace

bool is_roman_numeral(std::string_view token) { return roman(decode(token)); }

TokenizedSentence tokenize(std::string_view line, const TokenizerLexicon& lexicon, std::size_t line_no) {
  TokenizedSentence out;
  out.line = line_no;
  const std::u32string text = decode(line);
  Tokenizer tok(lexicon, out.tokens);
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > start) tok.chunk(std::u32string_view(text).substr(start, i - start));
  }
  return out;
}

TokenizedSentence tokenize(std::string_view line) {
  static const TokenizerLexicon lexicon = TokenizerLexicon::defaults();
  return tokenize(line, lexicon);
}

}  // namespace emetree
