#include <doctest.h>

#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "emetree/textnorm.hpp"

using namespace emetree;

namespace {

std::vector<std::string> toks(const std::string& s) { return tokenize(s).tokens; }

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& t : v) out += (out.empty() ? "" : " ") + t;
  return out;
}

std::string strip_spaces(const std::string& s) {
  std::string out;
  for (char c : s)
    if (c != ' ') out += c;
  return out;
}

// Code point histogram by hand-decoding UTF-8 lead bytes.
std::map<char32_t, std::uint64_t> histogram(const std::vector<std::string>& lines) {
  std::map<char32_t, std::uint64_t> h;
  for (const auto& line : lines) {
    for (std::size_t i = 0; i < line.size();) {
      const auto b = static_cast<unsigned char>(line[i]);
      std::size_t len = b < 0x80 ? 1 : b < 0xE0 ? 2 : b < 0xF0 ? 3 : 4;
      char32_t cp = len == 1 ? b : len == 2 ? b & 0x1F : len == 3 ? b & 0x0F : b & 0x07;
      for (std::size_t k = 1; k < len; ++k) cp = (cp << 6) | (static_cast<unsigned char>(line[i + k]) & 0x3F);
      ++h[cp];
      i += len;
    }
  }
  return h;
}

}  // namespace

TEST_CASE("NFC composes") {
  CHECK(nfc("e\xCC\x81") == "\xC3\xA9");
  CHECK(nfc("plain") == "plain");
  CHECK_THROWS_AS(nfc("ok\xFF"), InvalidUtf8);
  try {
    check_utf8("abc\xC3", 10);
    FAIL("expected InvalidUtf8");
  } catch (const InvalidUtf8& e) {
    CHECK(e.offset() == 13);
  }
}

TEST_CASE("NFC is idempotent on random text") {
  std::mt19937_64 rng(5);
  // Latin, combining marks, Greek, Hangul jamo and syllables, CJK, and astral.
  const std::vector<std::pair<char32_t, char32_t>> ranges{
      {0x20, 0x7E}, {0xC0, 0x17F}, {0x300, 0x36F}, {0x391, 0x3C9}, {0x1100, 0x1112}, {0x1161, 0x1175},
      {0xAC00, 0xAC40}, {0x4E00, 0x4E40}, {0x1F600, 0x1F640}};
  for (int i = 0; i < 10000; ++i) {
    std::string line;
    const std::size_t len = 1 + rng() % 24;
    for (std::size_t k = 0; k < len; ++k) {
      const auto& [lo, hi] = ranges[rng() % ranges.size()];
      char32_t c = lo + static_cast<char32_t>(rng() % (hi - lo + 1));
      if (c < 0x80) {
        line += static_cast<char>(c);
      } else if (c < 0x800) {
        line += static_cast<char>(0xC0 | (c >> 6));
        line += static_cast<char>(0x80 | (c & 0x3F));
      } else if (c < 0x10000) {
        line += static_cast<char>(0xE0 | (c >> 12));
        line += static_cast<char>(0x80 | ((c >> 6) & 0x3F));
        line += static_cast<char>(0x80 | (c & 0x3F));
      } else {
        line += static_cast<char>(0xF0 | (c >> 18));
        line += static_cast<char>(0x80 | ((c >> 12) & 0x3F));
        line += static_cast<char>(0x80 | ((c >> 6) & 0x3F));
        line += static_cast<char>(0x80 | (c & 0x3F));
      }
    }
    const auto once = nfc(line);
    REQUIRE(nfc(once) == once);
  }
}

TEST_CASE("rare characters drop their lines") {
  std::vector<std::string> lines;
  for (int i = 0; i < 10; ++i) lines.push_back(i == 3 || i == 7 ? "a \xE2\x99\x9C b" : "a b");
  auto r = normalize_and_filter(lines, 3);
  CHECK(r.kept.size() == 8);
  CHECK(r.dropped == 2);
  CHECK(r.census.total_lines == 10);
  CHECK(r.census.counts == histogram(lines));
  CHECK(r.census.total_chars() == 3 * 8 + 5 * 2);
  for (const auto& k : r.kept) CHECK(k.line != 4);

  // The black rook is seen 2 times; 3 would keep it.
  CHECK(normalize_and_filter(lines, 2).dropped == 0);
}

TEST_CASE("census runs over normalized text") {
  std::istringstream in("e\xCC\x81\r\n\xC3\xA9\n");
  auto r = normalize_and_filter(in, 2);
  CHECK(r.kept.size() == 2);
  CHECK(r.census.counts.size() == 1);
  CHECK(r.census.counts.at(0xE9) == 2);
  CHECK(r.kept[0].text == "\xC3\xA9");

  std::vector<std::string> bad{"fine", "bro\xC3"};
  try {
    normalize_and_filter(bad, 1);
    FAIL("expected InvalidUtf8");
  } catch (const InvalidUtf8& e) {
    CHECK(e.offset() == 8);
  }
}

TEST_CASE("tokenizer fixtures") {
  CHECK(toks("th'exchaung") == std::vector<std::string>{"th'", "exchaung"});
  CHECK(toks("thafternoone") == std::vector<std::string>{"th", "afternoone"});
  CHECK(toks("thynkyth") == std::vector<std::string>{"thynkyth"});
  CHECK(toks("He said , Mr. Fitz-Morris came .") ==
        std::vector<std::string>{"He", "said", ",", "Mr.", "Fitz-Morris", "came", "."});
  CHECK(toks("&c") == std::vector<std::string>{"&c"});
  CHECK(toks(".xiiii.C.") == std::vector<std::string>{".xiiii.C."});
  CHECK(toks("paid .xiiii.C. pounds.") == std::vector<std::string>{"paid", ".xiiii.C.", "pounds", "."});
  CHECK(toks("the Queen's men,") == std::vector<std::string>{"the", "Queen's", "men", ","});
  CHECK(toks("it's") == std::vector<std::string>{"it", "'s"});
  CHECK(toks("its") == std::vector<std::string>{"its"});
  CHECK(toks("(sayd he)") == std::vector<std::string>{"(", "sayd", "he", ")"});
  CHECK(toks("Eccl\xE2\x80\xA2siasticall") == std::vector<std::string>{"Eccl\xE2\x80\xA2siasticall"});
  CHECK(toks("3.5 shillings;") == std::vector<std::string>{"3.5", "shillings", ";"});
  CHECK(toks("the thing").size() == 2);
  CHECK(toks("there") == std::vector<std::string>{"there"});
  CHECK(toks("") .empty());
}

TEST_CASE("roman numerals") {
  CHECK(is_roman_numeral(".xiiii.C."));
  CHECK(is_roman_numeral(".iiij."));
  CHECK(is_roman_numeral("xx.li."));
  CHECK_FALSE(is_roman_numeral("mix."));
  CHECK_FALSE(is_roman_numeral("civil"));
}

TEST_CASE("tokenization preserves characters and is idempotent") {
  const std::vector<std::string> lines{
      "He said , Mr. Fitz-Morris came .", "thafternoone th'exchaung ; and (so) forth!", "Item, paid .xx.li. to Wm. Cecill &c.",
      "\"What?\" quoth she--nay, 'tis so.", "whereas.the.lord.", "it's its it's."};
  for (const auto& line : lines) {
    const auto once = toks(line);
    CHECK(strip_spaces(join(once)) == strip_spaces(line));
    CHECK(toks(join(once)) == once);
  }
}

TEST_CASE("lexicon file") {
  std::istringstream in(
      "# custom\n[abbreviations]\nsig.\n[special]\n&amp\n[th-words]\nthat\n[th-prefixes]\nthou\n");
  auto lex = TokenizerLexicon::load(in);
  CHECK(tokenize("sig. &amp", lex).tokens == std::vector<std::string>{"sig.", "&amp"});
  CHECK(tokenize("Mr.", lex).tokens == std::vector<std::string>{"Mr", "."});
  CHECK(tokenize("thouse", lex).tokens == std::vector<std::string>{"thouse"});
  std::istringstream bad("orphan\n");
  CHECK_THROWS(TokenizerLexicon::load(bad));
}

TEST_CASE("bundled lexicon matches the defaults") {
  std::ifstream in(std::string(EMETREE_SOURCE_DIR) + "/data/lexicons/default.lex");
  REQUIRE(in);
  const auto lex = TokenizerLexicon::load(in);
  const auto def = TokenizerLexicon::defaults();
  CHECK(lex.abbreviations == def.abbreviations);
  CHECK(lex.special == def.special);
  CHECK(lex.th_words == def.th_words);
  CHECK(lex.th_prefixes == def.th_prefixes);
}
