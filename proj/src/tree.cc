#include "emetree/tree.hpp"

#include <algorithm>
#include <cctype>

namespace emetree {

SyntaxError::SyntaxError(const std::string& what, std::size_t line, std::size_t column)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                         ": " + what),
      line_(line),
      column_(column) {}

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

bool bad_label_char(char c) {
  return c == '(' || c == ')' || std::isspace(static_cast<unsigned char>(c));
}

NodeLabel parse_part(std::string_view part, std::string_view whole) {
  if (part.empty()) throw MalformedLabel("empty label part in '" + std::string(whole) + "'");
  if (std::any_of(part.begin(), part.end(), bad_label_char))
    throw MalformedLabel("illegal character in label '" + std::string(whole) + "'");

  std::vector<std::string_view> segments;
  std::size_t from = 0;
  while (true) {
    auto dash = part.find('-', from);
    segments.push_back(part.substr(from, dash == std::string_view::npos ? dash : dash - from));
    if (dash == std::string_view::npos) break;
    from = dash + 1;
  }
  for (auto seg : segments)
    if (seg.empty()) throw MalformedLabel("empty segment in label '" + std::string(whole) + "'");

  NodeLabel label;
  label.category = std::string(segments.front());
  std::size_t last = segments.size();
  if (segments.size() > 1 && all_digits(segments.back())) {
    label.index = static_cast<unsigned>(std::stoul(std::string(segments.back())));
    --last;
  }
  for (std::size_t i = 1; i < last; ++i) label.ftags.emplace_back(segments[i]);
  return label;
}

}  // namespace

NodeLabel NodeLabel::parse(std::string_view surface) {
  if (surface.empty()) throw MalformedLabel("empty label");
  std::vector<NodeLabel> parts;
  std::size_t from = 0;
  while (true) {
    auto sep = surface.find("::", from);
    auto piece = surface.substr(from, sep == std::string_view::npos ? sep : sep - from);
    parts.push_back(parse_part(piece, surface));
    if (sep == std::string_view::npos) break;
    from = sep + 2;
  }
  NodeLabel top = std::move(parts.front());
  top.chain.assign(std::make_move_iterator(parts.begin() + 1), std::make_move_iterator(parts.end()));
  return top;
}

std::string NodeLabel::part_str() const {
  std::string out = category;
  for (const auto& f : ftags) out += "-" + f;
  if (index) out += "-" + std::to_string(*index);
  return out;
}

std::string NodeLabel::str() const {
  std::string out = part_str();
  for (const auto& part : chain) out += "::" + part.str();
  return out;
}

std::vector<NodeLabel> NodeLabel::parts() const {
  std::vector<NodeLabel> out;
  NodeLabel head = *this;
  head.chain.clear();
  out.push_back(std::move(head));
  for (const auto& part : chain) {
    auto sub = part.parts();
    out.insert(out.end(), sub.begin(), sub.end());
  }
  return out;
}

Node Node::internal(NodeLabel label, std::vector<Node> children) {
  if (children.empty()) throw std::invalid_argument("internal node '" + label.str() + "' needs children");
  Node n;
  n.label = std::move(label);
  n.children = std::move(children);
  return n;
}

Node Node::preterminal(std::string tag, std::string word) {
  Node n;
  n.tag = std::move(tag);
  n.word = std::move(word);
  return n;
}

std::string Node::label_str() const { return is_preterminal() ? tag : label.str(); }

// ---------------------------------------------------------------------------
// Reader

namespace {

struct Token {
  enum Kind { open, close, atom, end } kind;
  std::string_view text;
  std::size_t line;
  std::size_t column;
};

class Lexer {
public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_space();
    Token tok{Token::end, {}, line_, column_};
    if (pos_ >= text_.size()) return tok;
    char c = text_[pos_];
    if (c == '(' || c == ')') {
      tok.kind = c == '(' ? Token::open : Token::close;
      tok.text = text_.substr(pos_, 1);
      advance();
      return tok;
    }
    std::size_t start = pos_;
    while (pos_ < text_.size() && !bad_label_char(text_[pos_])) advance();
    tok.kind = Token::atom;
    tok.text = text_.substr(start, pos_ - start);
    return tok;
  }

private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) advance();
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

// Raw S-expression before labels are interpreted.
struct Sexp {
  std::optional<std::string_view> head;  // absent for `( ... )` wrappers
  std::vector<std::string_view> atoms;
  std::vector<Sexp> kids;
  std::size_t line = 0, column = 0;
};

Sexp read_sexp(Lexer& lex, const Token& open) {
  Sexp s;
  s.line = open.line;
  s.column = open.column;
  Token tok = lex.next();
  if (tok.kind == Token::atom) {
    s.head = tok.text;
    tok = lex.next();
  }
  while (tok.kind != Token::close) {
    switch (tok.kind) {
      case Token::end:
        throw SyntaxError("unexpected end of input, unclosed '(' opened at line " +
                              std::to_string(open.line) + ", column " + std::to_string(open.column),
                          tok.line, tok.column);
      case Token::open:
        s.kids.push_back(read_sexp(lex, tok));
        break;
      case Token::atom:
        s.atoms.push_back(tok.text);
        break;
      case Token::close:
        break;
    }
    tok = lex.next();
  }
  return s;
}

Node to_node(const Sexp& s) {
  auto where = [&](const std::string& msg) {
    return msg + " at line " + std::to_string(s.line) + ", column " + std::to_string(s.column);
  };
  if (!s.head) throw MalformedLabel(where("missing label"));
  if (!s.atoms.empty() && !s.kids.empty()) throw SyntaxError("node mixes words and subtrees", s.line, s.column);
  if (s.atoms.size() > 1) throw SyntaxError("preterminal has more than one word", s.line, s.column);
  if (s.atoms.empty() && s.kids.empty()) throw SyntaxError("node has no children", s.line, s.column);
  if (s.atoms.size() == 1) return Node::preterminal(std::string(*s.head), std::string(s.atoms.front()));

  NodeLabel label;
  try {
    label = NodeLabel::parse(*s.head);
  } catch (const MalformedLabel& e) {
    throw MalformedLabel(where(e.what()));
  }
  std::vector<Node> children;
  children.reserve(s.kids.size());
  for (const auto& k : s.kids) children.push_back(to_node(k));
  return Node::internal(std::move(label), std::move(children));
}

Tree to_tree(const Sexp& s) {
  if (s.head) return Tree{to_node(s), std::nullopt};
  if (!s.atoms.empty()) throw SyntaxError("unlabeled wrapper contains bare words", s.line, s.column);

  Tree tree;
  const Sexp* body = nullptr;
  for (const auto& k : s.kids) {
    if (k.head && *k.head == "ID" && k.kids.empty() && k.atoms.size() == 1) {
      tree.id = std::string(k.atoms.front());
    } else if (body) {
      throw SyntaxError("unlabeled wrapper holds more than one tree", s.line, s.column);
    } else {
      body = &k;
    }
  }
  if (!body) throw SyntaxError("unlabeled wrapper holds no tree", s.line, s.column);
  if (!body->head) throw MalformedLabel("missing label at line " + std::to_string(body->line) + ", column " +
                                        std::to_string(body->column));
  tree.root = to_node(*body);
  return tree;
}

}  // namespace

std::vector<Tree> parse_trees(std::string_view text) {
  Lexer lex(text);
  std::vector<Tree> out;
  for (Token tok = lex.next(); tok.kind != Token::end; tok = lex.next()) {
    if (tok.kind == Token::close) throw SyntaxError("unmatched ')'", tok.line, tok.column);
    if (tok.kind == Token::atom)
      throw SyntaxError("text outside brackets: '" + std::string(tok.text) + "'", tok.line, tok.column);
    out.push_back(to_tree(read_sexp(lex, tok)));
  }
  return out;
}

Tree parse_tree(std::string_view text) {
  auto trees = parse_trees(text);
  if (trees.size() != 1)
    throw SyntaxError("expected exactly one tree, found " + std::to_string(trees.size()), 1, 1);
  return std::move(trees.front());
}

// ---------------------------------------------------------------------------
// Writer

namespace {

void write_compact(const Node& n, std::string& out) {
  out += '(';
  if (n.is_preterminal()) {
    out += n.tag;
    out += ' ';
    out += n.word;
  } else {
    out += n.label.str();
    for (const auto& c : n.children) {
      out += ' ';
      write_compact(c, out);
    }
  }
  out += ')';
}

void write_pretty(const Node& n, std::size_t indent, std::string& out) {
  bool flat = n.is_preterminal() ||
              std::all_of(n.children.begin(), n.children.end(), [](const Node& c) { return c.is_preterminal(); });
  if (flat) {
    write_compact(n, out);
    return;
  }
  std::string head = n.label.str();
  out += '(';
  out += head;
  out += ' ';
  std::size_t child_indent = indent + head.size() + 2;
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    if (i > 0) {
      out += '\n';
      out.append(child_indent, ' ');
    }
    write_pretty(n.children[i], child_indent, out);
  }
  out += ')';
}

}  // namespace

std::string render_node(const Node& node, RenderStyle style) {
  std::string out;
  if (style == RenderStyle::compact)
    write_compact(node, out);
  else
    write_pretty(node, 0, out);
  return out;
}

std::string render_tree(const Tree& tree, RenderStyle style) {
  if (!tree.id) return render_node(tree.root, style);
  std::string out = "( ";
  if (style == RenderStyle::compact) {
    write_compact(tree.root, out);
    out += " (ID " + *tree.id + "))";
  } else {
    write_pretty(tree.root, 2, out);
    out += "\n  (ID " + *tree.id + "))";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Traversal

namespace {

std::size_t collect_spans(const Node& n, std::size_t start, std::vector<LabeledSpan>& out) {
  if (n.is_preterminal()) return start + 1;
  std::size_t slot = out.size();
  out.push_back({start, start, n.label});
  std::size_t end = start;
  for (const auto& c : n.children) end = collect_spans(c, end, out);
  out[slot].end = end;
  return end;
}

}  // namespace

std::vector<LabeledSpan> tree_spans(const Tree& tree) {
  std::vector<LabeledSpan> out;
  collect_spans(tree.root, 0, out);
  return out;
}

std::vector<std::string> tree_words(const Tree& tree) {
  std::vector<std::string> out;
  for_each_node(tree.root, [&](const Node& n) {
    if (n.is_preterminal()) out.push_back(n.word);
  });
  return out;
}

std::vector<std::string> tree_tags(const Tree& tree) {
  std::vector<std::string> out;
  for_each_node(tree.root, [&](const Node& n) {
    if (n.is_preterminal()) out.push_back(n.tag);
  });
  return out;
}

std::size_t count_internal(const Node& node) {
  std::size_t total = 0;
  for_each_node(node, [&](const Node& n) { total += n.is_preterminal() ? 0 : 1; });
  return total;
}

std::vector<std::string> validate_tree(const Tree& tree) {
  std::vector<std::string> issues;
  auto check_label = [&](const NodeLabel& part) {
    if (part.category.empty()) issues.push_back("empty category");
    if (part.category.find("::") != std::string::npos) issues.push_back("category contains '::': " + part.category);
    auto sorted = part.ftags;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      issues.push_back("duplicate function tag on " + part.part_str());
  };
  for_each_node(tree.root, [&](const Node& n) {
    if (n.is_preterminal()) {
      if (n.tag.empty()) issues.push_back("empty preterminal tag");
      auto dash = n.tag.rfind('-');
      if (dash != std::string::npos && dash > 0 && all_digits(std::string_view(n.tag).substr(dash + 1)))
        issues.push_back("co-index on preterminal tag: " + n.tag);
      return;
    }
    for (const auto& part : n.label.parts()) check_label(part);
  });
  return issues;
}

}  // namespace emetree
