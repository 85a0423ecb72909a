#include <doctest.h>

#include "emetree/tree.hpp"
#include "support/random_trees.hpp"

using namespace emetree;

TEST_CASE("parse PPCEME labels") {
  auto t = parse_tree("(IP-MAT (NP-SBJ (D the) (N schereffe)) (VBD shewed))");
  CHECK(t.root.label.category == "IP");
  CHECK(t.root.label.ftags == std::vector<std::string>{"MAT"});
  REQUIRE(t.root.children.size() == 2);
  CHECK(t.root.children[0].label.category == "NP");
  CHECK(t.root.children[0].label.ftags == std::vector<std::string>{"SBJ"});
  CHECK(t.root.children[1].is_preterminal());
  CHECK(t.root.children[1].tag == "VBD");
}

TEST_CASE("minimal tree") {
  auto t = parse_tree("(X (Y a))");
  CHECK(t.root.label.category == "X");
  REQUIRE(t.root.children.size() == 1);
  CHECK(t.root.children[0].tag == "Y");
  CHECK(t.root.children[0].word == "a");
}

TEST_CASE("unbalanced input reports position") {
  try {
    parse_trees("(A (B c) (B d)");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(std::string(e.what()).find("end of input") != std::string::npos);
    CHECK(e.line() == 1);
  }
  CHECK_THROWS_AS(parse_trees("(A (B c)))"), SyntaxError);
  CHECK_THROWS_AS(parse_trees("(A )"), SyntaxError);
}

TEST_CASE("wrapper and id") {
  auto trees = parse_trees("( (IP-MAT (PRO he) (VBD came)) (ID AUTHOR-E1-P1,2.3))\n( (X (Y z)))");
  REQUIRE(trees.size() == 2);
  CHECK(trees[0].id == "AUTHOR-E1-P1,2.3");
  CHECK(trees[0].root.label.str() == "IP-MAT");
  CHECK_FALSE(trees[1].id);
  CHECK(parse_trees(render_tree(trees[0])) == std::vector<Tree>{trees[0]});
}

TEST_CASE("label grammar") {
  auto l = NodeLabel::parse("NP-SBJ-PRN-12");
  CHECK(l.category == "NP");
  CHECK(l.ftags == std::vector<std::string>{"SBJ", "PRN"});
  CHECK(l.index == 12u);
  CHECK(l.str() == "NP-SBJ-PRN-12");

  auto chain = NodeLabel::parse("NP-SBJ::CP-FRL");
  CHECK(chain.is_collapsed());
  CHECK(chain.category == "NP");
  REQUIRE(chain.chain.size() == 1);
  CHECK(chain.chain[0].ftags == std::vector<std::string>{"FRL"});
  CHECK(chain.str() == "NP-SBJ::CP-FRL");
  CHECK(chain.parts().size() == 2);

  CHECK_THROWS_AS(NodeLabel::parse(""), MalformedLabel);
  CHECK_THROWS_AS(NodeLabel::parse("NP--SBJ"), MalformedLabel);
}

TEST_CASE("render") {
  auto t = parse_tree("(NP-SBJ (D the) (N schereffe))");
  CHECK(render_tree(t) == "(NP-SBJ (D the) (N schereffe))");
  CHECK(render_node(Node::preterminal("N", "dog")) == "(N dog)");

  auto pretty = render_tree(parse_tree("(IP (NP (D the) (N dog)) (VBD ran))"), RenderStyle::pretty);
  CHECK(pretty.find('\n') != std::string::npos);
  CHECK(parse_tree(pretty) == parse_tree("(IP (NP (D the) (N dog)) (VBD ran))"));
}

TEST_CASE("random round trip") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 1000; ++i) {
    auto t = testing::random_tree(rng);
    if (i % 3 == 0) t.id = "T" + std::to_string(i);
    const auto style = i % 2 ? RenderStyle::pretty : RenderStyle::compact;
    auto back = parse_trees(render_tree(t, style));
    REQUIRE(back.size() == 1);
    CHECK(back[0] == t);
  }
}

namespace {

// Recursive count of internal nodes, independent of tree_spans.
std::size_t count_spans(const Node& n) {
  if (n.is_preterminal()) return 0;
  std::size_t total = 1;
  for (const auto& c : n.children) total += count_spans(c);
  return total;
}

}  // namespace

TEST_CASE("spans") {
  auto spans = tree_spans(parse_tree("(IP-MAT (NP-SBJ (D the) (N dog)) (VBD ran))"));
  REQUIRE(spans.size() == 2);
  CHECK(spans[0].start == 0);
  CHECK(spans[0].end == 3);
  CHECK(spans[0].label.str() == "IP-MAT");
  CHECK(spans[1].start == 0);
  CHECK(spans[1].end == 2);
  CHECK(spans[1].label.str() == "NP-SBJ");

  CHECK(tree_spans(parse_tree("(N dog)")).empty());

  // Depth-5 right-branching tree over 6 words.
  auto rb = parse_tree("(A (W a) (B (W b) (C (W c) (D (W d) (E (W e) (W f))))))");
  auto rb_spans = tree_spans(rb);
  CHECK(rb_spans.size() == 5);
  CHECK(rb_spans.size() == count_spans(rb.root));
  for (std::size_t k = 0; k < rb_spans.size(); ++k) {
    CHECK(rb_spans[k].start == k);
    CHECK(rb_spans[k].end == 6);
  }
}

TEST_CASE("yield and tags") {
  auto t = parse_tree("(IP (NP (D the) (N dog)) (VBD ran))");
  CHECK(tree_words(t) == std::vector<std::string>{"the", "dog", "ran"});
  CHECK(tree_tags(t) == std::vector<std::string>{"D", "N", "VBD"});
  CHECK(count_internal(t.root) == 2);
}

TEST_CASE("validation flags oddities") {
  CHECK(validate_tree(parse_tree("(IP (NP (D the) (N dog)) (VBD ran))")).empty());
  CHECK_FALSE(validate_tree(parse_tree("(IP (NP-SBJ-SBJ (N dog)))")).empty());
}
