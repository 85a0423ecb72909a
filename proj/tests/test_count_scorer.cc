#include <doctest.h>

#include <cmath>

#include "emetree/count_scorer.hpp"

using namespace emetree;

TEST_CASE("length buckets") {
  CHECK(length_bucket(1) == 1);
  CHECK(length_bucket(5) == 5);
  CHECK(length_bucket(7) == 6);
  CHECK(length_bucket(8) == 8);
  CHECK(length_bucket(11) == 8);
  CHECK(length_bucket(19) == 12);
  CHECK(length_bucket(40) == 20);
}

TEST_CASE("smoothed relative frequencies on a two-tree corpus") {
  // Labels NULL, NP, S, so V = 3. Contexts by hand:
  //   (1,N,N)  NULL x2      (1,V,V)  NULL x2     (1,D,D) NULL x1
  //   (2,D,N)  NP x1        (2,N,V)  NULL x1     (2,N,V,whole) S x1
  //   (3,D,V,whole) S x1
  const auto scorer = CountScorer::train(parse_trees("(S (NP (D a) (N b)) (V c))\n(S (N x) (V y))"));
  CHECK(scorer.labels() == std::vector<std::string>{"NP", "S"});

  const std::vector<std::string> tags{"N", "V"};
  const auto t = scorer.score(tags);
  CHECK(t.num_labels() == 3);
  CHECK(t.at(0, 2, 2) == doctest::Approx(std::log(2.0 / 4.0)).epsilon(1e-12));
  CHECK(t.at(0, 2, 0) == doctest::Approx(std::log(1.0 / 4.0)).epsilon(1e-12));
  CHECK(t.at(0, 1, 0) == doctest::Approx(std::log(3.0 / 5.0)).epsilon(1e-12));
  CHECK(t.at(0, 1, 1) == doctest::Approx(std::log(1.0 / 5.0)).epsilon(1e-12));
  CHECK(std::abs(t.at(1, 2, 0) - std::log(3.0 / 5.0)) < 1e-12);

  const std::vector<std::string> three{"D", "N", "V"};
  const auto u = scorer.score(three);
  CHECK(std::abs(u.at(0, 2, 1) - std::log(2.0 / 4.0)) < 1e-12);
  CHECK(std::abs(u.at(1, 3, 0) - std::log(2.0 / 4.0)) < 1e-12);
  CHECK(std::abs(u.at(0, 3, 2) - std::log(2.0 / 4.0)) < 1e-12);

  // Unseen context: uniform -log V.
  const std::vector<std::string> odd{"V", "D"};
  CHECK(std::abs(scorer.score(odd).at(0, 2, 1) + std::log(3.0)) < 1e-12);
}

TEST_CASE("a tree's own spans win their cells") {
  const auto tree = parse_tree("(IP-MAT (NP-SBJ (D the) (N dog)) (VBD ran) (PP (P to) (NP (NPR London))))");
  const auto scorer = CountScorer::train({tree});
  const auto tags = tree_tags(tree);
  const auto t = scorer.score(tags);
  for (const auto& s : tree_spans(tree)) {
    auto idx = t.label_index(s.label.str());
    REQUIRE(idx);
    CHECK(t.best_label(s.start, s.end) == *idx);
  }
}

TEST_CASE("vocabulary is closed over training labels") {
  const auto scorer = CountScorer::train(parse_trees("(S (NP (N a)) (V b))"));
  const std::vector<std::string> tags{"N", "V", "N"};
  const auto t = scorer.score(tags);
  CHECK_FALSE(t.label_index("VP"));
  CHECK(t.labels() == std::vector<std::string>{"<null>", "NP", "S"});
  CHECK_THROWS_AS(CountScorer::train({}), std::invalid_argument);
}

TEST_CASE("collapsed chains are single labels") {
  const auto scorer = CountScorer::train(parse_trees("(NP (CP (C that) (VBD ran)))"));
  CHECK(scorer.labels() == std::vector<std::string>{"NP::CP"});
}

TEST_CASE("most frequent tag baseline") {
  const auto lex = PosLexicon::build(parse_trees(
      "(S (N love) (N love) (N love) (VB love))\n"
      "(S (N mark) (N mark) (VB mark) (VB mark))\n"
      "(S (D the) (ADJ good) (NS men) (NS women) (NS kings))"));
  CHECK(lex.tag("love") == "N");
  CHECK(lex.tag("mark") == "N");  // tie: N < VB
  CHECK(lex.tag("unseen") == lex.default_tag);
  CHECK(lex.default_tag == "N");  // N 5 beats NS 3; D is closed class
  const std::vector<std::string> words{"the", "love", "xyzzy"};
  CHECK(tag_pos_baseline(lex, words) == std::vector<std::string>{"D", "N", "N"});
}

TEST_CASE("open class") {
  CHECK(is_open_class("N"));
  CHECK(is_open_class("NPRS"));
  CHECK(is_open_class("VBD"));
  CHECK(is_open_class("ADJR"));
  CHECK_FALSE(is_open_class("D"));
  CHECK_FALSE(is_open_class("NEG"));
  CHECK_FALSE(is_open_class("NUM"));
  CHECK_FALSE(is_open_class("P"));
}
