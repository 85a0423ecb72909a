#include <doctest.h>

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "emetree/decoder.hpp"
#include "emetree/labelspace.hpp"
#include "support/brute_force.hpp"
#include "support/random_trees.hpp"

using namespace emetree;

TEST_CASE("single word") {
  SpanScoreTable t(1, {"S"});
  t.at(0, 1, 1) = 2.0;
  auto d = decode(t);
  CHECK(d.score == 2.0);
  CHECK(render_tree(d.tree) == "(S (X w0))");
  REQUIRE(d.spans.size() == 1);
  CHECK(d.spans[0].label.str() == "S");
}

TEST_CASE("hand-filled n=3 table matches exhaustive labelings") {
  SpanScoreTable t(3, {"NP", "S"});
  // label order: NULL, NP, S
  const double v[3][4][3] = {
      {{0, 0, 0}, {0.1, 0.5, -1}, {0.0, 0.9, 0.2}, {-5, 0.3, 1.0}},
      {{0, 0, 0}, {0, 0, 0}, {0.2, -0.4, 0.1}, {0.0, 0.7, 0.4}},
      {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}, {0.3, 0.6, -0.2}},
  };
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i + 1; j <= 3; ++j)
      for (std::size_t l = 0; l < 3; ++l) t.at(i, j, l) = v[i][j][l];
  auto d = decode(t, {true, {"a", "b", "c"}, {"D", "N", "V"}, "ROOT"});
  CHECK(d.score == doctest::Approx(testing::brute_force_full(t, true)).epsilon(1e-12));
  CHECK(d.score == doctest::Approx(testing::brute_force_best(t, true)).epsilon(1e-12));
  // (0,3,S)=1.0 + (0,2,NP)=0.9 + leaves (0,1,NP)=0.5 (1,2,NULL)=0.2 (2,3,NP)=0.6
  CHECK(d.score == doctest::Approx(3.2));
  CHECK(render_tree(d.tree) == "(S (NP (NP (D a)) (N b)) (NP (V c)))");
}

TEST_CASE("random tables agree with brute force") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 6;
    const std::size_t labels = 1 + rng() % 3;
    const auto t = testing::random_table(rng, n, labels);
    const bool root = trial % 2 == 0;
    DecodeOptions o;
    o.require_root_label = root;
    const auto d = decode(t, o);
    CHECK(std::abs(d.score - testing::brute_force_best(t, root)) < 1e-9);
    if (n <= 4) CHECK(std::abs(d.score - testing::brute_force_full(t, root)) < 1e-9);
  }
}

TEST_CASE("ties go to the lowest label, then the lowest split") {
  SpanScoreTable t(3, {"A", "B"});
  auto d = decode(t);
  CHECK(render_tree(d.tree) == "(A (X w0) (X w1) (X w2))");
  CHECK(d.score == 0.0);

  // Splits at 1 and 2 score the same; the split at 1 wins.
  t.at(0, 2, 2) = 1.0;
  t.at(1, 3, 2) = 1.0;
  CHECK(render_tree(decode(t).tree) == "(A (X w0) (B (X w1) (X w2)))");
}

TEST_CASE("root label") {
  SpanScoreTable t(2, {"A"});
  t.at(0, 2, 1) = -3.0;
  CHECK(render_tree(decode(t).tree) == "(A (X w0) (X w1))");

  DecodeOptions free;
  free.require_root_label = false;
  auto d = decode(t, free);
  CHECK(d.score == 0.0);
  CHECK(render_tree(d.tree) == "(ROOT (X w0) (X w1))");
}

TEST_CASE("decode errors") {
  CHECK_THROWS_AS(decode(SpanScoreTable(0, {"A"})), std::invalid_argument);
  CHECK_THROWS_AS(decode(SpanScoreTable(2, {})), std::invalid_argument);
  DecodeOptions o;
  o.words = {"only"};
  CHECK_THROWS_AS(decode(SpanScoreTable(2, {"A"}), o), std::invalid_argument);
  DecodeOptions loose;
  loose.require_root_label = false;
  CHECK_NOTHROW(decode(SpanScoreTable(2, {}), loose));
}

TEST_CASE("collapsed labels are expanded in the output") {
  SpanScoreTable t(2, {"NP::CP"});
  t.at(0, 2, 1) = 1.0;
  auto d = decode(t);
  CHECK(render_tree(d.tree) == "(NP (CP (X w0) (X w1)))");
  CHECK(d.spans[0].label.str() == "NP::CP");
}

TEST_CASE("oracle scores") {
  const auto gold = parse_tree("(IP-MAT (NP-SBJ (D the) (N dog)) (VBD ran))");
  const auto table = oracle_scores(gold);
  std::size_t positive = 0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i + 1; j <= 3; ++j)
      for (std::size_t l = 0; l < table.num_labels(); ++l) positive += table.at(i, j, l) > 0;
  CHECK(positive == 2);
  CHECK(decode(table, options_from(gold)).tree == gold);

  const auto chain = oracle_scores(parse_tree("(NP (CP (C that) (VBD ran)))"));
  auto idx = chain.label_index("NP::CP");
  REQUIRE(idx);
  CHECK(chain.at(0, 2, *idx) == 1.0);
  CHECK_FALSE(chain.label_index("NP"));

  const auto wide = oracle_scores(gold, {"QP", "NP-SBJ"});
  CHECK(wide.num_labels() == 4);
}

TEST_CASE("oracle round trip on random trees") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    const auto t = testing::random_tree(rng);
    const auto normal = expand_label(collapse_unaries(t));
    CHECK(decode(oracle_scores(t), options_from(t)).tree == normal);
  }
}

TEST_CASE("binary table round trip") {
  std::mt19937_64 rng(1);
  auto t = testing::random_table(rng, 5, 3);
  t.at(0, 5, 0) = -std::numeric_limits<double>::max();
  std::stringstream ss;
  t.write(ss);
  CHECK(SpanScoreTable::read(ss) == t);

  std::stringstream bad("NOPE");
  CHECK_THROWS(SpanScoreTable::read(bad));
  std::stringstream truncated(ss.str().substr(0, 20));
  CHECK_THROWS(SpanScoreTable::read(truncated));
}

TEST_CASE("cubic scaling") {
  auto time_for = [](std::size_t n) {
    std::mt19937_64 rng(n);
    const auto t = testing::random_table(rng, n, 4);
    const auto start = std::chrono::steady_clock::now();
    decode(t);
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };
  time_for(64);  // warm up
  const double small = std::max(time_for(64), 1e-4);
  const double large = time_for(128);
  CHECK(large / small <= 32.0);
}
