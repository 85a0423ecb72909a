#include <doctest.h>

#include <set>
#include <stdexcept>

#include "emetree/splitgen.hpp"

using namespace emetree;

namespace {

std::vector<CorpusFile> twelve_files() {
  std::vector<CorpusFile> files;
  for (int p = 0; p < 3; ++p)
    for (int k = 0; k < 4; ++k) {
      const std::string id = "text" + std::to_string(k) + "-e" + std::to_string(p + 1);
      files.push_back({id, id, static_cast<Period>(p), 1000});
    }
  return files;
}

// Exhaustive check written against the plan's raw maps.
void brute_force_check(const SplitPlan& plan, const std::vector<CorpusFile>& files) {
  for (const auto& fold : plan.folds) {
    CHECK(fold.size() == files.size());
    std::set<std::pair<Section, Period>> seen;
    for (const auto& f : files) {
      REQUIRE(fold.count(f.file_id));
      seen.insert({fold.at(f.file_id), f.period});
      for (const auto& g : files)
        if (g.source_id == f.source_id) CHECK(fold.at(g.file_id) == fold.at(f.file_id));
    }
    CHECK(seen.size() == 9);  // every period in every section
  }
}

}  // namespace

TEST_CASE("period and source from file names") {
  CHECK(period_from_name("armin-e2-p1") == Period::e2);
  CHECK(period_from_name("e3") == Period::e3);
  CHECK_FALSE(period_from_name("tree1"));
  CHECK_FALSE(period_from_name("heel1"));
  CHECK(source_from_name("armin-e2-p1") == "armin-e2");
  CHECK(source_from_name("armin-e2-p2") == "armin-e2");
  CHECK(source_from_name("plain") == "plain");
}

TEST_CASE("twelve equal files, four folds") {
  const auto files = twelve_files();
  const auto plan = generate_splits(files, 4, {0.5, 0.25, 0.25}, 3);
  REQUIRE(plan.folds.size() == 4);
  brute_force_check(plan, files);
  auto v = validate_splits(plan, files, 0.02);
  CHECK(v.passed());
  CHECK(v.sources == 12);
}

TEST_CASE("deterministic under a fixed seed") {
  const auto files = twelve_files();
  CHECK(generate_splits(files, 4, {0.5, 0.25, 0.25}, 9).folds == generate_splits(files, 4, {0.5, 0.25, 0.25}, 9).folds);
}

TEST_CASE("shared sources stay together") {
  std::vector<CorpusFile> files;
  for (int p = 0; p < 3; ++p)
    for (int k = 0; k < 6; ++k) {
      const std::string src = "s" + std::to_string(k) + "-e" + std::to_string(p + 1);
      files.push_back({src + "-p1", src, static_cast<Period>(p), 300u + 10u * k});
      files.push_back({src + "-p2", src, static_cast<Period>(p), 200u + 5u * k});
    }
  const auto plan = generate_splits(files, 8, {0.6, 0.2, 0.2}, 1);
  for (const auto& fold : plan.folds)
    for (std::size_t i = 0; i < files.size(); i += 2) CHECK(fold.at(files[i].file_id) == fold.at(files[i + 1].file_id));
  auto v = validate_splits(plan, files, 0.5);
  for (const auto& c : v.checks)
    if (c.name == "source_atomicity") CHECK(c.passed);
  for (std::size_t k = 1; k < v.coverage_by_fold.size(); ++k)
    CHECK(v.coverage_by_fold[k] >= v.coverage_by_fold[k - 1]);
}

TEST_CASE("validator catches violations") {
  std::vector<CorpusFile> files{{"a-e1-1", "a-e1", Period::e1, 10}, {"a-e1-2", "a-e1", Period::e1, 10}};
  SplitPlan plan;
  plan.folds.push_back({{"a-e1-1", Section::train}, {"a-e1-2", Section::test}});
  auto v = validate_splits(plan, files, 1.0, 1.0);
  CHECK_FALSE(v.passed());
  bool atomicity_failed = false;
  for (const auto& c : v.checks) atomicity_failed |= c.name == "source_atomicity" && !c.passed;
  CHECK(atomicity_failed);

  // 70/15/15 against 90/5/5.
  std::vector<CorpusFile> three{{"t-e1", "t-e1", Period::e1, 70}, {"d-e1", "d-e1", Period::e1, 15}, {"s-e1", "s-e1", Period::e1, 15}};
  SplitPlan skewed;
  skewed.folds.push_back({{"t-e1", Section::train}, {"d-e1", Section::dev}, {"s-e1", Section::test}});
  auto sv = validate_splits(skewed, three, 0.02);
  for (const auto& c : sv.checks)
    if (c.name.rfind("share_", 0) == 0) CHECK_FALSE(c.passed);

  SplitPlan unknown;
  unknown.folds.push_back({{"nope", Section::train}});
  CHECK_THROWS_AS(validate_splits(unknown, files, 0.02), std::invalid_argument);

  SplitPlan partial;
  partial.folds.push_back({{"a-e1-1", Section::train}});
  auto pv = validate_splits(partial, files, 1.0, 1.0);
  CHECK(pv.checks.front().name == "partition");
  CHECK_FALSE(pv.checks.front().passed);
}

TEST_CASE("generation preconditions") {
  std::vector<CorpusFile> few{{"a-e1", "a-e1", Period::e1, 5}, {"b-e2", "b-e2", Period::e2, 5}};
  CHECK_THROWS_AS(generate_splits(few), std::invalid_argument);

  auto files = twelve_files();
  files.push_back({"mixed-e2", files[0].source_id, Period::e2, 5});
  CHECK_THROWS_AS(generate_splits(files), std::invalid_argument);
}

TEST_CASE("oversized sources are kept in train with a warning") {
  auto files = twelve_files();
  files[0].token_count = 100000;
  const auto plan = generate_splits(files, 2, {0.5, 0.25, 0.25}, 0);
  CHECK(plan.warnings.size() == 1);
  for (const auto& fold : plan.folds) CHECK(fold.at(files[0].file_id) == Section::train);
}

TEST_CASE("section shares sum to one") {
  const auto files = twelve_files();
  const auto plan = generate_splits(files, 3, {0.5, 0.25, 0.25}, 5);
  for (std::size_t k = 0; k < 3; ++k) {
    auto s = section_shares(plan, k, files);
    CHECK(s[0] + s[1] + s[2] == doctest::Approx(1.0));
  }
}
