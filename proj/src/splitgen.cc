#include "emetree/splitgen.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

namespace emetree {

std::string_view to_string(Section s) {
  switch (s) {
    case Section::train: return "train";
    case Section::dev: return "dev";
    case Section::test: return "test";
  }
  return "train";
}

std::string_view to_string(Period p) {
  switch (p) {
    case Period::e1: return "e1";
    case Period::e2: return "e2";
    case Period::e3: return "e3";
  }
  return "e1";
}

Section parse_section(std::string_view s) {
  if (s == "train") return Section::train;
  if (s == "dev") return Section::dev;
  if (s == "test") return Section::test;
  throw std::invalid_argument("unknown section '" + std::string(s) + "'");
}

Period parse_period(std::string_view s) {
  if (s == "e1") return Period::e1;
  if (s == "e2") return Period::e2;
  if (s == "e3") return Period::e3;
  throw std::invalid_argument("unknown period '" + std::string(s) + "'");
}

namespace {

bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

// Offset of the first delimited e1/e2/e3 token.
std::optional<std::size_t> period_offset(std::string_view name) {
  for (std::size_t i = 0; i + 2 <= name.size(); ++i) {
    if (name[i] != 'e' || name[i + 1] < '1' || name[i + 1] > '3') continue;
    bool left = i == 0 || !is_alnum(name[i - 1]);
    bool right = i + 2 == name.size() || !is_alnum(name[i + 2]);
    if (left && right) return i;
  }
  return std::nullopt;
}

}  // namespace

std::optional<Period> period_from_name(std::string_view file_name) {
  auto at = period_offset(file_name);
  if (!at) return std::nullopt;
  return parse_period(file_name.substr(*at, 2));
}

std::string source_from_name(std::string_view file_name) {
  auto at = period_offset(file_name);
  if (!at) return std::string(file_name);
  return std::string(file_name.substr(0, *at + 2));
}

std::vector<std::string> SplitPlan::files_in(std::size_t fold, Section section) const {
  std::vector<std::string> out;
  for (const auto& [id, s] : folds.at(fold))
    if (s == section) out.push_back(id);
  return out;
}

// ---------------------------------------------------------------------------
// Generation

namespace {

struct SourceGroup {
  std::string id;
  Period period;
  std::size_t tokens = 0;
  std::vector<std::string> files;
  std::size_t uses = 0;  // folds in which it sat in dev or test
};

// Fisher-Yates with a fixed engine, so plans do not depend on the standard
// library's distribution implementations.
template <typename T>
void shuffle(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng() % i]);
}

}  // namespace

SplitPlan generate_splits(const std::vector<CorpusFile>& files, std::size_t folds, SplitTargets targets,
                          std::uint64_t seed) {
  if (folds == 0) throw std::invalid_argument("generate_splits: need at least one fold");

  std::map<std::string, SourceGroup> by_id;
  std::set<std::string> seen_files;
  for (const auto& f : files) {
    if (!seen_files.insert(f.file_id).second) throw std::invalid_argument("duplicate file id '" + f.file_id + "'");
    auto [it, fresh] = by_id.try_emplace(f.source_id, SourceGroup{f.source_id, f.period, 0, {}, 0});
    if (!fresh && it->second.period != f.period)
      throw std::invalid_argument("source '" + f.source_id + "' spans more than one period");
    it->second.tokens += f.token_count;
    it->second.files.push_back(f.file_id);
  }

  std::array<std::vector<SourceGroup*>, 3> by_period;
  std::array<double, 3> period_tokens{};
  for (auto& [id, g] : by_id) {
    by_period[static_cast<int>(g.period)].push_back(&g);
    period_tokens[static_cast<int>(g.period)] += static_cast<double>(g.tokens);
  }
  for (int p = 0; p < 3; ++p)
    if (by_period[p].size() < 3)
      throw std::invalid_argument("period " + std::string(to_string(static_cast<Period>(p))) + " has " +
                                  std::to_string(by_period[p].size()) + " source groups; at least 3 are required");

  SplitPlan plan;
  plan.seed = seed;
  plan.targets = targets;

  // A group that would overshoot an empty section by more than the section's
  // own target can never be placed.
  for (int p = 0; p < 3; ++p) {
    const double budget = 2.0 * std::max(targets.dev, targets.test) * period_tokens[p];
    for (const auto* g : by_period[p])
      if (static_cast<double>(g->tokens) >= budget)
        plan.warnings.push_back("source " + g->id + " (" + std::to_string(g->tokens) +
                                " tokens) exceeds the dev/test budget of period " +
                                std::string(to_string(static_cast<Period>(p))) + "; kept in train");
  }

  std::mt19937_64 rng(seed);
  for (std::size_t fold = 0; fold < folds; ++fold) {
    std::map<std::string, Section> assignment;
    for (const auto& f : files) assignment[f.file_id] = Section::train;

    std::vector<int> period_order{0, 1, 2};
    shuffle(period_order, rng);
    for (int p : period_order) {
      auto candidates = by_period[p];
      shuffle(candidates, rng);
      std::stable_sort(candidates.begin(), candidates.end(), [](const SourceGroup* a, const SourceGroup* b) {
        return a->uses != b->uses ? a->uses < b->uses : a->tokens > b->tokens;
      });

      const double dev_target = targets.dev * period_tokens[p];
      const double test_target = targets.test * period_tokens[p];
      double dev = 0.0, test = 0.0;
      // Adding a group must bring the section strictly closer to its target.
      auto improves = [](double current, double target, double size) { return size < 2.0 * (target - current); };
      for (auto* g : candidates) {
        const double size = static_cast<double>(g->tokens);
        Section s = Section::train;
        if (improves(dev, dev_target, size)) {
          s = Section::dev;
          dev += size;
        } else if (improves(test, test_target, size)) {
          s = Section::test;
          test += size;
        }
        if (s == Section::train) continue;
        ++g->uses;
        for (const auto& id : g->files) assignment[id] = s;
      }
    }
    plan.folds.push_back(std::move(assignment));
  }
  return plan;
}

// ---------------------------------------------------------------------------
// Validation

bool SplitValidation::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const SplitCheck& c) { return c.passed; });
}

namespace {

std::map<std::string, const CorpusFile*> index_files(const std::vector<CorpusFile>& files) {
  std::map<std::string, const CorpusFile*> out;
  for (const auto& f : files) out[f.file_id] = &f;
  return out;
}

}  // namespace

std::array<double, 3> section_shares(const SplitPlan& plan, std::size_t fold, const std::vector<CorpusFile>& files) {
  auto index = index_files(files);
  std::array<double, 3> tokens{};
  double total = 0.0;
  for (const auto& [id, s] : plan.folds.at(fold)) {
    auto it = index.find(id);
    if (it == index.end()) throw std::invalid_argument("plan mentions unknown file '" + id + "'");
    tokens[static_cast<int>(s)] += static_cast<double>(it->second->token_count);
    total += static_cast<double>(it->second->token_count);
  }
  if (total > 0)
    for (auto& t : tokens) t /= total;
  return tokens;
}

SplitValidation validate_splits(const SplitPlan& plan, const std::vector<CorpusFile>& files, double tolerance,
                                double period_tolerance) {
  auto index = index_files(files);
  SplitValidation v;

  std::array<double, 3> period_total{};
  double corpus_total = 0.0;
  std::set<std::string> sources;
  for (const auto& f : files) {
    period_total[static_cast<int>(f.period)] += static_cast<double>(f.token_count);
    corpus_total += static_cast<double>(f.token_count);
    sources.insert(f.source_id);
  }
  v.sources = sources.size();

  const std::array<double, 3> target{plan.targets.train, plan.targets.dev, plan.targets.test};
  std::set<std::string> covered;

  for (std::size_t k = 0; k < plan.folds.size(); ++k) {
    const auto& fold = plan.folds[k];
    for (const auto& [id, s] : fold)
      if (!index.count(id)) throw std::invalid_argument("plan mentions unknown file '" + id + "'");

    std::size_t missing = 0;
    for (const auto& f : files) missing += fold.count(f.file_id) ? 0 : 1;
    v.checks.push_back({"partition", k, missing == 0, static_cast<double>(missing), 0.0,
                        std::to_string(missing) + " files unassigned"});

    std::map<std::string, std::set<Section>> source_sections;
    for (const auto& [id, s] : fold) source_sections[index[id]->source_id].insert(s);
    std::size_t split_sources = 0;
    std::string first_split;
    for (const auto& [src, secs] : source_sections)
      if (secs.size() > 1 && split_sources++ == 0) first_split = src;
    v.checks.push_back({"source_atomicity", k, split_sources == 0, static_cast<double>(split_sources), 0.0,
                        split_sources ? "source " + first_split + " split across sections" : ""});

    std::array<double, 3> section_tokens{};
    std::array<std::array<double, 3>, 3> cell{};  // [section][period]
    for (const auto& [id, s] : fold) {
      const auto* f = index[id];
      section_tokens[static_cast<int>(s)] += static_cast<double>(f->token_count);
      cell[static_cast<int>(s)][static_cast<int>(f->period)] += static_cast<double>(f->token_count);
      if (s != Section::train) covered.insert(f->source_id);
    }
    for (int s = 0; s < 3; ++s) {
      const double share = corpus_total > 0 ? section_tokens[s] / corpus_total : 0.0;
      v.checks.push_back({"share_" + std::string(to_string(static_cast<Section>(s))), k,
                          std::abs(share - target[s]) <= tolerance, share, target[s], ""});
      if (section_tokens[s] <= 0) continue;
      for (int p = 0; p < 3; ++p) {
        const double within = cell[s][p] / section_tokens[s];
        const double expected = period_total[p] / corpus_total;
        v.checks.push_back({"period_" + std::string(to_string(static_cast<Period>(p))) + "_in_" +
                                std::string(to_string(static_cast<Section>(s))),
                            k, std::abs(within - expected) <= period_tolerance, within, expected, ""});
      }
    }
    v.coverage_by_fold.push_back(covered.size());
  }
  return v;
}

}  // namespace emetree
