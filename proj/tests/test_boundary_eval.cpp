#include "folkseg/boundary_eval.hpp"

#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "folkseg/errors.hpp"
#include "oracles.hpp"

namespace folkseg {
namespace {

std::vector<double> random_sorted(std::mt19937_64& gen, std::size_t max_n, double span) {
  std::uniform_int_distribution<std::size_t> count(0, max_n);
  // Coarse grid so that near-ties and exact-tolerance distances occur.
  std::uniform_int_distribution<int> tick(1, static_cast<int>(span * 20));
  std::set<double> s;
  const std::size_t n = count(gen);
  while (s.size() < n) s.insert(tick(gen) * 0.05);
  return {s.begin(), s.end()};
}

BoundaryRecord rec(std::string id, std::string cat, std::vector<double> b,
                   Source src = Source::reference) {
  return {std::move(id), std::move(cat), 100.0, std::move(b), src};
}

TEST(MatchTest, IdenticalListsMatchFully) {
  EXPECT_EQ(match_boundaries({10, 20, 30}, {10, 20, 30}, 0.1).size(), 3u);
}

TEST(MatchTest, RejectsBeyondTolerance) {
  const auto pairs = match_boundaries({10, 20, 30}, {10.05, 19.85, 30.5}, 0.1);
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_EQ(pairs[0], (MatchedPair{0, 0}));
  EXPECT_EQ(testing::brute_force_max_matching({10, 20, 30}, {10.05, 19.85, 30.5}, 0.1), 1u);
}

TEST(MatchTest, OneToOne) {
  EXPECT_EQ(match_boundaries({10.0}, {9.95, 10.05}, 0.1).size(), 1u);
  const auto m = evaluate_song(rec("a", "x", {10.0}), rec("a", "x", {9.95, 10.05}), 0.1);
  EXPECT_DOUBLE_EQ(m.precision, 0.5);
  EXPECT_DOUBLE_EQ(m.recall, 1.0);
}

TEST(MatchTest, ToleranceIsClosed) {
  // 0.25 is exact in binary, so the distance equals the tolerance exactly.
  EXPECT_EQ(match_boundaries({10.0}, {10.25}, 0.25).size(), 1u);
  EXPECT_EQ(match_boundaries({10.0}, {10.1}, 0.1).size(), 1u);
  EXPECT_EQ(match_boundaries({20.0}, {20.1}, 0.1).size(), 1u);
  EXPECT_EQ(match_boundaries({10.0}, {10.2500001}, 0.25).size(), 0u);
}

TEST(MatchTest, PairsAreOrderPreservingAndWithinTolerance) {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 500; ++trial) {
    const auto ref = random_sorted(gen, 20, 10.0);
    const auto pred = random_sorted(gen, 20, 10.0);
    const auto pairs = match_boundaries(ref, pred, 0.1);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      EXPECT_LE(std::fabs(ref[pairs[k].ref_index] - pred[pairs[k].pred_index]), 0.1 + 1e-9);
      if (k > 0) {
        EXPECT_GT(pairs[k].ref_index, pairs[k - 1].ref_index);
        EXPECT_GT(pairs[k].pred_index, pairs[k - 1].pred_index);
      }
    }
  }
}

TEST(MatchTest, CardinalityEqualsBruteForce) {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> tol_dist(0.0, 0.3);
  for (int trial = 0; trial < 300; ++trial) {
    const auto ref = random_sorted(gen, 7, 2.0);
    const auto pred = random_sorted(gen, 7, 2.0);
    const double tol = tol_dist(gen);
    EXPECT_EQ(match_boundaries(ref, pred, tol).size(),
              testing::brute_force_max_matching(ref, pred, tol));
  }
}

TEST(MatchTest, MonotoneInTolerance) {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 300; ++trial) {
    const auto ref = random_sorted(gen, 15, 5.0);
    const auto pred = random_sorted(gen, 15, 5.0);
    std::size_t prev = 0;
    for (double tol = 0.0; tol <= 0.5; tol += 0.05) {
      const std::size_t hits = match_boundaries(ref, pred, tol).size();
      EXPECT_GE(hits, prev);
      prev = hits;
    }
  }
}

TEST(EvalSongTest, IdenticalIsPerfect) {
  const auto m = evaluate_song(rec("a", "x", {1, 2, 3}), rec("a", "x", {1, 2, 3}));
  EXPECT_EQ(m.hits, 3u);
  EXPECT_DOUBLE_EQ(m.precision, 1.0);
  EXPECT_DOUBLE_EQ(m.recall, 1.0);
  EXPECT_DOUBLE_EQ(m.f1, 1.0);
}

TEST(EvalSongTest, EmptyPredictionConvention) {
  const auto m = evaluate_song(rec("a", "x", {1, 2}), rec("a", "x", {}));
  EXPECT_DOUBLE_EQ(m.precision, 0.0);
  EXPECT_DOUBLE_EQ(m.recall, 0.0);
  EXPECT_DOUBLE_EQ(m.f1, 0.0);
  const auto both = evaluate_song(rec("a", "x", {}), rec("a", "x", {}));
  EXPECT_DOUBLE_EQ(both.f1, 1.0);
}

TEST(EvalSongTest, OneThird) {
  const auto m = evaluate_song(rec("a", "x", {10, 20, 30}), rec("a", "x", {10.05, 19.85, 30.5}));
  EXPECT_DOUBLE_EQ(m.precision, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(m.recall, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(m.f1, 1.0 / 3.0);
}

TEST(EvalSongTest, IdMismatchThrows) {
  EXPECT_THROW(evaluate_song(rec("a", "x", {}), rec("b", "x", {})), DataError);
}

TEST(EvalSongTest, SwapExchangesPrecisionAndRecall) {
  std::mt19937_64 gen(9);
  for (int trial = 0; trial < 300; ++trial) {
    const auto a = random_sorted(gen, 12, 5.0);
    const auto b = random_sorted(gen, 12, 5.0);
    const auto ab = evaluate_song(rec("s", "x", a), rec("s", "x", b), 0.1);
    const auto ba = evaluate_song(rec("s", "x", b), rec("s", "x", a), 0.1);
    EXPECT_DOUBLE_EQ(ab.precision, ba.recall);
    EXPECT_DOUBLE_EQ(ab.recall, ba.precision);
    EXPECT_DOUBLE_EQ(ab.f1, ba.f1);
    EXPECT_LE(ab.hits, std::min(ab.n_ref, ab.n_pred));
  }
}

TEST(EvalCorpusTest, OneSongPerGroup) {
  Corpus ref, pred;
  ref.records = {rec("a", "lament", {10, 20}), rec("b", "lullaby", {5})};
  pred.records = {rec("a", "lament", {10}, Source::predicted),
                  rec("b", "lullaby", {5}, Source::predicted)};
  EvalOptions o;
  o.group_by = GroupBy::category;
  const auto s = evaluate_corpus(ref, pred, o);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].group, "lament");
  EXPECT_EQ(s[0].n_songs, 1u);
  EXPECT_DOUBLE_EQ(s[0].mean_f1, evaluate_song(ref.records[0], pred.records[0]).f1);
  EXPECT_EQ(s[1].group, "lullaby");
  EXPECT_DOUBLE_EQ(s[1].mean_f1, 1.0);
}

TEST(EvalCorpusTest, MacroMeanOfTwoSongs) {
  Corpus ref, pred;
  ref.records = {rec("a", "lament", {10, 20}), rec("b", "lament", {5})};
  pred.records = {rec("a", "lament", {}, Source::predicted),
                  rec("b", "lament", {5}, Source::predicted)};
  EvalOptions o;
  o.group_by = GroupBy::category;
  const auto s = evaluate_corpus(ref, pred, o);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_DOUBLE_EQ(s[0].mean_f1, 0.5);

  o.aggregation = Aggregation::micro;
  const auto micro = evaluate_corpus(ref, pred, o);
  // pooled: 1 hit, 3 ref, 1 pred
  EXPECT_DOUBLE_EQ(micro[0].mean_precision, 1.0);
  EXPECT_DOUBLE_EQ(micro[0].mean_recall, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(micro[0].mean_f1, 0.5);
}

TEST(EvalCorpusTest, MissingReferenceNamesSong) {
  Corpus ref, pred;
  ref.records = {rec("a", "x", {})};
  pred.records = {rec("ghost", "x", {}, Source::predicted)};
  try {
    evaluate_corpus(ref, pred);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("ghost"), std::string::npos);
  }
}

TEST(EvalCorpusTest, MissingPredictionNamesSong) {
  Corpus ref, pred;
  ref.records = {rec("a", "x", {}), rec("b", "x", {})};
  pred.records = {rec("a", "x", {}, Source::predicted)};
  try {
    evaluate_corpus(ref, pred);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("without a prediction: b"), std::string::npos);
  }
}

TEST(EvalCorpusTest, CorpusMeanMatchesRecomputation) {
  std::mt19937_64 gen(77);
  for (int trial = 0; trial < 20; ++trial) {
    Corpus ref, pred;
    for (int i = 0; i < 25; ++i) {
      const std::string id = "s" + std::to_string(i);
      ref.records.push_back(rec(id, i % 3 ? "a" : "b", random_sorted(gen, 10, 4.0)));
      pred.records.push_back(rec(id, "ignored", random_sorted(gen, 10, 4.0), Source::predicted));
    }
    // Independent recomputation: brute-force hits and the F1 formula.
    double sum = 0.0;
    std::map<std::string, std::pair<double, int>> per_cat;
    for (int i = 0; i < 25; ++i) {
      const auto& r = ref.records[i].boundaries_s;
      const auto& p = pred.records[i].boundaries_s;
      const double hits = static_cast<double>(testing::brute_force_max_matching(r, p, 0.1));
      double prec = p.empty() ? (r.empty() ? 1.0 : 0.0) : hits / p.size();
      double recl = r.empty() ? (p.empty() ? 1.0 : 0.0) : hits / r.size();
      const double f = prec + recl > 0 ? 2 * prec * recl / (prec + recl) : 0.0;
      sum += f;
      auto& pc = per_cat[ref.records[i].category];
      pc.first += f;
      ++pc.second;
    }
    const auto all = evaluate_corpus(ref, pred);
    ASSERT_EQ(all.size(), 1u);
    EXPECT_EQ(all[0].group, "all");
    EXPECT_NEAR(all[0].mean_f1, sum / 25.0, 1e-12);

    EvalOptions o;
    o.group_by = GroupBy::category;
    for (const auto& g : evaluate_corpus(ref, pred, o)) {
      EXPECT_NEAR(g.mean_f1, per_cat[g.group].first / per_cat[g.group].second, 1e-12);
      EXPECT_EQ(g.n_songs, static_cast<std::size_t>(per_cat[g.group].second));
    }
  }
}

TEST(EvalCorpusTest, FoldGrouping) {
  Corpus ref;
  for (int i = 0; i < 12; ++i) ref.records.push_back(rec("s" + std::to_string(i), i < 6 ? "a" : "b", {5}));
  const auto folds = stratified_folds(ref, 3, 1);
  EvalOptions o;
  o.group_by = GroupBy::fold;
  o.folds = &folds;
  const auto s = evaluate_corpus(ref, ref, o);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[0].group, "0");
  EXPECT_EQ(s[2].group, "2");
  for (const auto& g : s) EXPECT_EQ(g.n_songs, 4u);

  o.folds = nullptr;
  EXPECT_THROW(evaluate_corpus(ref, ref, o), DataError);
}

TEST(FoldTest, ExactDivisibility) {
  Corpus c;
  for (int i = 0; i < 20; ++i) c.records.push_back(rec("s" + std::to_string(i), i % 2 ? "a" : "b", {}));
  const auto f = stratified_folds(c, 10, 123);
  std::map<std::pair<std::size_t, std::string>, int> counts;
  for (const auto& r : c.records) ++counts[{f.fold_of.at(r.song_id), r.category}];
  for (std::size_t k = 0; k < 10; ++k) {
    EXPECT_EQ((counts[{k, "a"}]), 1);
    EXPECT_EQ((counts[{k, "b"}]), 1);
  }
}

TEST(FoldTest, Deterministic) {
  Corpus c;
  for (int i = 0; i < 37; ++i) c.records.push_back(rec("s" + std::to_string(i), "c" + std::to_string(i % 4), {}));
  const auto a = stratified_folds(c, 5, 99);
  const auto b = stratified_folds(c, 5, 99);
  EXPECT_EQ(a.fold_of, b.fold_of);
  const auto other = stratified_folds(c, 5, 100);
  EXPECT_NE(a.fold_of, other.fold_of);
}

TEST(FoldTest, StratificationProperty) {
  std::mt19937_64 gen(31);
  for (int trial = 0; trial < 200; ++trial) {
    Corpus c;
    const int n = std::uniform_int_distribution<int>(2, 80)(gen);
    const int cats = std::uniform_int_distribution<int>(1, 7)(gen);
    for (int i = 0; i < n; ++i) {
      c.records.push_back(rec("s" + std::to_string(i),
                              "c" + std::to_string(std::uniform_int_distribution<int>(0, cats - 1)(gen)), {}));
    }
    const std::size_t k = std::uniform_int_distribution<std::size_t>(2, static_cast<std::size_t>(n))(gen);
    const auto f = stratified_folds(c, k, trial);
    ASSERT_EQ(f.fold_of.size(), c.records.size());
    std::map<std::string, std::vector<int>> per_cat;
    std::vector<int> totals(k, 0);
    for (const auto& r : c.records) {
      auto& v = per_cat[r.category];
      v.resize(k, 0);
      const std::size_t fold = f.fold_of.at(r.song_id);
      ASSERT_LT(fold, k);
      ++v[fold];
      ++totals[fold];
    }
    for (const auto& [cat, v] : per_cat) {
      EXPECT_LE(*std::max_element(v.begin(), v.end()) - *std::min_element(v.begin(), v.end()), 1);
    }
    EXPECT_LE(*std::max_element(totals.begin(), totals.end()) -
                  *std::min_element(totals.begin(), totals.end()),
              1);
  }
}

TEST(FoldTest, InvalidK) {
  Corpus c;
  for (int i = 0; i < 3; ++i) c.records.push_back(rec("s" + std::to_string(i), "a", {}));
  EXPECT_THROW(stratified_folds(c, 4, 0), DataError);
  EXPECT_THROW(stratified_folds(c, 1, 0), DataError);
}

}  // namespace
}  // namespace folkseg
