#include "folkseg/features.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "folkseg/errors.hpp"
#include "folkseg/synth.hpp"

namespace folkseg {
namespace {

// Histogram entropy written out longhand, used as the oracle below.
double entropy_by_hand(const std::vector<double>& durations, double width) {
  std::map<long long, int> bins;
  for (double d : durations) ++bins[static_cast<long long>(std::floor(std::log2(d) / width + 1e-9))];
  double h = 0.0;
  for (const auto& [b, c] : bins) {
    const double p = static_cast<double>(c) / durations.size();
    h -= p * std::log2(p);
  }
  return durations.size() <= 1 ? 0.0 : h;
}

TEST(EntropyTest, SingleBinIsZero) { EXPECT_EQ(duration_entropy({2.0, 2.0, 2.0}), 0.0); }

TEST(EntropyTest, FourDistinctBinsIsTwoBits) {
  EXPECT_EQ(duration_entropy({1.0, 2.0, 4.0, 8.0}), 2.0);
}

TEST(EntropyTest, HandHistogram) {
  // log2 -> 0, 0.1375, 1.0 ; bins 0, 0, 5 ; H(2/3, 1/3)
  EXPECT_EQ(duration_bin(1.0, 0.2), 0);
  EXPECT_EQ(duration_bin(1.1, 0.2), 0);
  EXPECT_EQ(duration_bin(2.0, 0.2), 5);
  EXPECT_NEAR(duration_entropy({1.0, 1.1, 2.0}), 0.9182958340544896, 1e-12);
}

TEST(EntropyTest, DegenerateSizes) {
  EXPECT_EQ(duration_entropy({}), 0.0);
  EXPECT_EQ(duration_entropy({3.7}), 0.0);
}

TEST(EntropyTest, NegativeBinsAllowed) {
  EXPECT_EQ(duration_bin(0.5, 0.2), -5);
  EXPECT_EQ(duration_entropy({0.5, 0.25}), 1.0);
}

TEST(EntropyTest, RejectsBadInput) {
  EXPECT_THROW(duration_entropy({1.0, 0.0}), ValidationError);
  EXPECT_THROW(duration_entropy({1.0, -2.0}), ValidationError);
  EXPECT_THROW(duration_entropy({1.0}, 0.0), ValidationError);
}

TEST(EntropyTest, NatsOption) {
  EXPECT_NEAR(duration_entropy({1.0, 2.0}, 0.2, EntropyBase::nats), std::log(2.0), 1e-15);
}

TEST(EntropyTest, BoundsAndOracleOnRandomSamples) {
  std::mt19937_64 gen(17);
  std::lognormal_distribution<double> dur(1.0, 0.6);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = std::uniform_int_distribution<int>(1, 40)(gen);
    std::vector<double> d(n);
    for (auto& x : d) x = dur(gen);
    const double h = duration_entropy(d);
    EXPECT_GE(h, 0.0);
    EXPECT_LE(h, std::log2(static_cast<double>(n)) + 1e-12);
    EXPECT_NEAR(h, entropy_by_hand(d, 0.2), 1e-12);
  }
}

TEST(EntropyTest, MaximalIffAllDistinctBins) {
  // n values one bin apart reach log2(n).
  std::vector<double> d;
  for (int i = 0; i < 6; ++i) d.push_back(std::exp2(0.2 * i + 0.1));
  EXPECT_NEAR(duration_entropy(d), std::log2(6.0), 1e-12);
  d.back() = d.front();
  EXPECT_LT(duration_entropy(d), std::log2(6.0) - 1e-6);
}

TEST(EntropyTest, ScaleShiftInvariance) {
  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> dur(0.3, 20.0);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> d(std::uniform_int_distribution<int>(2, 30)(gen));
    for (auto& x : d) x = dur(gen);
    const int j = std::uniform_int_distribution<int>(-10, 10)(gen);
    std::vector<double> scaled = d;
    for (auto& x : scaled) x *= std::exp2(0.2 * j);
    for (std::size_t i = 0; i < d.size(); ++i) {
      ASSERT_EQ(duration_bin(scaled[i], 0.2), duration_bin(d[i], 0.2) + j);
    }
    EXPECT_NEAR(duration_entropy(scaled), duration_entropy(d), 1e-12);
  }
}

TEST(WindowTest, PartialWindowDropped) {
  const auto motifs = motifs_from_boundaries({30, 70, 130}, 150.0);
  const auto w = window_motifs(motifs, 60.0, 150.0);
  ASSERT_EQ(w.size(), 2u);
  EXPECT_EQ(w[0].window_index, 0u);
  EXPECT_EQ(w[1].window_index, 1u);
  EXPECT_EQ(w[0].motifs.size(), 2u);  // onsets 0, 30
  EXPECT_EQ(w[1].motifs.size(), 1u);  // onset 70; 130 falls in the dropped tail
}

TEST(WindowTest, OnsetOnEdgeBelongsToNextWindow) {
  const auto motifs = motifs_from_boundaries({60.0}, 130.0);
  const auto w = window_motifs(motifs, 60.0, 130.0);
  ASSERT_EQ(w.size(), 2u);
  EXPECT_EQ(w[0].motifs.size(), 1u);
  ASSERT_EQ(w[1].motifs.size(), 1u);
  EXPECT_EQ(w[1].motifs[0].onset_s, 60.0);
}

TEST(WindowTest, IncludePartialKeepsTail) {
  const auto motifs = motifs_from_boundaries({30, 70, 130}, 150.0);
  const auto w = window_motifs(motifs, 60.0, 150.0, true);
  ASSERT_EQ(w.size(), 3u);
  EXPECT_DOUBLE_EQ(w[2].length_s, 30.0);
  EXPECT_EQ(w[2].motifs.size(), 1u);
}

TEST(WindowTest, RandomTilingAssignsEachEarlyMotifOnce) {
  std::mt19937_64 gen(8);
  for (int trial = 0; trial < 300; ++trial) {
    const double dur = std::uniform_real_distribution<double>(120.0, 179.0)(gen);
    std::vector<double> b;
    double t = 0.0;
    for (;;) {
      t += std::uniform_real_distribution<double>(0.5, 9.0)(gen);
      if (t >= dur) break;
      b.push_back(t);
    }
    const auto motifs = motifs_from_boundaries(b, dur);
    const auto w = window_motifs(motifs, 60.0, dur);
    ASSERT_EQ(w.size(), 2u);
    std::size_t early = 0;
    for (const auto& m : motifs) early += m.onset_s < 120.0;
    EXPECT_EQ(w[0].motifs.size() + w[1].motifs.size(), early);
    for (const auto& m : w[0].motifs) EXPECT_LT(m.onset_s, 60.0);
    for (const auto& m : w[1].motifs) {
      EXPECT_GE(m.onset_s, 60.0);
      EXPECT_LT(m.onset_s, 120.0);
    }
  }
}

BoundaryRecord song(std::string id, std::string cat, double dur, std::vector<double> b) {
  return {std::move(id), std::move(cat), dur, std::move(b), Source::reference};
}

TEST(ExtractTest, NinetySecondSong) {
  Corpus c;
  c.records.push_back(song("s", "lullaby", 90.0, {10, 20}));
  const auto t = extract_features(c);
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.rows[0].motif_count, 3.0);
  // Durations 10, 10, 70 (the last motif runs to the song end, unclipped).
  EXPECT_NEAR(t.rows[0].duration_entropy_bits, duration_entropy({10, 10, 70}), 0.0);
  EXPECT_NEAR(t.rows[0].duration_entropy_bits, 0.9182958340544896, 1e-12);
}

TEST(ExtractTest, ShortSongHasNoRows) {
  Corpus c;
  c.records.push_back(song("s", "lullaby", 59.0, {10, 20}));
  EXPECT_TRUE(extract_features(c).rows.empty());
}

TEST(ExtractTest, EmptyWindowsExcluded) {
  Corpus c;
  c.records.push_back(song("s", "lament", 200.0, {10.0, 130.0}));
  const auto t = extract_features(c);
  // window 0: onsets 0, 10 ; window 1: none (motif 10..130 straddles) ; window 2: onset 130
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[0].window_index, 0u);
  EXPECT_EQ(t.rows[1].window_index, 2u);
  EXPECT_EQ(t.rows[1].motif_count, 1.0);
  EXPECT_EQ(t.rows[1].duration_entropy_bits, 0.0);
}

TEST(ExtractTest, IncludePartialScalesCount) {
  Corpus c;
  c.records.push_back(song("s", "lament", 90.0, {65.0, 75.0}));
  FeatureOptions o;
  o.include_partial = true;
  const auto t = extract_features(c, o);
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_DOUBLE_EQ(t.rows[1].motif_count, 2.0 * 60.0 / 30.0);
}

TEST(ExtractTest, SortedAndCountAdditive) {
  const Corpus c = generate_corpus(default_profiles(), 6, 5);
  const auto t = extract_features(c);
  for (std::size_t i = 1; i < t.rows.size(); ++i) {
    const auto& a = t.rows[i - 1];
    const auto& b = t.rows[i];
    EXPECT_TRUE(a.song_id < b.song_id || (a.song_id == b.song_id && a.window_index < b.window_index));
  }
  for (const auto& r : c.records) {
    const auto motifs = motifs_from_boundaries(r.boundaries_s, r.duration_s);
    const double windows = std::floor(r.duration_s / 60.0);
    std::size_t expected = 0;
    for (const auto& m : motifs) expected += m.onset_s < windows * 60.0;
    double total = 0.0;
    for (const auto& row : t.rows) {
      if (row.song_id == r.song_id) {
        total += row.motif_count;
        EXPECT_LE(row.duration_entropy_bits, std::log2(row.motif_count) + 1e-12);
      }
    }
    EXPECT_EQ(total, static_cast<double>(expected));
  }
}

TEST(ExtractTest, MatchesGeneratorGroundTruth) {
  // A deterministic profile: every motif 4 s, songs exactly 150 s.
  CategoryProfile p{"steady", 150.0, 150.0, DiscreteDurations{{4.0}, {1.0}}, ""};
  const Corpus c = generate_corpus({p}, 3, 1);
  const auto t = extract_features(c);
  ASSERT_EQ(t.rows.size(), 6u);
  for (const auto& r : t.rows) {
    EXPECT_EQ(r.motif_count, 15.0);  // onsets 0,4,...,56 and 60,...,116
    EXPECT_EQ(r.duration_entropy_bits, 0.0);
  }
}

TEST(ExtractTest, DuplicateSongRejected) {
  Corpus c;
  c.records.push_back(song("s", "a", 90.0, {}));
  c.records.push_back(song("s", "a", 90.0, {}));
  EXPECT_THROW(extract_features(c), ValidationError);
}

TEST(FeatureCsvTest, RoundTrip) {
  const Corpus c = generate_corpus(default_profiles(), 2, 9);
  const auto t = extract_features(c);
  std::istringstream in(write_feature_csv(t));
  EXPECT_EQ(parse_feature_csv(in), t);
}

TEST(FeatureCsvTest, RejectsBadRows) {
  {
    std::istringstream in("song_id,category\n");
    EXPECT_THROW(parse_feature_csv(in), ParseError);
  }
  {
    std::istringstream in(
        "song_id,category,window_index,motif_count,duration_entropy_bits\na,b,0,3\n");
    EXPECT_THROW(parse_feature_csv(in), ParseError);
  }
  {
    std::istringstream in(
        "song_id,category,window_index,motif_count,duration_entropy_bits\na,b,0.5,3,1\n");
    EXPECT_THROW(parse_feature_csv(in), ParseError);
  }
}

TEST(CentroidTest, ColumnMeansPerCategory) {
  FeatureTable t;
  t.rows = {{"a", "x", 0, 10, 1.0}, {"a", "x", 1, 20, 2.0}, {"b", "y", 0, 5, 0.5}};
  const auto c = category_centroids(t);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0].category, "x");
  EXPECT_DOUBLE_EQ(c[0].motif_count, 15.0);
  EXPECT_DOUBLE_EQ(c[0].duration_entropy_bits, 1.5);
  EXPECT_EQ(c[1].n, 1u);
}

}  // namespace
}  // namespace folkseg
