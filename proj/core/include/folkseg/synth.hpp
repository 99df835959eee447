#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "folkseg/annotation.hpp"
#include "folkseg/rng.hpp"

namespace folkseg {

/// Motif durations d = 2^x with x ~ Normal(mu_log2, sigma_log2).
struct LogNormalDurations {
  double mu_log2 = 1.0;
  double sigma_log2 = 0.3;
};

/// Motif durations drawn from a finite set with the given weights.
struct DiscreteDurations {
  std::vector<double> values_s;
  std::vector<double> weights;
};

using DurationDistribution = std::variant<LogNormalDurations, DiscreteDurations>;

struct CategoryProfile {
  std::string name;
  double song_len_min_s = 90.0;
  double song_len_max_s = 240.0;
  DurationDistribution durations = LogNormalDurations{};
  /// Free-text description of the intended count/entropy quadrant.
  std::string traits;
};

/// Throws ValidationError (song id field holds the profile name).
void validate_profile(const CategoryProfile& profile);

/// Draws one motif duration (seconds, > 0).
double draw_duration(const DurationDistribution& dist, Rng& rng);

/// Song length ~ Uniform[min, max]; motif durations are drawn until the
/// song is filled and the last motif is truncated at the song end.
BoundaryRecord generate_song(const CategoryProfile& profile, Rng& rng, std::string song_id);

/// songs_per_category songs per profile, profile order then song order.
/// Song j of profile i uses its own generator seeded from (seed, i, j), so
/// records do not depend on generation order.
Corpus generate_corpus(const std::vector<CategoryProfile>& profiles,
                       std::size_t songs_per_category, std::uint64_t seed);

struct JitterSpec {
  double sigma_s = 0.0;
  double p_drop = 0.0;
  double p_insert = 0.0;
};

void validate_jitter(const JitterSpec& spec);

/// Simulated prediction: each boundary is dropped with p_drop, otherwise
/// shifted by Normal(0, sigma_s) and clamped inside the song; for every
/// original boundary a spurious one is inserted uniformly with
/// probability p_insert. Output is sorted and deduplicated, source
/// predicted.
BoundaryRecord jitter_boundaries(const BoundaryRecord& record, const JitterSpec& spec, Rng& rng);

/// Applies jitter_boundaries to every record with per-song seeds.
Corpus jitter_corpus(const Corpus& corpus, const JitterSpec& spec, std::uint64_t seed);

/// Seven illustrative category profiles laid out in the count/entropy
/// quadrants observed for the archive. Values are not measurements.
std::vector<CategoryProfile> default_profiles();

/// Profile file (JSON):
///   {"profiles": [{"name": "lullaby", "song_len_s": [90, 240],
///                  "durations": {"type": "lognormal", "mu_log2": 1.8, "sigma_log2": 0.1},
///                  "traits": "moderate count, low entropy"}, ...]}
/// A discrete distribution is {"type": "discrete", "values_s": [...], "weights": [...]}.
std::vector<CategoryProfile> parse_profiles(std::string_view text);
std::vector<CategoryProfile> read_profiles_file(const std::string& path);
std::string write_profiles(const std::vector<CategoryProfile>& profiles);

}  // namespace folkseg
