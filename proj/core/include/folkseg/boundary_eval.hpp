#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "folkseg/annotation.hpp"

namespace folkseg {

/// Default boundary hit window, in seconds.
inline constexpr double kDefaultToleranceS = 0.1;

/// Absolute slack added to the tolerance comparison so that decimal
/// inputs such as 10.0 vs 10.1 with tolerance 0.1 count as hits despite
/// binary rounding. Far below any audible time difference.
inline constexpr double kToleranceSlackS = 1e-9;

/// True when |a - b| <= tolerance_s (closed interval, with slack).
inline bool within_tolerance(double a, double b, double tolerance_s) {
  const double d = a > b ? a - b : b - a;
  return d <= tolerance_s + kToleranceSlackS;
}

struct MatchedPair {
  std::size_t ref_index;
  std::size_t pred_index;
  friend bool operator==(const MatchedPair&, const MatchedPair&) = default;
};

/// Maximum-cardinality, order-preserving one-to-one matching between two
/// strictly increasing lists. Linear greedy sweep.
std::vector<MatchedPair> match_boundaries(const std::vector<double>& ref,
                                          const std::vector<double>& pred, double tolerance_s);

struct EvalMetrics {
  std::size_t hits = 0;
  std::size_t n_ref = 0;
  std::size_t n_pred = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Precision/recall/F1 from counts. An empty side scores 1 when the other
/// side is also empty and 0 otherwise.
EvalMetrics metrics_from_counts(std::size_t hits, std::size_t n_ref, std::size_t n_pred);

/// Scores interior boundaries of one song. Throws DataError if the song
/// ids differ.
EvalMetrics evaluate_song(const BoundaryRecord& ref, const BoundaryRecord& pred,
                          double tolerance_s = kDefaultToleranceS);

enum class GroupBy { none, category, fold };
enum class Aggregation { macro, micro };

struct FoldAssignment {
  std::size_t k = 0;
  std::map<std::string, std::size_t> fold_of;  // song_id -> fold in [0, k)
};

/// Per-category shuffled round-robin assignment of reference songs to k
/// folds. Deterministic in (corpus order, seed). Throws DataError when
/// k < 2 or k exceeds the corpus size.
FoldAssignment stratified_folds(const Corpus& corpus, std::size_t k, std::uint64_t seed);

struct GroupSummary {
  std::string group;
  std::size_t n_songs = 0;
  double mean_precision = 0.0;
  double mean_recall = 0.0;
  double mean_f1 = 0.0;
};

struct EvalOptions {
  double tolerance_s = kDefaultToleranceS;
  GroupBy group_by = GroupBy::none;
  Aggregation aggregation = Aggregation::macro;
  /// Required when group_by == fold.
  const FoldAssignment* folds = nullptr;
};

/// Per-song metrics for every predicted song, in pred order. Both corpora
/// must cover the same songs; DataError names any song missing on one side.
std::vector<std::pair<const BoundaryRecord*, EvalMetrics>> evaluate_songs(
    const Corpus& ref, const Corpus& pred, double tolerance_s);

/// Groups per-song results. Macro averages per-song P/R/F1; micro pools
/// hit counts first. Groups are ordered by name ("all" for none, the
/// category label, or the fold index in numeric order).
std::vector<GroupSummary> evaluate_corpus(const Corpus& ref, const Corpus& pred,
                                          const EvalOptions& options = {});

std::string to_string(GroupBy g);
std::string to_string(Aggregation a);

}  // namespace folkseg
