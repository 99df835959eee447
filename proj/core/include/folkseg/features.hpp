#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "folkseg/annotation.hpp"

namespace folkseg {

inline constexpr double kDefaultWindowS = 60.0;
inline constexpr double kDefaultBinWidth = 0.2;

/// Logarithm base for the entropy of the binned log2 durations.
enum class EntropyBase { bits, nats };

/// Features of one analysis window.
struct WindowFeature {
  std::string song_id;
  std::string category;
  std::size_t window_index = 0;
  /// Motifs whose onset falls in the window. Integral except for scaled
  /// partial windows.
  double motif_count = 0.0;
  double duration_entropy_bits = 0.0;

  friend bool operator==(const WindowFeature&, const WindowFeature&) = default;
};

/// Rows sorted by (song_id, window_index).
struct FeatureTable {
  std::vector<WindowFeature> rows;
  friend bool operator==(const FeatureTable&, const FeatureTable&) = default;
};

struct WindowMotifs {
  std::size_t window_index = 0;
  /// Actual window length; shorter than the nominal length only for a
  /// trailing partial window.
  double length_s = 0.0;
  std::vector<Motif> motifs;
};

/// Assigns each motif to the window [w*L, (w+1)*L) containing its onset.
/// Only complete windows are returned unless include_partial is set; then
/// the trailing partial window (if any) is returned too. Windows without
/// any motif are returned with an empty list.
std::vector<WindowMotifs> window_motifs(const std::vector<Motif>& motifs, double window_len_s,
                                        double duration_s, bool include_partial = false);

/// Shannon entropy of the histogram of log2(duration) with bins
/// [b*w, (b+1)*w), b any integer. Returns 0 for fewer than two durations.
/// Throws ValidationError on a non-positive duration or bin width.
double duration_entropy(const std::vector<double>& durations_s, double bin_width = kDefaultBinWidth,
                        EntropyBase base = EntropyBase::bits);

/// Histogram bin of one duration; exposed for tests and benchmarks.
long long duration_bin(double duration_s, double bin_width);

struct FeatureOptions {
  double window_len_s = kDefaultWindowS;
  double bin_width = kDefaultBinWidth;
  EntropyBase entropy_base = EntropyBase::bits;
  /// Keep a trailing partial window, with motif_count rescaled to the
  /// nominal window length. Entropy is left unscaled.
  bool include_partial = false;
};

/// One row per window containing at least one motif. Entropy uses the
/// full (unclipped) durations of the window's motifs.
FeatureTable extract_features(const Corpus& corpus, const FeatureOptions& options = {});

/// CSV with header song_id,category,window_index,motif_count,duration_entropy_bits.
std::string write_feature_csv(const FeatureTable& table);
FeatureTable parse_feature_csv(std::istream& in);
FeatureTable read_feature_csv_file(const std::string& path);

struct CategoryCentroid {
  std::string category;
  std::size_t n = 0;
  double motif_count = 0.0;
  double duration_entropy_bits = 0.0;
};

/// Column means per category, categories sorted.
std::vector<CategoryCentroid> category_centroids(const FeatureTable& table);

}  // namespace folkseg
