#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace folkseg {

enum class Source { reference, predicted };

std::string_view to_string(Source source);
std::optional<Source> source_from_string(std::string_view text);

/// Functional categories found in the archive. Category labels are open
/// strings; this list is informational and not enforced.
inline constexpr std::string_view kKnownCategories[] = {
    "agricultural", "artisan", "eosayong", "lament",
    "entertainment", "minstrel", "lullaby"};

/// One song's annotation. `boundaries_s` holds interior cut points only;
/// song start and end are implicit.
struct BoundaryRecord {
  std::string song_id;
  std::string category;
  double duration_s = 0.0;
  std::vector<double> boundaries_s;
  Source source = Source::reference;

  friend bool operator==(const BoundaryRecord&, const BoundaryRecord&) = default;
};

/// Half-open interval between two consecutive boundaries.
struct Motif {
  double onset_s = 0.0;
  double offset_s = 0.0;

  double duration_s() const { return offset_s - onset_s; }
  friend bool operator==(const Motif&, const Motif&) = default;
};

struct Corpus {
  std::vector<BoundaryRecord> records;

  /// Distinct categories, sorted.
  std::vector<std::string> categories() const;
  /// Record with this id, or nullptr.
  const BoundaryRecord* find(std::string_view song_id) const;

  friend bool operator==(const Corpus&, const Corpus&) = default;
};

/// Minimum duration for songs admitted to analysis (monophonic tracks
/// longer than 30 s).
inline constexpr double kDefaultMinDurationS = 30.0;

struct ParseOptions {
  /// Records with duration_s <= this are skipped with a warning.
  /// Set to 0 to admit every structurally valid record.
  double min_duration_s = kDefaultMinDurationS;
  /// Receives non-fatal diagnostics (unknown keys, skipped short songs).
  std::function<void(const std::string&)> on_warning;
};

/// Checks the BoundaryRecord invariants; throws ValidationError.
void validate_record(const BoundaryRecord& record);

/// Reads JSON Lines, one song per line. Blank lines are ignored.
/// Throws ParseError (with line number) or ValidationError.
Corpus parse_annotations(std::istream& in, const ParseOptions& options = {});
Corpus parse_annotations(std::string_view text, const ParseOptions& options = {});
Corpus read_annotations_file(const std::string& path, const ParseOptions& options = {});

/// Serializes one record per line with keys in a fixed order; times use
/// format_seconds so that parsing reproduces the corpus exactly.
std::string write_annotations(const Corpus& corpus);
std::string write_record(const BoundaryRecord& record);

/// k interior boundaries -> k+1 motifs tiling [0, duration_s].
std::vector<Motif> motifs_from_boundaries(const std::vector<double>& boundaries_s,
                                          double duration_s);

}  // namespace folkseg
