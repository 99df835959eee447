#include "folkseg/features.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numbers>
#include <set>

#include "folkseg/errors.hpp"
#include "folkseg/format.hpp"

namespace folkseg {
namespace {

// Pulls log2 values that sit a rounding error below a bin edge (e.g.
// log2(2^0.6) / 0.2 = 2.9999999999999996) onto the edge.
constexpr double kBinEdgeSlack = 1e-9;

const std::vector<std::string> kFeatureHeader = {"song_id", "category", "window_index",
                                                 "motif_count", "duration_entropy_bits"};

}  // namespace

std::vector<WindowMotifs> window_motifs(const std::vector<Motif>& motifs, double window_len_s,
                                        double duration_s, bool include_partial) {
  if (!(window_len_s > 0.0)) {
    throw ValidationError("", "window_len_s", "window length must be positive");
  }
  const auto complete = static_cast<std::size_t>(std::floor(duration_s / window_len_s));
  std::size_t count = complete;
  const double tail = duration_s - static_cast<double>(complete) * window_len_s;
  if (include_partial && tail > 0.0) ++count;

  std::vector<WindowMotifs> windows(count);
  for (std::size_t w = 0; w < count; ++w) {
    windows[w].window_index = w;
    windows[w].length_s = w < complete ? window_len_s : tail;
  }
  for (const Motif& m : motifs) {
    const auto w = static_cast<std::size_t>(std::floor(m.onset_s / window_len_s));
    if (w < count) windows[w].motifs.push_back(m);
  }
  return windows;
}

long long duration_bin(double duration_s, double bin_width) {
  return static_cast<long long>(std::floor(std::log2(duration_s) / bin_width + kBinEdgeSlack));
}

double duration_entropy(const std::vector<double>& durations_s, double bin_width,
                        EntropyBase base) {
  if (!(bin_width > 0.0)) throw ValidationError("", "bin_width", "bin width must be positive");
  for (double d : durations_s) {
    if (!(d > 0.0) || !std::isfinite(d)) {
      throw ValidationError("", "duration_s",
                            "motif duration must be positive, got " + format_number(d));
    }
  }
  if (durations_s.size() <= 1) return 0.0;

  std::map<long long, std::size_t> counts;
  for (double d : durations_s) ++counts[duration_bin(d, bin_width)];

  const double n = static_cast<double>(durations_s.size());
  double h = 0.0;
  for (const auto& [bin, c] : counts) {
    const double p = static_cast<double>(c) / n;
    h -= p * std::log2(p);
  }
  if (h <= 0.0) return 0.0;  // single bin: avoid -0
  return base == EntropyBase::bits ? h : h * std::numbers::ln2;
}

FeatureTable extract_features(const Corpus& corpus, const FeatureOptions& options) {
  std::set<std::string_view> seen;
  for (const auto& r : corpus.records) {
    if (!seen.insert(r.song_id).second) {
      throw ValidationError(r.song_id, "song_id", "duplicate song in feature input");
    }
  }

  FeatureTable table;
  for (const auto& rec : corpus.records) {
    const auto motifs = motifs_from_boundaries(rec.boundaries_s, rec.duration_s);
    for (const auto& win :
         window_motifs(motifs, options.window_len_s, rec.duration_s, options.include_partial)) {
      if (win.motifs.empty()) continue;
      std::vector<double> durations;
      durations.reserve(win.motifs.size());
      for (const auto& m : win.motifs) durations.push_back(m.duration_s());

      WindowFeature row;
      row.song_id = rec.song_id;
      row.category = rec.category;
      row.window_index = win.window_index;
      row.motif_count = static_cast<double>(win.motifs.size());
      if (win.length_s < options.window_len_s) {
        row.motif_count *= options.window_len_s / win.length_s;
      }
      row.duration_entropy_bits =
          duration_entropy(durations, options.bin_width, options.entropy_base);
      table.rows.push_back(std::move(row));
    }
  }
  std::sort(table.rows.begin(), table.rows.end(), [](const auto& a, const auto& b) {
    return a.song_id != b.song_id ? a.song_id < b.song_id : a.window_index < b.window_index;
  });
  return table;
}

std::string write_feature_csv(const FeatureTable& table) {
  std::string out = csv_join(kFeatureHeader) + '\n';
  for (const auto& r : table.rows) {
    out += csv_join({r.song_id, r.category, std::to_string(r.window_index),
                     format_number(r.motif_count), format_number(r.duration_entropy_bits)});
    out += '\n';
  }
  return out;
}

FeatureTable parse_feature_csv(std::istream& in) {
  FeatureTable table;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    try {
      fields = csv_split(line);
    } catch (const ParseError& e) {
      throw ParseError(lineno, e.what());
    }
    if (!header_seen) {
      if (fields != kFeatureHeader) throw ParseError(lineno, "unexpected feature table header");
      header_seen = true;
      continue;
    }
    if (fields.size() != kFeatureHeader.size()) {
      throw ParseError(lineno, "expected 5 fields, got " + std::to_string(fields.size()));
    }
    WindowFeature row;
    row.song_id = fields[0];
    row.category = fields[1];
    try {
      const double w = parse_number(fields[2]);
      if (w < 0 || w != std::floor(w)) throw ParseError("window_index must be a whole number");
      row.window_index = static_cast<std::size_t>(w);
      row.motif_count = parse_number(fields[3]);
      row.duration_entropy_bits = parse_number(fields[4]);
    } catch (const ParseError& e) {
      throw ParseError(lineno, e.what());
    }
    if (row.song_id.empty() || row.category.empty()) {
      throw ParseError(lineno, "song_id and category must not be empty");
    }
    if (!std::isfinite(row.motif_count) || !std::isfinite(row.duration_entropy_bits)) {
      throw ParseError(lineno, "feature values must be finite");
    }
    table.rows.push_back(std::move(row));
  }
  if (!header_seen) throw ParseError("feature table is empty (missing header)");
  return table;
}

FeatureTable read_feature_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open feature file '" + path + "'");
  return parse_feature_csv(in);
}

std::vector<CategoryCentroid> category_centroids(const FeatureTable& table) {
  std::map<std::string, CategoryCentroid> acc;
  for (const auto& r : table.rows) {
    auto& c = acc[r.category];
    c.category = r.category;
    ++c.n;
    c.motif_count += r.motif_count;
    c.duration_entropy_bits += r.duration_entropy_bits;
  }
  std::vector<CategoryCentroid> out;
  for (auto& [name, c] : acc) {
    c.motif_count /= static_cast<double>(c.n);
    c.duration_entropy_bits /= static_cast<double>(c.n);
    out.push_back(c);
  }
  return out;
}

}  // namespace folkseg
