#include "folkseg/annotation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "folkseg/errors.hpp"
#include "folkseg/format.hpp"

namespace folkseg {
namespace {

using nlohmann::json;

constexpr std::string_view kKeys[] = {"song_id", "category", "duration_s", "boundaries_s",
                                      "source"};

const json& require(const json& obj, const std::string& key, const std::string& song_id,
                    std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(song_id, key, "missing key", line);
  return *it;
}

double require_number(const json& value, const std::string& song_id, const std::string& field,
                      std::size_t line) {
  if (!value.is_number()) throw ValidationError(song_id, field, "expected a number", line);
  return value.get<double>();
}

BoundaryRecord record_from_json(const json& obj, std::size_t line) {
  if (!obj.is_object()) throw ParseError(line, "expected a JSON object");

  BoundaryRecord rec;
  const json& id = require(obj, "song_id", "?", line);
  if (!id.is_string()) throw ValidationError("?", "song_id", "expected a string", line);
  rec.song_id = id.get<std::string>();

  const json& cat = require(obj, "category", rec.song_id, line);
  if (!cat.is_string()) throw ValidationError(rec.song_id, "category", "expected a string", line);
  rec.category = cat.get<std::string>();

  rec.duration_s = require_number(require(obj, "duration_s", rec.song_id, line), rec.song_id,
                                  "duration_s", line);

  const json& bounds = require(obj, "boundaries_s", rec.song_id, line);
  if (!bounds.is_array())
    throw ValidationError(rec.song_id, "boundaries_s", "expected an array", line);
  rec.boundaries_s.reserve(bounds.size());
  for (const json& b : bounds) {
    rec.boundaries_s.push_back(require_number(b, rec.song_id, "boundaries_s", line));
  }

  const json& src = require(obj, "source", rec.song_id, line);
  if (!src.is_string()) throw ValidationError(rec.song_id, "source", "expected a string", line);
  auto source = source_from_string(src.get<std::string>());
  if (!source) {
    throw ValidationError(rec.song_id, "source",
                          "expected 'reference' or 'predicted', got '" +
                              src.get<std::string>() + "'",
                          line);
  }
  rec.source = *source;
  return rec;
}

}  // namespace

std::string_view to_string(Source source) {
  return source == Source::reference ? "reference" : "predicted";
}

std::optional<Source> source_from_string(std::string_view text) {
  if (text == "reference") return Source::reference;
  if (text == "predicted") return Source::predicted;
  return std::nullopt;
}

std::vector<std::string> Corpus::categories() const {
  std::set<std::string> seen;
  for (const auto& r : records) seen.insert(r.category);
  return {seen.begin(), seen.end()};
}

const BoundaryRecord* Corpus::find(std::string_view song_id) const {
  for (const auto& r : records) {
    if (r.song_id == song_id) return &r;
  }
  return nullptr;
}

void validate_record(const BoundaryRecord& r) {
  if (r.song_id.empty()) throw ValidationError(r.song_id, "song_id", "must not be empty");
  if (r.category.empty()) throw ValidationError(r.song_id, "category", "must not be empty");
  if (!std::isfinite(r.duration_s) || r.duration_s <= 0.0) {
    throw ValidationError(r.song_id, "duration_s",
                          "must be a finite positive number, got " + format_number(r.duration_s));
  }
  for (std::size_t i = 0; i < r.boundaries_s.size(); ++i) {
    const double b = r.boundaries_s[i];
    if (!(b > 0.0 && b < r.duration_s)) {
      throw ValidationError(r.song_id, "boundaries_s",
                            "boundary " + format_number(b) + " outside (0, " +
                                format_number(r.duration_s) + ")");
    }
    if (i > 0 && !(b > r.boundaries_s[i - 1])) {
      throw ValidationError(r.song_id, "boundaries_s",
                            "not strictly increasing at index " + std::to_string(i));
    }
  }
}

Corpus parse_annotations(std::istream& in, const ParseOptions& options) {
  Corpus corpus;
  std::set<std::pair<Source, std::string>> ids;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.find_first_not_of(" \t") == std::string::npos) continue;

    json obj;
    try {
      obj = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ParseError(line, std::string("malformed JSON: ") + e.what());
    }
    BoundaryRecord rec = record_from_json(obj, line);

    if (options.on_warning) {
      for (const auto& [key, value] : obj.items()) {
        if (std::find(std::begin(kKeys), std::end(kKeys), key) == std::end(kKeys)) {
          options.on_warning("line " + std::to_string(line) + ": unknown key '" + key +
                             "' ignored");
        }
      }
    }

    try {
      validate_record(rec);
    } catch (const ValidationError& e) {
      throw ValidationError(e.song_id(), e.field(), e.reason(), line);
    }
    if (!ids.emplace(rec.source, rec.song_id).second) {
      throw ValidationError(rec.song_id, "song_id", "duplicate id within source", line);
    }
    if (rec.duration_s <= options.min_duration_s) {
      if (options.on_warning) {
        options.on_warning("line " + std::to_string(line) + ": song '" + rec.song_id +
                           "' skipped, duration " + format_number(rec.duration_s) +
                           " s <= " + format_number(options.min_duration_s) + " s");
      }
      continue;
    }
    corpus.records.push_back(std::move(rec));
  }
  return corpus;
}

Corpus parse_annotations(std::string_view text, const ParseOptions& options) {
  std::istringstream in{std::string(text)};
  return parse_annotations(in, options);
}

Corpus read_annotations_file(const std::string& path, const ParseOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open annotation file '" + path + "'");
  return parse_annotations(in, options);
}

std::string write_record(const BoundaryRecord& r) {
  std::string out = "{\"song_id\":";
  out += json(r.song_id).dump();
  out += ",\"category\":";
  out += json(r.category).dump();
  out += ",\"duration_s\":";
  out += format_seconds(r.duration_s);
  out += ",\"boundaries_s\":[";
  for (std::size_t i = 0; i < r.boundaries_s.size(); ++i) {
    if (i) out += ',';
    out += format_seconds(r.boundaries_s[i]);
  }
  out += "],\"source\":\"";
  out += to_string(r.source);
  out += "\"}";
  return out;
}

std::string write_annotations(const Corpus& corpus) {
  std::string out;
  for (const auto& r : corpus.records) {
    out += write_record(r);
    out += '\n';
  }
  return out;
}

std::vector<Motif> motifs_from_boundaries(const std::vector<double>& boundaries_s,
                                          double duration_s) {
  std::vector<Motif> motifs;
  motifs.reserve(boundaries_s.size() + 1);
  double onset = 0.0;
  for (double b : boundaries_s) {
    motifs.push_back({onset, b});
    onset = b;
  }
  motifs.push_back({onset, duration_s});
  return motifs;
}

}  // namespace folkseg
