#include "folkseg/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "folkseg/errors.hpp"
#include "folkseg/format.hpp"

namespace folkseg {
namespace {

using nlohmann::json;

// Keeps clamped boundaries strictly inside (0, duration).
constexpr double kEdgeMarginS = 1e-6;

json duration_to_json(const DurationDistribution& dist) {
  if (const auto* ln = std::get_if<LogNormalDurations>(&dist)) {
    return json{{"type", "lognormal"}, {"mu_log2", ln->mu_log2}, {"sigma_log2", ln->sigma_log2}};
  }
  const auto& d = std::get<DiscreteDurations>(dist);
  return json{{"type", "discrete"}, {"values_s", d.values_s}, {"weights", d.weights}};
}

DurationDistribution duration_from_json(const json& j, const std::string& name) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "lognormal") {
    return LogNormalDurations{j.at("mu_log2").get<double>(), j.at("sigma_log2").get<double>()};
  }
  if (type == "discrete") {
    return DiscreteDurations{j.at("values_s").get<std::vector<double>>(),
                             j.at("weights").get<std::vector<double>>()};
  }
  throw ValidationError(name, "durations.type", "unknown distribution type '" + type + "'");
}

}  // namespace

void validate_profile(const CategoryProfile& p) {
  if (p.name.empty()) throw ValidationError(p.name, "name", "profile name must not be empty");
  if (!(p.song_len_min_s > 0.0) || !(p.song_len_max_s >= p.song_len_min_s) ||
      !std::isfinite(p.song_len_max_s)) {
    throw ValidationError(p.name, "song_len_s", "need 0 < min <= max");
  }
  if (const auto* ln = std::get_if<LogNormalDurations>(&p.durations)) {
    if (!std::isfinite(ln->mu_log2) || !(ln->sigma_log2 >= 0.0) || !std::isfinite(ln->sigma_log2)) {
      throw ValidationError(p.name, "durations", "lognormal needs finite mu and sigma >= 0");
    }
    return;
  }
  const auto& d = std::get<DiscreteDurations>(p.durations);
  if (d.values_s.empty() || d.values_s.size() != d.weights.size()) {
    throw ValidationError(p.name, "durations", "discrete values and weights must be non-empty and equal length");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < d.values_s.size(); ++i) {
    if (!(d.values_s[i] > 0.0) || !std::isfinite(d.values_s[i])) {
      throw ValidationError(p.name, "durations.values_s", "durations must be positive");
    }
    if (!(d.weights[i] >= 0.0) || !std::isfinite(d.weights[i])) {
      throw ValidationError(p.name, "durations.weights", "weights must be non-negative");
    }
    total += d.weights[i];
  }
  if (!(total > 0.0)) throw ValidationError(p.name, "durations.weights", "weights sum to zero");
}

double draw_duration(const DurationDistribution& dist, Rng& rng) {
  if (const auto* ln = std::get_if<LogNormalDurations>(&dist)) {
    if (ln->sigma_log2 == 0.0) return std::exp2(ln->mu_log2);
    return std::exp2(rng.normal(ln->mu_log2, ln->sigma_log2));
  }
  const auto& d = std::get<DiscreteDurations>(dist);
  if (d.values_s.size() == 1) return d.values_s.front();
  const double total = std::accumulate(d.weights.begin(), d.weights.end(), 0.0);
  double u = rng.uniform() * total;
  for (std::size_t i = 0; i < d.values_s.size(); ++i) {
    if (u < d.weights[i]) return d.values_s[i];
    u -= d.weights[i];
  }
  return d.values_s.back();
}

BoundaryRecord generate_song(const CategoryProfile& profile, Rng& rng, std::string song_id) {
  validate_profile(profile);
  BoundaryRecord rec;
  rec.song_id = std::move(song_id);
  rec.category = profile.name;
  rec.source = Source::reference;
  rec.duration_s = profile.song_len_min_s == profile.song_len_max_s
                       ? profile.song_len_min_s
                       : rng.uniform(profile.song_len_min_s, profile.song_len_max_s);
  double t = 0.0;
  for (;;) {
    const double next = t + draw_duration(profile.durations, rng);
    if (next >= rec.duration_s) break;
    if (next > t) rec.boundaries_s.push_back(next);
    t = next;
  }
  return rec;
}

Corpus generate_corpus(const std::vector<CategoryProfile>& profiles,
                       std::size_t songs_per_category, std::uint64_t seed) {
  if (profiles.empty()) throw DataError("at least one category profile is required");
  Corpus corpus;
  corpus.records.reserve(profiles.size() * songs_per_category);
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    const std::uint64_t category_seed = mix_seed(seed, i);
    for (std::size_t j = 0; j < songs_per_category; ++j) {
      Rng rng(mix_seed(category_seed, j));
      std::ostringstream id;
      id << profiles[i].name << '_';
      id.width(4);
      id.fill('0');
      id << j;
      corpus.records.push_back(generate_song(profiles[i], rng, id.str()));
    }
  }
  return corpus;
}

void validate_jitter(const JitterSpec& s) {
  if (!(s.sigma_s >= 0.0) || !std::isfinite(s.sigma_s)) {
    throw ValidationError("", "jitter.sigma_s", "must be >= 0");
  }
  if (!(s.p_drop >= 0.0 && s.p_drop <= 1.0)) {
    throw ValidationError("", "jitter.p_drop", "must be in [0, 1]");
  }
  if (!(s.p_insert >= 0.0 && s.p_insert <= 1.0)) {
    throw ValidationError("", "jitter.p_insert", "must be in [0, 1]");
  }
}

BoundaryRecord jitter_boundaries(const BoundaryRecord& record, const JitterSpec& spec, Rng& rng) {
  validate_jitter(spec);
  BoundaryRecord out = record;
  out.source = Source::predicted;
  out.boundaries_s.clear();

  const double margin = std::min(kEdgeMarginS, record.duration_s / 4.0);
  const double lo = margin;
  const double hi = record.duration_s - margin;
  for (double b : record.boundaries_s) {
    // One uniform per decision keeps the stream layout independent of the
    // outcome of earlier decisions.
    const bool drop = rng.bernoulli(spec.p_drop);
    const bool insert = rng.bernoulli(spec.p_insert);
    if (!drop) {
      double t = spec.sigma_s > 0.0 ? b + rng.normal(0.0, spec.sigma_s) : b;
      if (!(t > 0.0 && t < record.duration_s)) t = std::clamp(t, lo, hi);
      out.boundaries_s.push_back(t);
    }
    if (insert) out.boundaries_s.push_back(rng.uniform(lo, hi));
  }
  std::sort(out.boundaries_s.begin(), out.boundaries_s.end());
  out.boundaries_s.erase(std::unique(out.boundaries_s.begin(), out.boundaries_s.end()),
                         out.boundaries_s.end());
  return out;
}

Corpus jitter_corpus(const Corpus& corpus, const JitterSpec& spec, std::uint64_t seed) {
  Corpus out;
  out.records.reserve(corpus.records.size());
  for (std::size_t i = 0; i < corpus.records.size(); ++i) {
    Rng rng(mix_seed(seed, i));
    out.records.push_back(jitter_boundaries(corpus.records[i], spec, rng));
  }
  return out;
}

std::vector<CategoryProfile> default_profiles() {
  // mu sets the motif rate (about 60 / 2^mu motifs per minute), sigma the
  // spread of log2 durations across 0.2-wide bins.
  return {
      {"agricultural", 90.0, 240.0, LogNormalDurations{1.2, 0.6}, "high count, high entropy"},
      {"artisan", 90.0, 240.0, LogNormalDurations{1.75, 0.35}, "average count, average entropy"},
      {"entertainment", 90.0, 240.0, LogNormalDurations{1.1, 0.1}, "high count, low entropy"},
      {"eosayong", 90.0, 240.0, LogNormalDurations{2.6, 0.6}, "lowest count, high entropy"},
      {"lament", 90.0, 240.0, LogNormalDurations{2.2, 0.2}, "low count, low entropy"},
      {"lullaby", 90.0, 240.0, LogNormalDurations{1.8, 0.1}, "moderate count, low entropy"},
      {"minstrel", 90.0, 240.0, LogNormalDurations{1.3, 0.12}, "high count, low entropy"},
  };
}

std::vector<CategoryProfile> parse_profiles(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed profile file: ") + e.what());
  }
  std::vector<CategoryProfile> out;
  try {
    for (const json& j : root.at("profiles")) {
      CategoryProfile p;
      p.name = j.at("name").get<std::string>();
      const auto len = j.at("song_len_s").get<std::vector<double>>();
      if (len.size() != 2) throw ValidationError(p.name, "song_len_s", "expected [min, max]");
      p.song_len_min_s = len[0];
      p.song_len_max_s = len[1];
      p.durations = duration_from_json(j.at("durations"), p.name);
      if (auto it = j.find("traits"); it != j.end()) p.traits = it->get<std::string>();
      validate_profile(p);
      out.push_back(std::move(p));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid profile file: ") + e.what());
  }
  if (out.empty()) throw ValidationError("", "profiles", "profile list is empty");
  return out;
}

std::vector<CategoryProfile> read_profiles_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open profile file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_profiles(buf.str());
}

std::string write_profiles(const std::vector<CategoryProfile>& profiles) {
  json list = json::array();
  for (const auto& p : profiles) {
    json j{{"name", p.name},
           {"song_len_s", {p.song_len_min_s, p.song_len_max_s}},
           {"durations", duration_to_json(p.durations)}};
    if (!p.traits.empty()) j["traits"] = p.traits;
    list.push_back(std::move(j));
  }
  return json{{"profiles", list}}.dump(2) + "\n";
}

}  // namespace folkseg
