#include "folkseg/segmenter.hpp"

#include <algorithm>
#include <cmath>

#include "folkseg/errors.hpp"

namespace folkseg {
namespace {

double median(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

}  // namespace

void validate_config(const SegmenterConfig& c) {
  auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!positive(c.frame_s)) throw ValidationError("", "frame_s", "must be positive");
  if (!positive(c.hop_s)) throw ValidationError("", "hop_s", "must be positive");
  if (!positive(c.threshold_ratio)) throw ValidationError("", "threshold_ratio", "must be positive");
  if (!positive(c.min_silence_s)) throw ValidationError("", "min_silence_s", "must be positive");
  if (c.hop_s > c.frame_s) throw ValidationError("", "hop_s", "must not exceed frame_s");
}

std::vector<double> frame_rms(const AudioBuffer& audio, const SegmenterConfig& config) {
  validate_config(config);
  const auto frame = static_cast<std::size_t>(std::lround(config.frame_s * audio.sample_rate));
  const auto hop = static_cast<std::size_t>(std::lround(config.hop_s * audio.sample_rate));
  if (frame == 0 || hop == 0) {
    throw ValidationError("", "frame_s", "frame and hop must span at least one sample");
  }
  std::vector<double> rms;
  if (audio.samples.size() < frame) return rms;
  rms.reserve((audio.samples.size() - frame) / hop + 1);
  for (std::size_t start = 0; start + frame <= audio.samples.size(); start += hop) {
    double sum = 0.0;
    for (std::size_t i = start; i < start + frame; ++i) {
      const double s = audio.samples[i];
      sum += s * s;
    }
    rms.push_back(std::sqrt(sum / static_cast<double>(frame)));
  }
  return rms;
}

std::vector<double> segment_energy(const AudioBuffer& audio, const SegmenterConfig& config) {
  const std::vector<double> rms = frame_rms(audio, config);
  if (rms.empty()) return {};
  const double threshold = config.threshold_ratio * median(rms);
  if (!(threshold > 0.0)) return {};

  const double rate = audio.sample_rate;
  const auto frame = static_cast<std::size_t>(std::lround(config.frame_s * rate));
  const auto hop = static_cast<std::size_t>(std::lround(config.hop_s * rate));
  const double duration = audio.duration_s();

  std::vector<double> boundaries;
  std::size_t i = 0;
  while (i < rms.size()) {
    if (rms[i] >= threshold) {
      ++i;
      continue;
    }
    const std::size_t first = i;
    while (i < rms.size() && rms[i] < threshold) ++i;
    const std::size_t last = i - 1;
    if (first == 0 || i == rms.size()) continue;  // touches the start or end

    // The run covers the samples of its frames: [first*hop, last*hop + frame).
    const double begin_s = static_cast<double>(first * hop) / rate;
    const double end_s = static_cast<double>(last * hop + frame) / rate;
    if (end_s - begin_s + 1e-9 < config.min_silence_s) continue;
    const double mid = 0.5 * (begin_s + end_s);
    if (mid > 0.0 && mid < duration && (boundaries.empty() || mid > boundaries.back())) {
      boundaries.push_back(mid);
    }
  }
  return boundaries;
}

BoundaryRecord segment_to_record(const AudioBuffer& audio, std::string song_id,
                                 std::string category, const SegmenterConfig& config) {
  BoundaryRecord rec;
  rec.song_id = std::move(song_id);
  rec.category = std::move(category);
  rec.duration_s = audio.duration_s();
  rec.boundaries_s = segment_energy(audio, config);
  rec.source = Source::predicted;
  return rec;
}

}  // namespace folkseg
