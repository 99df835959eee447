#pragma once

#include <string>
#include <vector>

#include "folkseg/annotation.hpp"
#include "folkseg/wav.hpp"

namespace folkseg {

struct SegmenterConfig {
  double frame_s = 0.025;
  double hop_s = 0.010;
  /// Frames with RMS below threshold_ratio * median(frame RMS) are silent.
  double threshold_ratio = 0.25;
  double min_silence_s = 0.3;
};

/// Throws ValidationError unless all fields are positive and hop <= frame.
void validate_config(const SegmenterConfig& config);

/// RMS of frames starting every hop; only whole frames are analysed.
std::vector<double> frame_rms(const AudioBuffer& audio, const SegmenterConfig& config);

/// Energy-based motif boundaries. Every maximal run of silent frames that
/// lasts at least min_silence_s and is bounded by sound on both sides gives
/// one boundary at the run's midpoint. Leading and trailing silence is not a
/// boundary. A zero median (mostly silent input) yields no boundaries.
std::vector<double> segment_energy(const AudioBuffer& audio, const SegmenterConfig& config = {});

/// Wraps segment_energy output as a predicted record.
BoundaryRecord segment_to_record(const AudioBuffer& audio, std::string song_id,
                                 std::string category, const SegmenterConfig& config = {});

}  // namespace folkseg
