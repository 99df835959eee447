#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace folkseg {

/// Mono audio with samples in [-1, 1].
struct AudioBuffer {
  double sample_rate = 0.0;
  std::vector<float> samples;

  double duration_s() const {
    return sample_rate > 0.0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
  }
};

/// Decodes a RIFF/WAVE file holding 16-bit PCM, mono or stereo. Stereo is
/// averaged to mono; samples are scaled by 1/32768. Throws ParseError for
/// truncated or non-RIFF input and for any other encoding (the message
/// names the format chunk that was found).
AudioBuffer read_wav(std::span<const std::byte> bytes);
AudioBuffer read_wav_file(const std::string& path);

}  // namespace folkseg
