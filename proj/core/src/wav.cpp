#include "folkseg/wav.hpp"

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <optional>

#include "folkseg/errors.hpp"

namespace folkseg {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t le16(std::span<const std::byte> b, std::size_t at) {
  return static_cast<std::uint16_t>(std::to_integer<unsigned>(b[at]) |
                                    (std::to_integer<unsigned>(b[at + 1]) << 8));
}

std::uint32_t le32(std::span<const std::byte> b, std::size_t at) {
  return static_cast<std::uint32_t>(le16(b, at)) | (static_cast<std::uint32_t>(le16(b, at + 2)) << 16);
}

bool tag_is(std::span<const std::byte> b, std::size_t at, const char* tag) {
  for (std::size_t i = 0; i < 4; ++i) {
    if (std::to_integer<char>(b[at + i]) != tag[i]) return false;
  }
  return true;
}

struct FormatChunk {
  std::uint16_t format_tag = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t block_align = 0;
  std::uint16_t bits = 0;
  std::uint16_t sub_format = 0;  // extensible only
};

std::string describe(const FormatChunk& f) {
  std::string tag = "format tag " + std::to_string(f.format_tag);
  if (f.format_tag == kFormatExtensible) tag += " (extensible, subformat " + std::to_string(f.sub_format) + ")";
  return tag + ", " + std::to_string(f.bits) + "-bit, " + std::to_string(f.channels) + " channel(s)";
}

}  // namespace

AudioBuffer read_wav(std::span<const std::byte> bytes) {
  if (bytes.size() < 12 || !tag_is(bytes, 0, "RIFF") || !tag_is(bytes, 8, "WAVE")) {
    throw ParseError("not a RIFF/WAVE file");
  }

  std::optional<FormatChunk> fmt;
  std::optional<std::span<const std::byte>> data;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint32_t size = le32(bytes, pos + 4);
    const std::size_t body = pos + 8;
    const std::size_t available = bytes.size() - body;
    if (tag_is(bytes, pos, "fmt ")) {
      if (size < 16 || size > available) throw ParseError("truncated fmt chunk");
      FormatChunk f;
      f.format_tag = le16(bytes, body);
      f.channels = le16(bytes, body + 2);
      f.sample_rate = le32(bytes, body + 4);
      f.block_align = le16(bytes, body + 12);
      f.bits = le16(bytes, body + 14);
      if (f.format_tag == kFormatExtensible && size >= 26) f.sub_format = le16(bytes, body + 24);
      fmt = f;
    } else if (tag_is(bytes, pos, "data")) {
      // Streams sometimes write a placeholder size; take what is present.
      data = bytes.subspan(body, std::min<std::size_t>(size, available));
    }
    pos = body + size + (size & 1u);
    if (data && fmt) break;
  }
  if (!fmt) throw ParseError("WAV file has no fmt chunk");
  if (!data) throw ParseError("WAV file has no data chunk");

  const bool pcm = fmt->format_tag == kFormatPcm ||
                   (fmt->format_tag == kFormatExtensible && fmt->sub_format == kFormatPcm);
  if (!pcm || fmt->bits != 16 || (fmt->channels != 1 && fmt->channels != 2)) {
    throw ParseError("unsupported WAV encoding: " + describe(*fmt) +
                     " (expected 16-bit PCM, mono or stereo)");
  }
  if (fmt->sample_rate == 0) throw ParseError("WAV sample rate is zero");

  const std::size_t frame_bytes = 2u * fmt->channels;
  const std::size_t frames = data->size() / frame_bytes;
  if (frames == 0) throw ParseError("WAV data chunk holds no samples");
  AudioBuffer audio;
  audio.sample_rate = fmt->sample_rate;
  audio.samples.resize(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    double acc = 0.0;
    for (std::size_t c = 0; c < fmt->channels; ++c) {
      acc += static_cast<std::int16_t>(le16(*data, i * frame_bytes + 2 * c));
    }
    audio.samples[i] = static_cast<float>(acc / fmt->channels / 32768.0);
  }
  return audio;
}

AudioBuffer read_wav_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open audio file '" + path + "'");
  std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return read_wav(std::as_bytes(std::span<const char>(raw)));
}

}  // namespace folkseg
