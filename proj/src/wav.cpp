// SPDX-License-Identifier: Apache-2.0
#include "sdsn/wav.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

namespace sdsn {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& b) : b_(b) {}

  void need(size_t offset, size_t n, const char* what) const {
    if (offset + n > b_.size()) {
      throw IoError(std::string("WAV: truncated ") + what + " at byte offset " + std::to_string(offset));
    }
  }
  std::uint32_t u32(size_t off, const char* what) const {
    need(off, 4, what);
    return static_cast<std::uint32_t>(b_[off]) | static_cast<std::uint32_t>(b_[off + 1]) << 8 |
           static_cast<std::uint32_t>(b_[off + 2]) << 16 | static_cast<std::uint32_t>(b_[off + 3]) << 24;
  }
  std::uint16_t u16(size_t off, const char* what) const {
    need(off, 2, what);
    return static_cast<std::uint16_t>(b_[off] | b_[off + 1] << 8);
  }
  bool tag(size_t off, const char* t) const {
    return off + 4 <= b_.size() && std::memcmp(b_.data() + off, t, 4) == 0;
  }

 private:
  const std::vector<std::uint8_t>& b_;
};

[[noreturn]] void fail(const std::string& msg, size_t offset) {
  throw IoError("WAV: " + msg + " at byte offset " + std::to_string(offset));
}

}  // namespace

WavAudio parse_wav(const std::vector<std::uint8_t>& bytes) {
  const Reader rd(bytes);
  if (!rd.tag(0, "RIFF")) fail("missing RIFF tag", 0);
  if (!rd.tag(8, "WAVE")) fail("missing WAVE tag", 8);

  WavAudio out;
  WavInfo& info = out.info;
  bool have_fmt = false;
  size_t data_offset = 0, data_size = 0;
  bool have_data = false;

  size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint32_t size = rd.u32(pos + 4, "chunk size");
    const size_t body = pos + 8;
    if (rd.tag(pos, "fmt ")) {
      if (size < 16) fail("fmt chunk shorter than 16 bytes", pos + 4);
      rd.need(body, 16, "fmt chunk");
      std::uint16_t format = rd.u16(body, "format tag");
      info.channels = rd.u16(body + 2, "channel count");
      info.sample_rate = static_cast<int>(rd.u32(body + 4, "sample rate"));
      info.bits_per_sample = rd.u16(body + 14, "bits per sample");
      if (format == kFormatExtensible) {
        if (size < 40) fail("extensible fmt chunk shorter than 40 bytes", pos + 4);
        format = rd.u16(body + 24, "extensible sub-format");
      }
      if (info.channels < 1) fail("channel count must be positive", body + 2);
      if (info.sample_rate < 1) fail("sample rate must be positive", body + 4);
      if (format == kFormatPcm && info.bits_per_sample == 16) {
        info.format = SampleFormat::Int16;
      } else if (format == kFormatPcm && info.bits_per_sample == 32) {
        info.format = SampleFormat::Int32;
      } else if (format == kFormatFloat && info.bits_per_sample == 32) {
        info.format = SampleFormat::Float32;
      } else {
        fail("unsupported encoding (format tag " + std::to_string(format) + ", " +
                 std::to_string(info.bits_per_sample) + " bits)",
             body);
      }
      have_fmt = true;
    } else if (rd.tag(pos, "data")) {
      if (!have_fmt) fail("data chunk before fmt chunk", pos);
      data_offset = body;
      data_size = std::min<size_t>(size, bytes.size() - body);
      have_data = true;
      break;
    }
    pos = body + size + (size & 1U);
  }
  if (!have_fmt) fail("no fmt chunk", pos);
  if (!have_data) fail("no data chunk", pos);

  const int bytes_per_sample = info.bits_per_sample / 8;
  const size_t frame_bytes = static_cast<size_t>(bytes_per_sample) * info.channels;
  info.frames = static_cast<std::int64_t>(data_size / frame_bytes);
  out.signal.sample_rate = info.sample_rate;
  out.signal.samples.assign(static_cast<size_t>(info.frames), 0.0);

  const std::uint8_t* p = bytes.data() + data_offset;
  for (std::int64_t f = 0; f < info.frames; ++f) {
    double acc = 0.0;
    for (int c = 0; c < info.channels; ++c) {
      const std::uint8_t* s = p + (f * info.channels + c) * bytes_per_sample;
      switch (info.format) {
        case SampleFormat::Int16:
          acc += static_cast<std::int16_t>(s[0] | s[1] << 8) / 32768.0;
          break;
        case SampleFormat::Int32: {
          const std::uint32_t u = static_cast<std::uint32_t>(s[0]) | static_cast<std::uint32_t>(s[1]) << 8 |
                                  static_cast<std::uint32_t>(s[2]) << 16 | static_cast<std::uint32_t>(s[3]) << 24;
          acc += static_cast<std::int32_t>(u) / 2147483648.0;
          break;
        }
        case SampleFormat::Float32: {
          const std::uint32_t u = static_cast<std::uint32_t>(s[0]) | static_cast<std::uint32_t>(s[1]) << 8 |
                                  static_cast<std::uint32_t>(s[2]) << 16 | static_cast<std::uint32_t>(s[3]) << 24;
          acc += std::bit_cast<float>(u);
          break;
        }
      }
    }
    out.signal.samples[static_cast<size_t>(f)] = acc / info.channels;
  }
  return out;
}

WavAudio read_wav(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path);
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  try {
    return parse_wav(bytes);
  } catch (const IoError& e) {
    throw IoError(path + ": " + e.what());
  }
}

std::vector<std::uint8_t> encode_wav(const std::vector<double>& interleaved, int channels, int sample_rate,
                                     SampleFormat format) {
  if (channels < 1 || sample_rate < 1) throw InvalidParameter("encode_wav: bad channel count or rate");
  const int bits = format == SampleFormat::Int16 ? 16 : 32;
  const std::uint32_t data_bytes = static_cast<std::uint32_t>(interleaved.size() * (bits / 8));
  std::vector<std::uint8_t> out;
  const auto put16 = [&](std::uint32_t v) {
    out.push_back(v & 0xFF);
    out.push_back((v >> 8) & 0xFF);
  };
  const auto put32 = [&](std::uint32_t v) {
    put16(v & 0xFFFF);
    put16(v >> 16);
  };
  const auto tag = [&](const char* t) { out.insert(out.end(), t, t + 4); };

  tag("RIFF");
  put32(36 + data_bytes);
  tag("WAVE");
  tag("fmt ");
  put32(16);
  put16(format == SampleFormat::Float32 ? kFormatFloat : kFormatPcm);
  put16(static_cast<std::uint32_t>(channels));
  put32(static_cast<std::uint32_t>(sample_rate));
  put32(static_cast<std::uint32_t>(sample_rate * channels * bits / 8));
  put16(static_cast<std::uint32_t>(channels * bits / 8));
  put16(static_cast<std::uint32_t>(bits));
  tag("data");
  put32(data_bytes);
  for (double v : interleaved) {
    switch (format) {
      case SampleFormat::Int16:
        put16(static_cast<std::uint16_t>(static_cast<std::int16_t>(std::lround(std::clamp(v, -1.0, 1.0) * 32767.0))));
        break;
      case SampleFormat::Int32:
        put32(static_cast<std::uint32_t>(
            static_cast<std::int32_t>(std::llround(std::clamp(v, -1.0, 1.0) * 2147483647.0))));
        break;
      case SampleFormat::Float32:
        put32(std::bit_cast<std::uint32_t>(static_cast<float>(v)));
        break;
    }
  }
  return out;
}

void write_wav(const std::string& path, const std::vector<double>& interleaved, int channels, int sample_rate,
               SampleFormat format) {
  const auto bytes = encode_wav(interleaved, channels, sample_rate, format);
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open " + path + " for writing");
  os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw IoError("write failed for " + path);
}

}  // namespace sdsn
