// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sdsn/transform.hpp"

namespace sdsn {

enum class SampleFormat { Int16, Int32, Float32 };

struct WavInfo {
  int channels = 0;
  int sample_rate = 0;
  int bits_per_sample = 0;
  SampleFormat format = SampleFormat::Int16;
  std::int64_t frames = 0;
};

struct WavAudio {
  WavInfo info;
  Signal signal;  // channels averaged, samples in [-1, 1)
};

// PCM 16/32-bit integer and 32-bit float, including WAVE_FORMAT_EXTENSIBLE.
// Errors are IoError and name the byte offset of the offending field.
WavAudio read_wav(const std::string& path);
WavAudio parse_wav(const std::vector<std::uint8_t>& bytes);

// Interleaved samples, clipped to [-1, 1] for integer formats.
std::vector<std::uint8_t> encode_wav(const std::vector<double>& interleaved, int channels, int sample_rate,
                                     SampleFormat format);
void write_wav(const std::string& path, const std::vector<double>& interleaved, int channels, int sample_rate,
               SampleFormat format);

}  // namespace sdsn
