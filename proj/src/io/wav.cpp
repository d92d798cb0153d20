// Copyright 2026 The sslkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sslkit/io/wav.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "sslkit/common/errors.hpp"

namespace sslkit::io {

namespace {

constexpr uint16_t kFormatPcm = 1;
constexpr uint16_t kFormatFloat = 3;

void put_u16(std::string* out, uint16_t v) {
  out->push_back(static_cast<char>(v & 0xff));
  out->push_back(static_cast<char>((v >> 8) & 0xff));
}

void put_u32(std::string* out, uint32_t v) {
  for (int i = 0; i < 4; ++i) {
    out->push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
}

uint16_t get_u16(const unsigned char* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

uint32_t get_u32(const unsigned char* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) |
         (static_cast<uint32_t>(p[3]) << 24);
}

}  // namespace

void write_wav(const std::string& path, const dsp::MultichannelFrame& audio) {
  if (audio.num_channels < 1 || audio.frame_len < 1) {
    throw ContractError("write_wav: empty audio buffer");
  }
  const uint32_t channels = static_cast<uint32_t>(audio.num_channels);
  const uint32_t frames = static_cast<uint32_t>(audio.frame_len);
  const uint32_t data_bytes = channels * frames * 4;

  std::string out;
  out.reserve(data_bytes + 64);
  out += "RIFF";
  // 4 (WAVE) + (8 + 16) fmt + (8 + 4) fact + 8 data header + payload.
  put_u32(&out, 4 + 24 + 12 + 8 + data_bytes);
  out += "WAVE";
  out += "fmt ";
  put_u32(&out, 16);
  put_u16(&out, kFormatFloat);
  put_u16(&out, static_cast<uint16_t>(channels));
  put_u32(&out, static_cast<uint32_t>(audio.sample_rate));
  put_u32(&out, static_cast<uint32_t>(audio.sample_rate) * channels * 4);
  put_u16(&out, static_cast<uint16_t>(channels * 4));
  put_u16(&out, 32);
  // Non-PCM formats carry a fact chunk with the per-channel sample count.
  out += "fact";
  put_u32(&out, 4);
  put_u32(&out, frames);
  out += "data";
  put_u32(&out, data_bytes);

  std::vector<float> interleaved(static_cast<size_t>(channels) * frames);
  for (uint32_t ch = 0; ch < channels; ++ch) {
    const double* src = audio.channel(static_cast<int>(ch));
    for (uint32_t i = 0; i < frames; ++i) {
      interleaved[static_cast<size_t>(i) * channels + ch] =
          static_cast<float>(src[i]);
    }
  }
  const size_t header_len = out.size();
  out.resize(header_len + data_bytes);
  std::memcpy(out.data() + header_len, interleaved.data(), data_bytes);

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open for writing: " + path);
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw IoError("short write: " + path);
}

dsp::MultichannelFrame read_wav(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open: " + path);
  std::vector<unsigned char> raw((std::istreambuf_iterator<char>(f)),
                                 std::istreambuf_iterator<char>());
  if (raw.size() < 12 || std::memcmp(raw.data(), "RIFF", 4) != 0 ||
      std::memcmp(raw.data() + 8, "WAVE", 4) != 0) {
    throw IoError("not a RIFF/WAVE file: " + path);
  }

  uint16_t format = 0;
  uint16_t channels = 0;
  uint16_t bits = 0;
  uint32_t rate = 0;
  const unsigned char* data = nullptr;
  uint32_t data_len = 0;

  size_t pos = 12;
  while (pos + 8 <= raw.size()) {
    const char* id = reinterpret_cast<const char*>(raw.data() + pos);
    const uint32_t len = get_u32(raw.data() + pos + 4);
    const size_t body = pos + 8;
    if (body + len > raw.size()) {
      throw IoError("truncated chunk in " + path);
    }
    if (std::memcmp(id, "fmt ", 4) == 0) {
      if (len < 16) throw IoError("short fmt chunk in " + path);
      format = get_u16(raw.data() + body);
      channels = get_u16(raw.data() + body + 2);
      rate = get_u32(raw.data() + body + 4);
      bits = get_u16(raw.data() + body + 14);
    } else if (std::memcmp(id, "data", 4) == 0) {
      data = raw.data() + body;
      data_len = len;
    }
    pos = body + len + (len & 1);  // chunks are word-aligned
  }
  if (data == nullptr || channels == 0) {
    throw IoError("missing fmt/data chunk in " + path);
  }
  const bool is_float = format == kFormatFloat && bits == 32;
  const bool is_pcm16 = format == kFormatPcm && bits == 16;
  if (!is_float && !is_pcm16) {
    throw IoError("unsupported WAV encoding in " + path +
                  " (need float32 or pcm16)");
  }

  const uint32_t bytes_per_sample = bits / 8;
  const uint32_t total = data_len / bytes_per_sample;
  const uint32_t frames = total / channels;

  dsp::MultichannelFrame audio;
  audio.num_channels = channels;
  audio.frame_len = static_cast<int>(frames);
  audio.sample_rate = static_cast<int>(rate);
  audio.samples.resize(static_cast<size_t>(channels) * frames);
  for (uint32_t i = 0; i < frames; ++i) {
    for (uint16_t ch = 0; ch < channels; ++ch) {
      const unsigned char* s =
          data + (static_cast<size_t>(i) * channels + ch) * bytes_per_sample;
      double v;
      if (is_float) {
        float fv;
        std::memcpy(&fv, s, 4);
        v = fv;
      } else {
        const int16_t iv = static_cast<int16_t>(get_u16(s));
        v = iv / 32768.0;
      }
      audio.samples[static_cast<size_t>(ch) * frames + i] = v;
    }
  }
  return audio;
}

}  // namespace sslkit::io
