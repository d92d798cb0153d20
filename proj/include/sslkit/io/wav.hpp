// Copyright 2026 The sslkit Authors
// SPDX-License-Identifier: Apache-2.0
//
// Minimal RIFF/WAVE reader and writer.  The toolkit emits multichannel
// 32-bit IEEE float at 48 kHz; the reader additionally accepts 16-bit PCM
// so user-supplied source material can be ingested directly.

#ifndef SSLKIT_IO_WAV_HPP_
#define SSLKIT_IO_WAV_HPP_

#include <string>

#include "sslkit/dsp/features.hpp"

namespace sslkit::io {

// Writes audio.samples (row-major [channels][frames]) as interleaved
// 32-bit float WAV.  Throws IoError on filesystem failure.
void write_wav(const std::string& path, const dsp::MultichannelFrame& audio);

// Reads a float32 or pcm16 WAV into channel-major layout.  PCM samples are
// scaled to [-1, 1) by 1/32768.  Throws IoError on malformed files.
dsp::MultichannelFrame read_wav(const std::string& path);

}  // namespace sslkit::io

#endif  // SSLKIT_IO_WAV_HPP_
