// Copyright 2026 The sslkit Authors
// SPDX-License-Identifier: Apache-2.0
//
// SSLF ("sound source localization frames") container: a small binary
// format for per-frame likelihood grids and feature tensors.  Layout, all
// little-endian:
//
//   magic "SSLF" | u32 version | u8 kind | u8 ndims | u32 dims[ndims]
//   | u32 metadata_len | metadata (UTF-8 JSON) | f32 payload, row-major
//
// The metadata block carries the resolved run configuration so every
// artifact is self-describing.

#ifndef SSLKIT_IO_SSLF_HPP_
#define SSLKIT_IO_SSLF_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace sslkit::io {

enum class SslfKind : uint8_t {
  kLikelihood = 1,  // [frames][360]
  kFeature = 2,     // arbitrary feature tensor
};

struct SslfFile {
  SslfKind kind = SslfKind::kLikelihood;
  std::vector<uint32_t> dims;
  std::string metadata_json;
  std::vector<float> data;

  size_t element_count() const {
    size_t n = 1;
    for (uint32_t d : dims) n *= d;
    return dims.empty() ? 0 : n;
  }
};

void write_sslf(const std::string& path, const SslfFile& file);
SslfFile read_sslf(const std::string& path);

}  // namespace sslkit::io

#endif  // SSLKIT_IO_SSLF_HPP_
