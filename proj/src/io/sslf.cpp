// Copyright 2026 The sslkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sslkit/io/sslf.hpp"

#include <cstring>
#include <fstream>

#include "sslkit/common/errors.hpp"

namespace sslkit::io {

namespace {

constexpr uint32_t kVersion = 1;
constexpr uint32_t kMaxDims = 8;
constexpr uint32_t kMaxMetadata = 1u << 24;

void put_u32(std::ostream& out, uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 4);
}

uint32_t take_u32(std::istream& in, const std::string& path) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) {
    throw IoError("truncated SSLF file: " + path);
  }
  return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
         (static_cast<uint32_t>(b[2]) << 16) |
         (static_cast<uint32_t>(b[3]) << 24);
}

}  // namespace

void write_sslf(const std::string& path, const SslfFile& file) {
  if (file.dims.empty() || file.dims.size() > kMaxDims) {
    throw ContractError("write_sslf: dims must have 1..8 entries");
  }
  if (file.element_count() != file.data.size()) {
    throw ContractError("write_sslf: dims do not match payload size");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  out.write("SSLF", 4);
  put_u32(out, kVersion);
  out.put(static_cast<char>(file.kind));
  out.put(static_cast<char>(file.dims.size()));
  for (uint32_t d : file.dims) put_u32(out, d);
  put_u32(out, static_cast<uint32_t>(file.metadata_json.size()));
  out.write(file.metadata_json.data(),
            static_cast<std::streamsize>(file.metadata_json.size()));
  static_assert(sizeof(float) == 4);
  out.write(reinterpret_cast<const char*>(file.data.data()),
            static_cast<std::streamsize>(file.data.size() * 4));
  if (!out) throw IoError("short write: " + path);
}

SslfFile read_sslf(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, "SSLF", 4) != 0) {
    throw IoError("not an SSLF file: " + path);
  }
  const uint32_t version = take_u32(in, path);
  if (version != kVersion) {
    throw IoError("unsupported SSLF version in " + path);
  }
  SslfFile file;
  const int kind = in.get();
  const int ndims = in.get();
  if (kind == EOF || ndims == EOF) throw IoError("truncated SSLF file: " + path);
  if (ndims < 1 || static_cast<uint32_t>(ndims) > kMaxDims) {
    throw IoError("implausible SSLF rank in " + path);
  }
  file.kind = static_cast<SslfKind>(kind);
  file.dims.resize(ndims);
  for (int i = 0; i < ndims; ++i) file.dims[i] = take_u32(in, path);
  const uint32_t meta_len = take_u32(in, path);
  if (meta_len > kMaxMetadata) {
    throw IoError("implausible SSLF metadata length in " + path);
  }
  file.metadata_json.resize(meta_len);
  if (meta_len > 0 && !in.read(file.metadata_json.data(), meta_len)) {
    throw IoError("truncated SSLF file: " + path);
  }
  file.data.resize(file.element_count());
  if (!file.data.empty() &&
      !in.read(reinterpret_cast<char*>(file.data.data()),
               static_cast<std::streamsize>(file.data.size() * 4))) {
    throw IoError("truncated SSLF file: " + path);
  }
  return file;
}

}  // namespace sslkit::io
