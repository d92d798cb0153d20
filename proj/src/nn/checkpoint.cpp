// Copyright 2026 The sslkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sslkit/nn/checkpoint.hpp"

#include <cstdint>
#include <fstream>
#include <map>

#include "sslkit/common/errors.hpp"

namespace sslkit::nn {

namespace {

constexpr char kMagic[4] = {'S', 'S', 'L', 'W'};
constexpr uint32_t kVersion = 1;

void write_u32(std::ostream& os, uint32_t v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

void write_u64(std::ostream& os, uint64_t v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

void write_string(std::ostream& os, const std::string& s) {
  write_u32(os, static_cast<uint32_t>(s.size()));
  os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

void write_tensor(std::ostream& os, const std::string& name, const Tensor& t) {
  write_string(os, name);
  write_u32(os, static_cast<uint32_t>(t.shape.size()));
  for (int d : t.shape) write_u32(os, static_cast<uint32_t>(d));
  os.write(reinterpret_cast<const char*>(t.data.data()),
           static_cast<std::streamsize>(t.data.size() * sizeof(double)));
}

uint32_t read_u32(std::istream& is, const std::string& path) {
  uint32_t v = 0;
  if (!is.read(reinterpret_cast<char*>(&v), sizeof(v))) {
    throw IoError("truncated checkpoint: " + path);
  }
  return v;
}

uint64_t read_u64(std::istream& is, const std::string& path) {
  uint64_t v = 0;
  if (!is.read(reinterpret_cast<char*>(&v), sizeof(v))) {
    throw IoError("truncated checkpoint: " + path);
  }
  return v;
}

std::string read_string(std::istream& is, const std::string& path) {
  const uint32_t len = read_u32(is, path);
  if (len > (1u << 24)) throw IoError("implausible string length in " + path);
  std::string s(len, '\0');
  if (!is.read(s.data(), len)) throw IoError("truncated checkpoint: " + path);
  return s;
}

Tensor read_tensor(std::istream& is, const std::string& path) {
  const uint32_t ndims = read_u32(is, path);
  if (ndims > 8) throw IoError("implausible tensor rank in " + path);
  std::vector<int> dims(ndims);
  for (uint32_t i = 0; i < ndims; ++i) {
    dims[i] = static_cast<int>(read_u32(is, path));
  }
  Tensor t(dims);
  if (!is.read(reinterpret_cast<char*>(t.data.data()),
               static_cast<std::streamsize>(t.data.size() * sizeof(double)))) {
    throw IoError("truncated checkpoint: " + path);
  }
  return t;
}

}  // namespace

void save_weights(Network& net, const std::string& path, const Adam* adam) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open checkpoint for writing: " + path);

  os.write(kMagic, sizeof(kMagic));
  write_u32(os, kVersion);
  const uint8_t arch = static_cast<uint8_t>(net.kind());
  os.write(reinterpret_cast<const char*>(&arch), 1);
  write_u64(os, net.seed());
  write_string(os, net.hyper_json().dump());

  const std::vector<ParamRef> params = net.params();
  const std::vector<BufferRef> buffers = net.buffers();
  uint32_t count = static_cast<uint32_t>(params.size() + buffers.size());
  if (adam != nullptr) {
    count += 1 + 2 * static_cast<uint32_t>(adam->moments().size());
  }
  write_u32(os, count);
  for (const ParamRef& p : params) write_tensor(os, p.name, *p.value);
  for (const BufferRef& b : buffers) write_tensor(os, b.name, *b.value);
  if (adam != nullptr) {
    Tensor step({1});
    step.data[0] = static_cast<double>(adam->step_count());
    write_tensor(os, "optim.step", step);
    for (const auto& [name, mv] : adam->moments()) {
      write_tensor(os, "optim.m." + name, mv.first);
      write_tensor(os, "optim.v." + name, mv.second);
    }
  }
  if (!os) throw IoError("failed writing checkpoint: " + path);
}

namespace {

struct ParsedCheckpoint {
  NetworkKind kind;
  uint64_t seed;
  nlohmann::json hyper;
  std::map<std::string, Tensor> table;
};

ParsedCheckpoint parse_checkpoint(const std::string& path,
                                  std::optional<NetworkKind> expected);

std::unique_ptr<Network> restore_network(const ParsedCheckpoint& parsed,
                                         const std::string& path) {
  std::unique_ptr<Network> net =
      build_network(parsed.kind, parsed.hyper, parsed.seed);
  auto restore = [&](const std::string& name, Tensor* dst) {
    auto it = parsed.table.find(name);
    if (it == parsed.table.end()) {
      throw IoError("checkpoint missing tensor " + name + " in " + path);
    }
    if (!(it->second.shape == dst->shape)) {
      throw ContractError("checkpoint tensor " + name + " has wrong shape");
    }
    dst->data = it->second.data;
  };
  for (ParamRef& p : net->params()) restore(p.name, p.value);
  for (BufferRef& b : net->buffers()) restore(b.name, b.value);
  return net;
}

}  // namespace

std::unique_ptr<Network> load_weights(const std::string& path,
                                      std::optional<NetworkKind> expected) {
  const ParsedCheckpoint parsed = parse_checkpoint(path, expected);
  return restore_network(parsed, path);
}

LoadedCheckpoint load_checkpoint(const std::string& path,
                                 const AdamConfig& adam_config,
                                 std::optional<NetworkKind> expected) {
  const ParsedCheckpoint parsed = parse_checkpoint(path, expected);
  LoadedCheckpoint out;
  out.net = restore_network(parsed, path);

  const auto step_it = parsed.table.find("optim.step");
  if (step_it == parsed.table.end()) return out;
  out.adam = std::make_unique<Adam>(adam_config);
  out.adam->set_step_count(static_cast<long>(step_it->second.data.at(0)));
  for (const auto& [name, tensor] : parsed.table) {
    if (name.rfind("optim.m.", 0) != 0) continue;
    const std::string param = name.substr(8);
    const auto v_it = parsed.table.find("optim.v." + param);
    if (v_it == parsed.table.end()) {
      throw IoError("checkpoint missing tensor optim.v." + param + " in " +
                    path);
    }
    out.adam->moments().emplace(param,
                                std::make_pair(tensor, v_it->second));
  }
  return out;
}

namespace {

ParsedCheckpoint parse_checkpoint(const std::string& path,
                                  std::optional<NetworkKind> expected) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open checkpoint: " + path);

  char magic[4];
  if (!is.read(magic, 4) || std::string(magic, 4) != std::string(kMagic, 4)) {
    throw IoError("not an SSLW checkpoint: " + path);
  }
  const uint32_t version = read_u32(is, path);
  if (version != kVersion) {
    throw IoError("unsupported checkpoint version " + std::to_string(version) +
                  " in " + path);
  }
  uint8_t arch = 0;
  if (!is.read(reinterpret_cast<char*>(&arch), 1)) {
    throw IoError("truncated checkpoint: " + path);
  }
  if (arch < 1 || arch > 3) {
    throw IoError("unknown architecture id in checkpoint: " + path);
  }
  const NetworkKind kind = static_cast<NetworkKind>(arch);
  if (expected.has_value() && kind != *expected) {
    throw ContractError("checkpoint holds a " + network_kind_name(kind) +
                        " but " + network_kind_name(*expected) +
                        " was requested");
  }
  const uint64_t seed = read_u64(is, path);
  nlohmann::json hyper;
  try {
    hyper = nlohmann::json::parse(read_string(is, path));
  } catch (const nlohmann::json::parse_error&) {
    throw IoError("corrupt hyperparameter block in " + path);
  }

  const uint32_t count = read_u32(is, path);
  ParsedCheckpoint parsed;
  parsed.kind = kind;
  parsed.seed = seed;
  parsed.hyper = std::move(hyper);
  for (uint32_t i = 0; i < count; ++i) {
    std::string name = read_string(is, path);
    parsed.table.emplace(std::move(name), read_tensor(is, path));
  }
  return parsed;
}

}  // namespace

}  // namespace sslkit::nn
