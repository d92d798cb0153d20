// Copyright 2026 The sslkit Authors
// SPDX-License-Identifier: Apache-2.0
//
// Runtime kernel selection.  The variant is picked once by CPU feature
// detection (never by timing) so the choice is stable for a given machine:
// avx512 > avx2 > neon > scalar.  The SSLKIT_KERNELS environment variable or
// force() can pin a specific variant, e.g. for equivalence testing.

#include "sslkit/kernels/kernels.hpp"

#include <cstdlib>
#include <vector>

#include "sslkit/common/errors.hpp"

namespace sslkit::kernels {

extern const KernelTable kScalarTable;
#if defined(__x86_64__) || defined(_M_X64)
extern const KernelTable kAvx2Table;
extern const KernelTable kAvx512Table;
#endif
#if defined(__aarch64__)
extern const KernelTable kNeonTable;
#endif

namespace {

std::vector<const KernelTable*> detect_tables() {
  std::vector<const KernelTable*> tables;
#if defined(__x86_64__) || defined(_M_X64)
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx512f")) tables.push_back(&kAvx512Table);
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
    tables.push_back(&kAvx2Table);
  }
#endif
#if defined(__aarch64__)
  tables.push_back(&kNeonTable);
#endif
  tables.push_back(&kScalarTable);
  return tables;
}

const std::vector<const KernelTable*>& usable_tables() {
  static const std::vector<const KernelTable*> tables = detect_tables();
  return tables;
}

const KernelTable* pick_initial() {
  if (const char* env = std::getenv("SSLKIT_KERNELS")) {
    if (const KernelTable* t = table_by_name(env)) return t;
    throw ConfigError(std::string("SSLKIT_KERNELS names an unavailable kernel "
                                  "variant: ") +
                      env);
  }
  return usable_tables().front();
}

const KernelTable*& active_slot() {
  static const KernelTable* slot = pick_initial();
  return slot;
}

}  // namespace

const KernelTable* table_by_name(const std::string& name) {
  for (const KernelTable* t : usable_tables()) {
    if (name == t->name) return t;
  }
  return nullptr;
}

const KernelTable& active() { return *active_slot(); }

void force(const std::string& name) {
  const KernelTable* t = table_by_name(name);
  if (t == nullptr) {
    throw ConfigError("unknown or unsupported kernel variant: " + name);
  }
  active_slot() = t;
}

std::vector<std::string> available() {
  std::vector<std::string> names;
  for (const KernelTable* t : usable_tables()) names.emplace_back(t->name);
  return names;
}

}  // namespace sslkit::kernels
