// Copyright 2026 The sslkit Authors
// SPDX-License-Identifier: Apache-2.0
//
// Data-parallel inner loops used by feature extraction and network training.
//
// Every kernel has a plain scalar reference implementation plus SIMD variants
// (AVX2+FMA and AVX-512 on x86-64, NEON on aarch64) selected once at startup
// from CPU capabilities.  All variants compute the same quantities with the
// same chunk boundaries, so a given binary on a given machine is bit-for-bit
// reproducible; scalar and SIMD variants agree to accumulation-order rounding
// and are equivalence-tested against each other.

#pragma once

#include <string>
#include <vector>

namespace sslkit::kernels {

// Row-major dense matrix products, double precision.
//
//   matmul_nn: C[m x n] (+)= A[m x k] * B[k x n]
//   matmul_nt: C[m x n] (+)= A[m x k] * B[n x k]^T   (B given row-major [n x k])
//   matmul_tn: C[m x n] (+)= A[k x m]^T * B[k x n]   (A given row-major [k x m])
//
// With accumulate == false, C is overwritten; otherwise the product is added.
using MatmulFn = void (*)(const double* a, const double* b, double* c,
                          int m, int k, int n, bool accumulate);

// Fused dual dot product over n entries:
//   *acc_re += sum_i xre[i] * cre[i]
//   *acc_im += sum_i xim[i] * sim[i]
// This is the per-delay inner loop of the GCC-PHAT correlation: xre/xim hold
// (possibly weighted) unit cross-power phasors, cre/sim one row of the
// cos/sin delay table.
using CorrTauFn = void (*)(const double* xre, const double* xim,
                           const double* cre, const double* sim, int n,
                           double* acc_re, double* acc_im);

struct KernelTable {
  const char* name;
  MatmulFn matmul_nn;
  MatmulFn matmul_nt;
  MatmulFn matmul_tn;
  CorrTauFn corr_tau;
};

// The variant selected for this process.  Resolution: force() if called,
// else the SSLKIT_KERNELS environment variable, else the best variant the
// CPU supports.  Selection is a pure function of the CPU, never of timing.
const KernelTable& active();

// Select a variant by name ("scalar", "avx2", "avx512", "neon").
// Throws ConfigError if the name is unknown or unsupported on this CPU.
void force(const std::string& name);

// Variants usable on this CPU, best first.
std::vector<std::string> available();

// Individual tables, for equivalence tests.  Null if not compiled in or not
// supported by the CPU.
const KernelTable* table_by_name(const std::string& name);

}  // namespace sslkit::kernels
