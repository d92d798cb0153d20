// Copyright 2026 The sslkit Authors
// SPDX-License-Identifier: Apache-2.0
//
// Scalar reference kernels.  These are the semantic ground truth the SIMD
// variants are tested against; keep them as plain loops.

#include "sslkit/kernels/kernels.hpp"

namespace sslkit::kernels {

namespace {

void matmul_nn_scalar(const double* a, const double* b, double* c,
                      int m, int k, int n, bool accumulate) {
  for (int i = 0; i < m; ++i) {
    double* crow = c + static_cast<long>(i) * n;
    if (!accumulate) {
      for (int j = 0; j < n; ++j) crow[j] = 0.0;
    }
    const double* arow = a + static_cast<long>(i) * k;
    for (int l = 0; l < k; ++l) {
      const double av = arow[l];
      const double* brow = b + static_cast<long>(l) * n;
      for (int j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

void matmul_nt_scalar(const double* a, const double* b, double* c,
                      int m, int k, int n, bool accumulate) {
  for (int i = 0; i < m; ++i) {
    const double* arow = a + static_cast<long>(i) * k;
    double* crow = c + static_cast<long>(i) * n;
    for (int j = 0; j < n; ++j) {
      const double* brow = b + static_cast<long>(j) * k;
      double sum = 0.0;
      for (int l = 0; l < k; ++l) sum += arow[l] * brow[l];
      crow[j] = accumulate ? crow[j] + sum : sum;
    }
  }
}

void matmul_tn_scalar(const double* a, const double* b, double* c,
                      int m, int k, int n, bool accumulate) {
  if (!accumulate) {
    for (long i = 0; i < static_cast<long>(m) * n; ++i) c[i] = 0.0;
  }
  for (int l = 0; l < k; ++l) {
    const double* arow = a + static_cast<long>(l) * m;
    const double* brow = b + static_cast<long>(l) * n;
    for (int i = 0; i < m; ++i) {
      const double av = arow[i];
      double* crow = c + static_cast<long>(i) * n;
      for (int j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

void corr_tau_scalar(const double* xre, const double* xim,
                     const double* cre, const double* sim, int n,
                     double* acc_re, double* acc_im) {
  double ar = 0.0, ai = 0.0;
  for (int i = 0; i < n; ++i) {
    ar += xre[i] * cre[i];
    ai += xim[i] * sim[i];
  }
  *acc_re += ar;
  *acc_im += ai;
}

}  // namespace

extern const KernelTable kScalarTable;
const KernelTable kScalarTable = {
    "scalar", matmul_nn_scalar, matmul_nt_scalar, matmul_tn_scalar,
    corr_tau_scalar};

}  // namespace sslkit::kernels
