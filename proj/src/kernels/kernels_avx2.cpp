// Copyright 2026 The sslkit Authors
// SPDX-License-Identifier: Apache-2.0
//
// AVX2+FMA kernel variants.  Compiled with -mavx2 -mfma; only dispatched to
// when the CPU reports both features.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include "sslkit/kernels/kernels.hpp"

namespace sslkit::kernels {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(lo) + _mm_cvtsd_f64(_mm_unpackhi_pd(lo, lo));
}

// 4x8 register tile: rows broadcast from A, columns streamed from B.
// Shared by the nn and tn products, which differ only in how A is indexed.
template <bool kTransposeA>
void matmul_rowstream(const double* a, const double* b, double* c,
                      int m, int k, int n, bool accumulate) {
  const int n8 = n & ~7;
  const int m4 = m & ~3;
  auto a_at = [&](int row, int l) -> double {
    // kTransposeA: A is [k x m] and we need A^T[row][l] = A[l][row].
    return kTransposeA ? a[static_cast<long>(l) * m + row]
                       : a[static_cast<long>(row) * k + l];
  };

  for (int i0 = 0; i0 < m4; i0 += 4) {
    for (int j = 0; j < n8; j += 8) {
      __m256d acc00, acc01, acc10, acc11, acc20, acc21, acc30, acc31;
      if (accumulate) {
        acc00 = _mm256_loadu_pd(c + static_cast<long>(i0) * n + j);
        acc01 = _mm256_loadu_pd(c + static_cast<long>(i0) * n + j + 4);
        acc10 = _mm256_loadu_pd(c + static_cast<long>(i0 + 1) * n + j);
        acc11 = _mm256_loadu_pd(c + static_cast<long>(i0 + 1) * n + j + 4);
        acc20 = _mm256_loadu_pd(c + static_cast<long>(i0 + 2) * n + j);
        acc21 = _mm256_loadu_pd(c + static_cast<long>(i0 + 2) * n + j + 4);
        acc30 = _mm256_loadu_pd(c + static_cast<long>(i0 + 3) * n + j);
        acc31 = _mm256_loadu_pd(c + static_cast<long>(i0 + 3) * n + j + 4);
      } else {
        acc00 = acc01 = acc10 = acc11 = _mm256_setzero_pd();
        acc20 = acc21 = acc30 = acc31 = _mm256_setzero_pd();
      }
      for (int l = 0; l < k; ++l) {
        const double* brow = b + static_cast<long>(l) * n + j;
        const __m256d b0 = _mm256_loadu_pd(brow);
        const __m256d b1 = _mm256_loadu_pd(brow + 4);
        __m256d av;
        av = _mm256_set1_pd(a_at(i0, l));
        acc00 = _mm256_fmadd_pd(av, b0, acc00);
        acc01 = _mm256_fmadd_pd(av, b1, acc01);
        av = _mm256_set1_pd(a_at(i0 + 1, l));
        acc10 = _mm256_fmadd_pd(av, b0, acc10);
        acc11 = _mm256_fmadd_pd(av, b1, acc11);
        av = _mm256_set1_pd(a_at(i0 + 2, l));
        acc20 = _mm256_fmadd_pd(av, b0, acc20);
        acc21 = _mm256_fmadd_pd(av, b1, acc21);
        av = _mm256_set1_pd(a_at(i0 + 3, l));
        acc30 = _mm256_fmadd_pd(av, b0, acc30);
        acc31 = _mm256_fmadd_pd(av, b1, acc31);
      }
      _mm256_storeu_pd(c + static_cast<long>(i0) * n + j, acc00);
      _mm256_storeu_pd(c + static_cast<long>(i0) * n + j + 4, acc01);
      _mm256_storeu_pd(c + static_cast<long>(i0 + 1) * n + j, acc10);
      _mm256_storeu_pd(c + static_cast<long>(i0 + 1) * n + j + 4, acc11);
      _mm256_storeu_pd(c + static_cast<long>(i0 + 2) * n + j, acc20);
      _mm256_storeu_pd(c + static_cast<long>(i0 + 2) * n + j + 4, acc21);
      _mm256_storeu_pd(c + static_cast<long>(i0 + 3) * n + j, acc30);
      _mm256_storeu_pd(c + static_cast<long>(i0 + 3) * n + j + 4, acc31);
    }
    // Column tail, scalar.
    for (int j = n8; j < n; ++j) {
      for (int t = 0; t < 4; ++t) {
        double sum = accumulate ? c[static_cast<long>(i0 + t) * n + j] : 0.0;
        for (int l = 0; l < k; ++l) {
          sum += a_at(i0 + t, l) * b[static_cast<long>(l) * n + j];
        }
        c[static_cast<long>(i0 + t) * n + j] = sum;
      }
    }
  }
  // Row tail: one row at a time, vectorized over columns.
  for (int i = m4; i < m; ++i) {
    for (int j = 0; j < n8; j += 8) {
      __m256d acc0, acc1;
      if (accumulate) {
        acc0 = _mm256_loadu_pd(c + static_cast<long>(i) * n + j);
        acc1 = _mm256_loadu_pd(c + static_cast<long>(i) * n + j + 4);
      } else {
        acc0 = acc1 = _mm256_setzero_pd();
      }
      for (int l = 0; l < k; ++l) {
        const double* brow = b + static_cast<long>(l) * n + j;
        const __m256d av = _mm256_set1_pd(a_at(i, l));
        acc0 = _mm256_fmadd_pd(av, _mm256_loadu_pd(brow), acc0);
        acc1 = _mm256_fmadd_pd(av, _mm256_loadu_pd(brow + 4), acc1);
      }
      _mm256_storeu_pd(c + static_cast<long>(i) * n + j, acc0);
      _mm256_storeu_pd(c + static_cast<long>(i) * n + j + 4, acc1);
    }
    for (int j = n8; j < n; ++j) {
      double sum = accumulate ? c[static_cast<long>(i) * n + j] : 0.0;
      for (int l = 0; l < k; ++l) {
        sum += a_at(i, l) * b[static_cast<long>(l) * n + j];
      }
      c[static_cast<long>(i) * n + j] = sum;
    }
  }
}

void matmul_nn_avx2(const double* a, const double* b, double* c,
                    int m, int k, int n, bool accumulate) {
  matmul_rowstream<false>(a, b, c, m, k, n, accumulate);
}

void matmul_tn_avx2(const double* a, const double* b, double* c,
                    int m, int k, int n, bool accumulate) {
  matmul_rowstream<true>(a, b, c, m, k, n, accumulate);
}

void matmul_nt_avx2(const double* a, const double* b, double* c,
                    int m, int k, int n, bool accumulate) {
  const int k4 = k & ~3;
  for (int i = 0; i < m; ++i) {
    const double* arow = a + static_cast<long>(i) * k;
    double* crow = c + static_cast<long>(i) * n;
    int j = 0;
    for (; j + 2 <= n; j += 2) {
      const double* b0 = b + static_cast<long>(j) * k;
      const double* b1 = b + static_cast<long>(j + 1) * k;
      __m256d acc0 = _mm256_setzero_pd();
      __m256d acc1 = _mm256_setzero_pd();
      for (int l = 0; l < k4; l += 4) {
        const __m256d av = _mm256_loadu_pd(arow + l);
        acc0 = _mm256_fmadd_pd(av, _mm256_loadu_pd(b0 + l), acc0);
        acc1 = _mm256_fmadd_pd(av, _mm256_loadu_pd(b1 + l), acc1);
      }
      double s0 = hsum(acc0), s1 = hsum(acc1);
      for (int l = k4; l < k; ++l) {
        s0 += arow[l] * b0[l];
        s1 += arow[l] * b1[l];
      }
      crow[j] = accumulate ? crow[j] + s0 : s0;
      crow[j + 1] = accumulate ? crow[j + 1] + s1 : s1;
    }
    for (; j < n; ++j) {
      const double* brow = b + static_cast<long>(j) * k;
      __m256d acc = _mm256_setzero_pd();
      for (int l = 0; l < k4; l += 4) {
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(arow + l),
                              _mm256_loadu_pd(brow + l), acc);
      }
      double s = hsum(acc);
      for (int l = k4; l < k; ++l) s += arow[l] * brow[l];
      crow[j] = accumulate ? crow[j] + s : s;
    }
  }
}

void corr_tau_avx2(const double* xre, const double* xim,
                   const double* cre, const double* sim, int n,
                   double* acc_re, double* acc_im) {
  __m256d ar0 = _mm256_setzero_pd(), ar1 = _mm256_setzero_pd();
  __m256d ai0 = _mm256_setzero_pd(), ai1 = _mm256_setzero_pd();
  const int n8 = n & ~7;
  for (int i = 0; i < n8; i += 8) {
    ar0 = _mm256_fmadd_pd(_mm256_loadu_pd(xre + i), _mm256_loadu_pd(cre + i), ar0);
    ai0 = _mm256_fmadd_pd(_mm256_loadu_pd(xim + i), _mm256_loadu_pd(sim + i), ai0);
    ar1 = _mm256_fmadd_pd(_mm256_loadu_pd(xre + i + 4), _mm256_loadu_pd(cre + i + 4), ar1);
    ai1 = _mm256_fmadd_pd(_mm256_loadu_pd(xim + i + 4), _mm256_loadu_pd(sim + i + 4), ai1);
  }
  double ar = hsum(_mm256_add_pd(ar0, ar1));
  double ai = hsum(_mm256_add_pd(ai0, ai1));
  for (int i = n8; i < n; ++i) {
    ar += xre[i] * cre[i];
    ai += xim[i] * sim[i];
  }
  *acc_re += ar;
  *acc_im += ai;
}

}  // namespace

extern const KernelTable kAvx2Table;
const KernelTable kAvx2Table = {
    "avx2", matmul_nn_avx2, matmul_nt_avx2, matmul_tn_avx2, corr_tau_avx2};

}  // namespace sslkit::kernels

#endif  // x86_64
