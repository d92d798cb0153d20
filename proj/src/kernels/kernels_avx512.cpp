// Copyright 2026 The sslkit Authors
// SPDX-License-Identifier: Apache-2.0
//
// AVX-512F kernel variants.  Compiled with -mavx512f; only dispatched to when
// the CPU reports the feature.  Column tails are handled with masked loads
// and stores, so there is no scalar remainder loop in the matmul paths.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include "sslkit/kernels/kernels.hpp"

namespace sslkit::kernels {

namespace {

// 4x16 register tile with an optional column mask for the ragged edge.
template <bool kTransposeA>
void matmul_rowstream512(const double* a, const double* b, double* c,
                         int m, int k, int n, bool accumulate) {
  const int m4 = m & ~3;
  auto a_at = [&](int row, int l) -> double {
    return kTransposeA ? a[static_cast<long>(l) * m + row]
                       : a[static_cast<long>(row) * k + l];
  };

  for (int j = 0; j < n; j += 16) {
    const int rem = n - j;
    const __mmask8 m0 = rem >= 8 ? 0xFF : static_cast<__mmask8>((1u << rem) - 1);
    const __mmask8 m1 =
        rem >= 16 ? 0xFF
                  : (rem > 8 ? static_cast<__mmask8>((1u << (rem - 8)) - 1) : 0);

    for (int i0 = 0; i0 < m4; i0 += 4) {
      __m512d acc[4][2];
      for (int t = 0; t < 4; ++t) {
        double* crow = c + static_cast<long>(i0 + t) * n + j;
        acc[t][0] = accumulate ? _mm512_maskz_loadu_pd(m0, crow)
                               : _mm512_setzero_pd();
        acc[t][1] = accumulate ? _mm512_maskz_loadu_pd(m1, crow + 8)
                               : _mm512_setzero_pd();
      }
      for (int l = 0; l < k; ++l) {
        const double* brow = b + static_cast<long>(l) * n + j;
        const __m512d b0 = _mm512_maskz_loadu_pd(m0, brow);
        const __m512d b1 = _mm512_maskz_loadu_pd(m1, brow + 8);
        for (int t = 0; t < 4; ++t) {
          const __m512d av = _mm512_set1_pd(a_at(i0 + t, l));
          acc[t][0] = _mm512_fmadd_pd(av, b0, acc[t][0]);
          acc[t][1] = _mm512_fmadd_pd(av, b1, acc[t][1]);
        }
      }
      for (int t = 0; t < 4; ++t) {
        double* crow = c + static_cast<long>(i0 + t) * n + j;
        _mm512_mask_storeu_pd(crow, m0, acc[t][0]);
        _mm512_mask_storeu_pd(crow + 8, m1, acc[t][1]);
      }
    }
    for (int i = m4; i < m; ++i) {
      double* crow = c + static_cast<long>(i) * n + j;
      __m512d acc0 = accumulate ? _mm512_maskz_loadu_pd(m0, crow)
                                : _mm512_setzero_pd();
      __m512d acc1 = accumulate ? _mm512_maskz_loadu_pd(m1, crow + 8)
                                : _mm512_setzero_pd();
      for (int l = 0; l < k; ++l) {
        const double* brow = b + static_cast<long>(l) * n + j;
        const __m512d av = _mm512_set1_pd(a_at(i, l));
        acc0 = _mm512_fmadd_pd(av, _mm512_maskz_loadu_pd(m0, brow), acc0);
        acc1 = _mm512_fmadd_pd(av, _mm512_maskz_loadu_pd(m1, brow + 8), acc1);
      }
      _mm512_mask_storeu_pd(crow, m0, acc0);
      _mm512_mask_storeu_pd(crow + 8, m1, acc1);
    }
  }
}

void matmul_nn_avx512(const double* a, const double* b, double* c,
                      int m, int k, int n, bool accumulate) {
  matmul_rowstream512<false>(a, b, c, m, k, n, accumulate);
}

void matmul_tn_avx512(const double* a, const double* b, double* c,
                      int m, int k, int n, bool accumulate) {
  matmul_rowstream512<true>(a, b, c, m, k, n, accumulate);
}

void matmul_nt_avx512(const double* a, const double* b, double* c,
                      int m, int k, int n, bool accumulate) {
  const int k8 = k & ~7;
  const int krem = k - k8;
  const __mmask8 mtail = static_cast<__mmask8>((1u << krem) - 1);
  for (int i = 0; i < m; ++i) {
    const double* arow = a + static_cast<long>(i) * k;
    double* crow = c + static_cast<long>(i) * n;
    int j = 0;
    for (; j + 2 <= n; j += 2) {
      const double* b0 = b + static_cast<long>(j) * k;
      const double* b1 = b + static_cast<long>(j + 1) * k;
      __m512d acc0 = _mm512_setzero_pd();
      __m512d acc1 = _mm512_setzero_pd();
      for (int l = 0; l < k8; l += 8) {
        const __m512d av = _mm512_loadu_pd(arow + l);
        acc0 = _mm512_fmadd_pd(av, _mm512_loadu_pd(b0 + l), acc0);
        acc1 = _mm512_fmadd_pd(av, _mm512_loadu_pd(b1 + l), acc1);
      }
      if (krem != 0) {
        const __m512d av = _mm512_maskz_loadu_pd(mtail, arow + k8);
        acc0 = _mm512_fmadd_pd(av, _mm512_maskz_loadu_pd(mtail, b0 + k8), acc0);
        acc1 = _mm512_fmadd_pd(av, _mm512_maskz_loadu_pd(mtail, b1 + k8), acc1);
      }
      const double s0 = _mm512_reduce_add_pd(acc0);
      const double s1 = _mm512_reduce_add_pd(acc1);
      crow[j] = accumulate ? crow[j] + s0 : s0;
      crow[j + 1] = accumulate ? crow[j + 1] + s1 : s1;
    }
    for (; j < n; ++j) {
      const double* brow = b + static_cast<long>(j) * k;
      __m512d acc = _mm512_setzero_pd();
      for (int l = 0; l < k8; l += 8) {
        acc = _mm512_fmadd_pd(_mm512_loadu_pd(arow + l),
                              _mm512_loadu_pd(brow + l), acc);
      }
      if (krem != 0) {
        acc = _mm512_fmadd_pd(_mm512_maskz_loadu_pd(mtail, arow + k8),
                              _mm512_maskz_loadu_pd(mtail, brow + k8), acc);
      }
      const double s = _mm512_reduce_add_pd(acc);
      crow[j] = accumulate ? crow[j] + s : s;
    }
  }
}

void corr_tau_avx512(const double* xre, const double* xim,
                     const double* cre, const double* sim, int n,
                     double* acc_re, double* acc_im) {
  __m512d ar = _mm512_setzero_pd();
  __m512d ai = _mm512_setzero_pd();
  const int n8 = n & ~7;
  for (int i = 0; i < n8; i += 8) {
    ar = _mm512_fmadd_pd(_mm512_loadu_pd(xre + i), _mm512_loadu_pd(cre + i), ar);
    ai = _mm512_fmadd_pd(_mm512_loadu_pd(xim + i), _mm512_loadu_pd(sim + i), ai);
  }
  const int rem = n - n8;
  if (rem != 0) {
    const __mmask8 mtail = static_cast<__mmask8>((1u << rem) - 1);
    ar = _mm512_fmadd_pd(_mm512_maskz_loadu_pd(mtail, xre + n8),
                         _mm512_maskz_loadu_pd(mtail, cre + n8), ar);
    ai = _mm512_fmadd_pd(_mm512_maskz_loadu_pd(mtail, xim + n8),
                         _mm512_maskz_loadu_pd(mtail, sim + n8), ai);
  }
  *acc_re += _mm512_reduce_add_pd(ar);
  *acc_im += _mm512_reduce_add_pd(ai);
}

}  // namespace

extern const KernelTable kAvx512Table;
const KernelTable kAvx512Table = {"avx512", matmul_nn_avx512, matmul_nt_avx512,
                                  matmul_tn_avx512, corr_tau_avx512};

}  // namespace sslkit::kernels

#endif  // x86_64
