// Copyright 2026 The sslkit Authors
// SPDX-License-Identifier: Apache-2.0
//
// NEON kernel variants for aarch64.  float64x2_t is baseline on aarch64, so
// no extra compile flags or runtime checks are needed there.

#if defined(__aarch64__)

#include <arm_neon.h>

#include "sslkit/kernels/kernels.hpp"

namespace sslkit::kernels {

namespace {

// 4x4 register tile: rows broadcast from A, columns streamed from B.
template <bool kTransposeA>
void matmul_rowstream_neon(const double* a, const double* b, double* c,
                           int m, int k, int n, bool accumulate) {
  const int n4 = n & ~3;
  const int m4 = m & ~3;
  auto a_at = [&](int row, int l) -> double {
    return kTransposeA ? a[static_cast<long>(l) * m + row]
                       : a[static_cast<long>(row) * k + l];
  };

  for (int i0 = 0; i0 < m4; i0 += 4) {
    for (int j = 0; j < n4; j += 4) {
      float64x2_t acc[4][2];
      for (int t = 0; t < 4; ++t) {
        double* crow = c + static_cast<long>(i0 + t) * n + j;
        if (accumulate) {
          acc[t][0] = vld1q_f64(crow);
          acc[t][1] = vld1q_f64(crow + 2);
        } else {
          acc[t][0] = vdupq_n_f64(0.0);
          acc[t][1] = vdupq_n_f64(0.0);
        }
      }
      for (int l = 0; l < k; ++l) {
        const double* brow = b + static_cast<long>(l) * n + j;
        const float64x2_t b0 = vld1q_f64(brow);
        const float64x2_t b1 = vld1q_f64(brow + 2);
        for (int t = 0; t < 4; ++t) {
          const float64x2_t av = vdupq_n_f64(a_at(i0 + t, l));
          acc[t][0] = vfmaq_f64(acc[t][0], av, b0);
          acc[t][1] = vfmaq_f64(acc[t][1], av, b1);
        }
      }
      for (int t = 0; t < 4; ++t) {
        double* crow = c + static_cast<long>(i0 + t) * n + j;
        vst1q_f64(crow, acc[t][0]);
        vst1q_f64(crow + 2, acc[t][1]);
      }
    }
    for (int j = n4; j < n; ++j) {
      for (int t = 0; t < 4; ++t) {
        double sum = accumulate ? c[static_cast<long>(i0 + t) * n + j] : 0.0;
        for (int l = 0; l < k; ++l) {
          sum += a_at(i0 + t, l) * b[static_cast<long>(l) * n + j];
        }
        c[static_cast<long>(i0 + t) * n + j] = sum;
      }
    }
  }
  for (int i = m4; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      double sum = accumulate ? c[static_cast<long>(i) * n + j] : 0.0;
      for (int l = 0; l < k; ++l) {
        sum += a_at(i, l) * b[static_cast<long>(l) * n + j];
      }
      c[static_cast<long>(i) * n + j] = sum;
    }
  }
}

void matmul_nn_neon(const double* a, const double* b, double* c,
                    int m, int k, int n, bool accumulate) {
  matmul_rowstream_neon<false>(a, b, c, m, k, n, accumulate);
}

void matmul_tn_neon(const double* a, const double* b, double* c,
                    int m, int k, int n, bool accumulate) {
  matmul_rowstream_neon<true>(a, b, c, m, k, n, accumulate);
}

void matmul_nt_neon(const double* a, const double* b, double* c,
                    int m, int k, int n, bool accumulate) {
  const int k2 = k & ~1;
  for (int i = 0; i < m; ++i) {
    const double* arow = a + static_cast<long>(i) * k;
    double* crow = c + static_cast<long>(i) * n;
    for (int j = 0; j < n; ++j) {
      const double* brow = b + static_cast<long>(j) * k;
      float64x2_t acc = vdupq_n_f64(0.0);
      for (int l = 0; l < k2; l += 2) {
        acc = vfmaq_f64(acc, vld1q_f64(arow + l), vld1q_f64(brow + l));
      }
      double s = vaddvq_f64(acc);
      if (k2 != k) s += arow[k2] * brow[k2];
      crow[j] = accumulate ? crow[j] + s : s;
    }
  }
}

void corr_tau_neon(const double* xre, const double* xim,
                   const double* cre, const double* sim, int n,
                   double* acc_re, double* acc_im) {
  float64x2_t ar = vdupq_n_f64(0.0);
  float64x2_t ai = vdupq_n_f64(0.0);
  const int n2 = n & ~1;
  for (int i = 0; i < n2; i += 2) {
    ar = vfmaq_f64(ar, vld1q_f64(xre + i), vld1q_f64(cre + i));
    ai = vfmaq_f64(ai, vld1q_f64(xim + i), vld1q_f64(sim + i));
  }
  double sr = vaddvq_f64(ar);
  double si = vaddvq_f64(ai);
  if (n2 != n) {
    sr += xre[n2] * cre[n2];
    si += xim[n2] * sim[n2];
  }
  *acc_re += sr;
  *acc_im += si;
}

}  // namespace

extern const KernelTable kNeonTable;
const KernelTable kNeonTable = {"neon", matmul_nn_neon, matmul_nt_neon,
                                matmul_tn_neon, corr_tau_neon};

}  // namespace sslkit::kernels

#endif  // __aarch64__
