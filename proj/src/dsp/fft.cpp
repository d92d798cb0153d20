// Copyright 2026 The sslkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sslkit/dsp/fft.hpp"

#include <cmath>
#include <numbers>

#include "sslkit/common/errors.hpp"

namespace sslkit::dsp {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

Fft::Fft(int n) : n_(n) {
  if (n < 2 || !is_power_of_two(n)) {
    throw ConfigError("FFT size must be a power of two >= 2, got " +
                      std::to_string(n));
  }
  bitrev_.resize(n);
  bitrev_[0] = 0;
  int log2n = 0;
  while ((1 << log2n) < n) ++log2n;
  for (int i = 1; i < n; ++i) {
    bitrev_[i] = (bitrev_[i >> 1] >> 1) | ((i & 1) << (log2n - 1));
  }
  twiddle_.resize(n / 2);
  for (int k = 0; k < n / 2; ++k) {
    const double ang = -2.0 * std::numbers::pi * k / n;
    twiddle_[k] = {std::cos(ang), std::sin(ang)};
  }
}

void Fft::forward(std::complex<double>* x) const {
  for (int i = 0; i < n_; ++i) {
    const int j = bitrev_[i];
    if (j > i) std::swap(x[i], x[j]);
  }
  for (int len = 2; len <= n_; len <<= 1) {
    const int half = len >> 1;
    const int step = n_ / len;
    for (int base = 0; base < n_; base += len) {
      for (int k = 0; k < half; ++k) {
        const std::complex<double> w = twiddle_[k * step];
        const std::complex<double> u = x[base + k];
        const std::complex<double> t = w * x[base + k + half];
        x[base + k] = u + t;
        x[base + k + half] = u - t;
      }
    }
  }
}

void Fft::inverse(std::complex<double>* x) const {
  for (int i = 0; i < n_; ++i) x[i] = std::conj(x[i]);
  forward(x);
  for (int i = 0; i < n_; ++i) x[i] = std::conj(x[i]);
}

RealFft::RealFft(int n) : n_(n), half_(n / 2) {
  if (n < 4 || !is_power_of_two(n)) {
    throw ConfigError("real FFT size must be a power of two >= 4, got " +
                      std::to_string(n));
  }
  unscramble_.resize(n / 2);
  for (int k = 0; k < n / 2; ++k) {
    const double ang = -2.0 * std::numbers::pi * k / n;
    unscramble_[k] = {std::cos(ang), std::sin(ang)};
  }
}

void RealFft::forward(const double* x, std::complex<double>* bins) const {
  const int h = n_ / 2;
  std::vector<std::complex<double>> z(h);
  for (int i = 0; i < h; ++i) z[i] = {x[2 * i], x[2 * i + 1]};
  half_.forward(z.data());

  // Untangle the packed transform: with Z = FFT(x_even + j x_odd),
  //   Fe[k] = (Z[k] + conj(Z[h-k])) / 2        (spectrum of even samples)
  //   Fo[k] = (Z[k] - conj(Z[h-k])) / (2j)     (spectrum of odd samples)
  //   X[k]  = Fe[k] + e^{-j 2 pi k / n} Fo[k]
  bins[0] = {z[0].real() + z[0].imag(), 0.0};
  bins[h] = {z[0].real() - z[0].imag(), 0.0};
  for (int k = 1; k < h; ++k) {
    const std::complex<double> zk = z[k];
    const std::complex<double> zc = std::conj(z[h - k]);
    const std::complex<double> fe = 0.5 * (zk + zc);
    const std::complex<double> fo =
        std::complex<double>(0.0, -0.5) * (zk - zc);
    bins[k] = fe + unscramble_[k] * fo;
  }
}

}  // namespace sslkit::dsp
