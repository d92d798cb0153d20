// Copyright 2026 The sslkit Authors
// SPDX-License-Identifier: Apache-2.0
//
// Iterative radix-2 FFT with precomputed twiddle and bit-reversal tables.
// Only power-of-two sizes are supported, which covers every transform the
// toolkit performs (8192-point feature frames, 2048-point covariance blocks).
// Forward transforms are unnormalized: X[k] = sum_n x[n] e^{-j 2 pi n k / N}.

#ifndef SSLKIT_DSP_FFT_HPP_
#define SSLKIT_DSP_FFT_HPP_

#include <complex>
#include <vector>

namespace sslkit::dsp {

// Plan for complex transforms of a fixed power-of-two size.
class Fft {
 public:
  // Throws ConfigError unless n is a power of two >= 2.
  explicit Fft(int n);

  int size() const { return n_; }

  // In-place unnormalized forward transform; x.size() must equal size().
  void forward(std::complex<double>* x) const;

  // In-place unnormalized inverse (no 1/N factor): applies conj-forward-conj.
  void inverse(std::complex<double>* x) const;

 private:
  int n_;
  std::vector<int> bitrev_;
  // twiddle_[k] = e^{-j 2 pi k / n} for k < n/2.
  std::vector<std::complex<double>> twiddle_;
};

// Real-input forward transform of size n producing the n/2 + 1 nonnegative
// frequency bins, computed through one half-size complex FFT.
class RealFft {
 public:
  explicit RealFft(int n);

  int size() const { return n_; }
  int num_bins() const { return n_ / 2 + 1; }

  // bins must hold num_bins() entries.  Thread-safe: scratch is per-call.
  void forward(const double* x, std::complex<double>* bins) const;

 private:
  int n_;
  Fft half_;
  // unscramble_[k] = e^{-j 2 pi k / n} for k < n/2.
  std::vector<std::complex<double>> unscramble_;
};

bool is_power_of_two(int n);

}  // namespace sslkit::dsp

#endif  // SSLKIT_DSP_FFT_HPP_
