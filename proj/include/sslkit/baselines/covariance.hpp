// Copyright 2026 The sslkit Authors
// SPDX-License-Identifier: Apache-2.0
//
// Empirical spatial covariance estimation.  A 8192-sample frame is cut
// into seven Hann-windowed 2048-sample blocks with 50% overlap; the
// per-frequency covariance is the average outer product of the block
// snapshots across the scoring band.

#ifndef SSLKIT_BASELINES_COVARIANCE_HPP_
#define SSLKIT_BASELINES_COVARIANCE_HPP_

#include <complex>
#include <vector>

#include "sslkit/dsp/features.hpp"

namespace sslkit::baselines {

using cdouble = std::complex<double>;

// Per-frequency Hermitian covariance matrices over the scoring band.
struct SpatialCovariance {
  int num_channels = 0;
  int block_len = 0;
  // Frequency in Hz for each retained FFT bin, ascending.
  std::vector<double> freqs_hz;
  // Row-major [num_bins][M][M]; bin b, entry (i, j) at b*M*M + i*M + j.
  std::vector<cdouble> r;

  int num_bins() const { return static_cast<int>(freqs_hz.size()); }
  cdouble* bin(int b) {
    return r.data() + static_cast<size_t>(b) * num_channels * num_channels;
  }
  const cdouble* bin(int b) const {
    return r.data() + static_cast<size_t>(b) * num_channels * num_channels;
  }
};

// Scoring band shared by every spatial baseline.
inline constexpr double kBandLowHz = 100.0;
inline constexpr double kBandHighHz = 8000.0;

// R(w) = (1/num_blocks) sum_b x_b(w) x_b(w)^H from Hann-windowed FFTs of
// overlapping blocks.  The blocks must tile the frame exactly:
// (num_blocks - 1) * hop + block_len == frame_len with hop =
// block_len * (1 - overlap); with the defaults that pins frame_len to 8192.
// Throws ContractError otherwise.
SpatialCovariance block_covariance(const dsp::MultichannelFrame& frame,
                                   int block_len = 2048, int num_blocks = 7,
                                   double overlap = 0.5);

}  // namespace sslkit::baselines

#endif  // SSLKIT_BASELINES_COVARIANCE_HPP_
