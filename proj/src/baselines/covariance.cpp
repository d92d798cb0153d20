// Copyright 2026 The sslkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sslkit/baselines/covariance.hpp"

#include <cmath>
#include <string>

#include "sslkit/common/errors.hpp"
#include "sslkit/dsp/fft.hpp"

namespace sslkit::baselines {

SpatialCovariance block_covariance(const dsp::MultichannelFrame& frame,
                                   int block_len, int num_blocks,
                                   double overlap) {
  if (frame.num_channels < 2) {
    throw ContractError("block_covariance: need at least 2 channels");
  }
  if (block_len < 2 || !dsp::is_power_of_two(block_len)) {
    throw ContractError("block_covariance: block_len must be a power of two");
  }
  if (!(overlap >= 0.0 && overlap < 1.0)) {
    throw ContractError("block_covariance: overlap must be in [0, 1)");
  }
  const int hop = static_cast<int>(std::lround(block_len * (1.0 - overlap)));
  const int span = (num_blocks - 1) * hop + block_len;
  if (num_blocks < 1 || span != frame.frame_len) {
    throw ContractError("block_covariance: " + std::to_string(num_blocks) +
                        " blocks of " + std::to_string(block_len) + " with hop " +
                        std::to_string(hop) + " span " + std::to_string(span) +
                        " samples, frame has " + std::to_string(frame.frame_len));
  }

  const int m = frame.num_channels;
  const double bin_hz = static_cast<double>(frame.sample_rate) / block_len;
  const int lo = static_cast<int>(std::ceil(kBandLowHz / bin_hz));
  const int hi = static_cast<int>(std::floor(kBandHighHz / bin_hz));
  const int nbins = hi - lo + 1;
  if (nbins < 1 || hi > block_len / 2) {
    throw ContractError("block_covariance: scoring band is empty at this rate");
  }

  SpatialCovariance cov;
  cov.num_channels = m;
  cov.block_len = block_len;
  cov.freqs_hz.resize(nbins);
  for (int b = 0; b < nbins; ++b) cov.freqs_hz[b] = (lo + b) * bin_hz;
  cov.r.assign(static_cast<size_t>(nbins) * m * m, cdouble(0.0, 0.0));

  const std::vector<double> window = dsp::hann_window(block_len);
  dsp::RealFft fft(block_len);
  std::vector<double> buf(block_len);
  std::vector<cdouble> spectrum(block_len / 2 + 1);
  // Snapshots for one block: [M][nbins].
  std::vector<cdouble> snap(static_cast<size_t>(m) * nbins);

  for (int blk = 0; blk < num_blocks; ++blk) {
    const int offset = blk * hop;
    for (int ch = 0; ch < m; ++ch) {
      const double* x = frame.channel(ch) + offset;
      for (int i = 0; i < block_len; ++i) buf[i] = x[i] * window[i];
      fft.forward(buf.data(), spectrum.data());
      for (int b = 0; b < nbins; ++b) {
        snap[static_cast<size_t>(ch) * nbins + b] = spectrum[lo + b];
      }
    }
    for (int b = 0; b < nbins; ++b) {
      cdouble* rb = cov.bin(b);
      for (int i = 0; i < m; ++i) {
        const cdouble xi = snap[static_cast<size_t>(i) * nbins + b];
        for (int j = 0; j < m; ++j) {
          const cdouble xj = snap[static_cast<size_t>(j) * nbins + b];
          rb[static_cast<size_t>(i) * m + j] += xi * std::conj(xj);
        }
      }
    }
  }

  const double inv_blocks = 1.0 / num_blocks;
  for (cdouble& x : cov.r) x *= inv_blocks;
  return cov;
}

}  // namespace sslkit::baselines
