// Copyright 2026 The sslkit Authors
// SPDX-License-Identifier: Apache-2.0
//
// Cross-correlation input features computed from one multichannel frame:
//
//   gcc_phat  g_ij(tau) — phase-transform cross-correlation per microphone
//             pair, evaluated on an integer delay grid (the center 51 lags).
//   gccfb     g_ij(f, tau) — the same correlation restricted to mel bands:
//             each triangular filter weights the unit-modulus cross phasors
//             and the band sum is normalized by the filter's total weight.
//
// Both features are bounded in [-1, 1]: each value is a normalized sum of
// real parts of unit-modulus phasors.  The correlation at lag tau compares
// the first channel shifted forward by tau against the second, so a peak at
// positive tau means the pair's second channel leads (arrives earlier than)
// the first.

#ifndef SSLKIT_DSP_FEATURES_HPP_
#define SSLKIT_DSP_FEATURES_HPP_

#include <complex>
#include <utility>
#include <vector>

namespace sslkit::dsp {

// One 8192-sample window of M-channel audio at 48 kHz.
struct MultichannelFrame {
  int num_channels = 0;
  int frame_len = 0;
  int sample_rate = 48000;
  int frame_index = 0;
  // Row-major [num_channels][frame_len].
  std::vector<double> samples;

  double* channel(int m) { return samples.data() + static_cast<long>(m) * frame_len; }
  const double* channel(int m) const {
    return samples.data() + static_cast<long>(m) * frame_len;
  }
};

// Nonnegative-frequency spectrum of one windowed channel.
struct ChannelSpectrum {
  int channel = 0;
  // K = L/2 + 1 bins.
  std::vector<std::complex<double>> bins;
};

// Mel-spaced triangular filters sampled on FFT bin centers.
struct MelFilterBank {
  int num_filters = 0;
  int num_bins = 0;
  double f_min = 0.0;
  double f_max = 0.0;
  int sample_rate = 0;
  // Row-major [num_filters][num_bins] of nonnegative weights.
  std::vector<double> transfer;
  // Per-filter contiguous support as [begin, end) bin indices.
  std::vector<std::pair<int, int>> supports;

  const double* row(int f) const {
    return transfer.data() + static_cast<long>(f) * num_bins;
  }
};

// Per-pair correlation on the delay grid [min_delay, max_delay].
struct GccPhatFeature {
  int num_pairs = 0;
  int num_delays = 0;
  int min_delay = 0;
  int max_delay = 0;
  // Lexicographic (i, j), i < j.
  std::vector<std::pair<int, int>> pairs;
  // Row-major [num_pairs][num_delays].
  std::vector<double> values;

  double at(int p, int tau) const {
    return values[static_cast<long>(p) * num_delays + (tau - min_delay)];
  }
};

// Per-pair, per-band correlation on the delay grid.
struct GccFbFeature {
  int num_pairs = 0;
  int num_filters = 0;
  int num_delays = 0;
  int min_delay = 0;
  int max_delay = 0;
  std::vector<std::pair<int, int>> pairs;
  // Row-major [num_pairs][num_filters][num_delays].
  std::vector<double> values;

  double at(int p, int f, int tau) const {
    return values[(static_cast<long>(p) * num_filters + f) * num_delays +
                  (tau - min_delay)];
  }
};

// Periodic Hann window: w[i] = 0.5 (1 - cos(2 pi i / len)).
std::vector<double> hann_window(int len);

// Applies the Hann window and takes one long real FFT per channel.
// Throws ContractError on non-finite samples or a non-power-of-two length.
std::vector<ChannelSpectrum> window_and_fft(const MultichannelFrame& frame);

// HTK mel scale: m = 2595 log10(1 + f / 700).
double hz_to_mel(double hz);
double mel_to_hz(double mel);

// Standard mel-spaced triangular filterbank on FFT bin centers.
MelFilterBank make_mel_filterbank(int num_filters, double f_min, double f_max,
                                  int sample_rate, int fft_len);

// Phase-transform cross-correlation for all channel pairs, averaged over the
// contributing positive-frequency bins.  Bins with cross-power magnitude
// below 1e-12 are skipped (they contribute nothing and are not counted).
GccPhatFeature gcc_phat(const std::vector<ChannelSpectrum>& spectra,
                        int min_delay = -25, int max_delay = 25);

// Filterbank-weighted variant: per band, the phasor sum is weighted by the
// triangle and normalized by the triangle's total weight over its support
// (skipped bins still count toward the normalizer).
GccFbFeature gccfb(const std::vector<ChannelSpectrum>& spectra,
                   const MelFilterBank& bank, int min_delay = -25,
                   int max_delay = 25);

}  // namespace sslkit::dsp

#endif  // SSLKIT_DSP_FEATURES_HPP_
