// Copyright 2026 The sslkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sslkit/dsp/features.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "sslkit/common/errors.hpp"
#include "sslkit/dsp/fft.hpp"
#include "sslkit/kernels/kernels.hpp"

namespace sslkit::dsp {

namespace {

constexpr double kCrossPowerFloor = 1e-12;

// Precomputed delay phasors: cosine[tau][k] = cos(2 pi k tau / L) and
// sine[tau][k] = sin(2 pi k tau / L) for tau = 0..max_delay, k = 0..K-1.
// With u_k the unit cross phasor of bin k, the correlation at lag tau is
//   g(+tau) = sum_k (Re u_k) cos - (Im u_k) sin   and
//   g(-tau) = sum_k (Re u_k) cos + (Im u_k) sin,
// so one cosine/sine table serves both signs and the inner loop reduces to
// two dot products (the corr_tau kernel).
struct DelayTable {
  int fft_len = 0;
  int max_delay = 0;
  int num_bins = 0;
  // Row-major [max_delay + 1][num_bins].
  std::vector<double> cosine;
  std::vector<double> sine;

  const double* cos_row(int tau) const {
    return cosine.data() + static_cast<long>(tau) * num_bins;
  }
  const double* sin_row(int tau) const {
    return sine.data() + static_cast<long>(tau) * num_bins;
  }
};

std::shared_ptr<const DelayTable> delay_table(int fft_len, int max_delay) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const DelayTable>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(fft_len, max_delay);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  auto table = std::make_shared<DelayTable>();
  table->fft_len = fft_len;
  table->max_delay = max_delay;
  table->num_bins = fft_len / 2 + 1;
  table->cosine.resize(static_cast<long>(max_delay + 1) * table->num_bins);
  table->sine.resize(table->cosine.size());
  for (int tau = 0; tau <= max_delay; ++tau) {
    double* crow = table->cosine.data() + static_cast<long>(tau) * table->num_bins;
    double* srow = table->sine.data() + static_cast<long>(tau) * table->num_bins;
    for (int k = 0; k < table->num_bins; ++k) {
      const double ang = 2.0 * std::numbers::pi * k * tau / fft_len;
      crow[k] = std::cos(ang);
      srow[k] = std::sin(ang);
    }
  }
  cache.emplace(key, table);
  return table;
}

std::vector<std::pair<int, int>> channel_pairs(int num_channels) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < num_channels; ++i) {
    for (int j = i + 1; j < num_channels; ++j) pairs.emplace_back(i, j);
  }
  return pairs;
}

void check_delay_range(int min_delay, int max_delay, int num_bins) {
  if (min_delay != -max_delay || max_delay <= 0) {
    throw ConfigError("delay range must be symmetric [-T, T] with T > 0");
  }
  const int fft_len = (num_bins - 1) * 2;
  if (max_delay >= fft_len / 2) {
    throw ConfigError("delay range exceeds half the frame length");
  }
}

// Unit cross phasors u_k = X_i X_j^* / |X_i X_j^*| for the positive-frequency
// interior bins (DC and Nyquist excluded); skipped bins are left at zero.
// Returns the number of contributing bins.
int cross_phasors(const ChannelSpectrum& si, const ChannelSpectrum& sj,
                  std::vector<double>& ure, std::vector<double>& uim) {
  const int num_bins = static_cast<int>(si.bins.size());
  std::fill(ure.begin(), ure.end(), 0.0);
  std::fill(uim.begin(), uim.end(), 0.0);
  int count = 0;
  for (int k = 1; k < num_bins - 1; ++k) {
    const std::complex<double> cross = si.bins[k] * std::conj(sj.bins[k]);
    const double mag = std::abs(cross);
    if (mag < kCrossPowerFloor) continue;
    ure[k] = cross.real() / mag;
    uim[k] = cross.imag() / mag;
    ++count;
  }
  return count;
}

inline double clamp_unit(double v) { return std::clamp(v, -1.0, 1.0); }

}  // namespace

std::vector<double> hann_window(int len) {
  std::vector<double> w(len);
  for (int i = 0; i < len; ++i) {
    w[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * i / len));
  }
  return w;
}

std::vector<ChannelSpectrum> window_and_fft(const MultichannelFrame& frame) {
  if (frame.num_channels < 2) {
    throw ContractError("frame must have at least two channels");
  }
  if (!is_power_of_two(frame.frame_len) || frame.frame_len < 4) {
    throw ContractError("frame length must be a power of two >= 4");
  }
  if (static_cast<long>(frame.samples.size()) !=
      static_cast<long>(frame.num_channels) * frame.frame_len) {
    throw ContractError("frame sample buffer does not match its dimensions");
  }
  for (double s : frame.samples) {
    if (!std::isfinite(s)) throw ContractError("frame contains non-finite samples");
  }

  const std::vector<double> window = hann_window(frame.frame_len);
  const RealFft fft(frame.frame_len);
  std::vector<ChannelSpectrum> spectra(frame.num_channels);
  std::vector<double> buf(frame.frame_len);
  for (int m = 0; m < frame.num_channels; ++m) {
    const double* x = frame.channel(m);
    for (int i = 0; i < frame.frame_len; ++i) buf[i] = x[i] * window[i];
    spectra[m].channel = m;
    spectra[m].bins.resize(fft.num_bins());
    fft.forward(buf.data(), spectra[m].bins.data());
  }
  return spectra;
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

MelFilterBank make_mel_filterbank(int num_filters, double f_min, double f_max,
                                  int sample_rate, int fft_len) {
  if (num_filters < 1) throw ConfigError("need at least one mel filter");
  if (!(0.0 <= f_min && f_min < f_max && f_max <= sample_rate / 2.0)) {
    throw ConfigError("mel filter range must satisfy 0 <= f_min < f_max <= fs/2");
  }
  if (!is_power_of_two(fft_len)) {
    throw ConfigError("filterbank FFT length must be a power of two");
  }

  MelFilterBank bank;
  bank.num_filters = num_filters;
  bank.num_bins = fft_len / 2 + 1;
  bank.f_min = f_min;
  bank.f_max = f_max;
  bank.sample_rate = sample_rate;
  bank.transfer.assign(static_cast<long>(num_filters) * bank.num_bins, 0.0);
  bank.supports.resize(num_filters);

  // num_filters + 2 edge frequencies equally spaced on the mel scale.
  const double mel_lo = hz_to_mel(f_min);
  const double mel_hi = hz_to_mel(f_max);
  std::vector<double> edges(num_filters + 2);
  for (int i = 0; i < num_filters + 2; ++i) {
    edges[i] = mel_lo + (mel_hi - mel_lo) * i / (num_filters + 1);
  }

  for (int f = 0; f < num_filters; ++f) {
    const double m_left = edges[f];
    const double m_center = edges[f + 1];
    const double m_right = edges[f + 2];
    double* row = bank.transfer.data() + static_cast<long>(f) * bank.num_bins;
    int begin = -1, end = -1;
    for (int k = 0; k < bank.num_bins; ++k) {
      const double mel_k =
          hz_to_mel(static_cast<double>(k) * sample_rate / fft_len);
      double w = 0.0;
      if (mel_k > m_left && mel_k < m_right) {
        w = mel_k <= m_center ? (mel_k - m_left) / (m_center - m_left)
                              : (m_right - mel_k) / (m_right - m_center);
      }
      if (w > 0.0) {
        row[k] = w;
        if (begin < 0) begin = k;
        end = k + 1;
      }
    }
    if (begin < 0) {
      throw ConfigError(
          "mel filter " + std::to_string(f) +
          " has empty support; fewer filters or a longer FFT is required");
    }
    bank.supports[f] = {begin, end};
  }
  return bank;
}

GccPhatFeature gcc_phat(const std::vector<ChannelSpectrum>& spectra,
                        int min_delay, int max_delay) {
  if (spectra.size() < 2) throw ContractError("gcc_phat needs >= 2 spectra");
  const int num_bins = static_cast<int>(spectra[0].bins.size());
  for (const auto& s : spectra) {
    if (static_cast<int>(s.bins.size()) != num_bins) {
      throw ContractError("spectra differ in bin count");
    }
  }
  check_delay_range(min_delay, max_delay, num_bins);

  const int num_channels = static_cast<int>(spectra.size());
  const int fft_len = (num_bins - 1) * 2;
  const auto table = delay_table(fft_len, max_delay);
  const auto& kern = kernels::active();

  GccPhatFeature feat;
  feat.pairs = channel_pairs(num_channels);
  feat.num_pairs = static_cast<int>(feat.pairs.size());
  feat.min_delay = min_delay;
  feat.max_delay = max_delay;
  feat.num_delays = max_delay - min_delay + 1;
  feat.values.assign(static_cast<long>(feat.num_pairs) * feat.num_delays, 0.0);

  const int center = -min_delay;
  const int nk = num_bins - 2;  // interior bins 1 .. num_bins - 2
  std::vector<double> ure(num_bins), uim(num_bins);
  for (int p = 0; p < feat.num_pairs; ++p) {
    const auto [i, j] = feat.pairs[p];
    const int count = cross_phasors(spectra[i], spectra[j], ure, uim);
    if (count == 0) continue;  // silence: leave the row at zero
    double* out = feat.values.data() + static_cast<long>(p) * feat.num_delays;
    for (int tau = 0; tau <= max_delay; ++tau) {
      double a = 0.0, b = 0.0;
      kern.corr_tau(ure.data() + 1, uim.data() + 1, table->cos_row(tau) + 1,
                    table->sin_row(tau) + 1, nk, &a, &b);
      out[center + tau] = clamp_unit((a - b) / count);
      out[center - tau] = clamp_unit((a + b) / count);
    }
  }
  return feat;
}

GccFbFeature gccfb(const std::vector<ChannelSpectrum>& spectra,
                   const MelFilterBank& bank, int min_delay, int max_delay) {
  if (spectra.size() < 2) throw ContractError("gccfb needs >= 2 spectra");
  const int num_bins = static_cast<int>(spectra[0].bins.size());
  if (bank.num_bins != num_bins) {
    throw ContractError("filterbank bin count does not match spectra");
  }
  check_delay_range(min_delay, max_delay, num_bins);

  const int num_channels = static_cast<int>(spectra.size());
  const int fft_len = (num_bins - 1) * 2;
  const auto table = delay_table(fft_len, max_delay);
  const auto& kern = kernels::active();

  GccFbFeature feat;
  feat.pairs = channel_pairs(num_channels);
  feat.num_pairs = static_cast<int>(feat.pairs.size());
  feat.num_filters = bank.num_filters;
  feat.min_delay = min_delay;
  feat.max_delay = max_delay;
  feat.num_delays = max_delay - min_delay + 1;
  feat.values.assign(
      static_cast<long>(feat.num_pairs) * feat.num_filters * feat.num_delays,
      0.0);

  // Per-filter normalizers: total triangle weight over the support,
  // independent of which bins carry usable cross-power.
  std::vector<double> denom(bank.num_filters, 0.0);
  for (int f = 0; f < bank.num_filters; ++f) {
    const auto [b0, b1] = bank.supports[f];
    const double* row = bank.row(f);
    for (int k = b0; k < b1; ++k) denom[f] += row[k];
  }

  const int center = -min_delay;
  std::vector<double> ure(num_bins), uim(num_bins);
  std::vector<double> wre(num_bins), wim(num_bins);
  for (int p = 0; p < feat.num_pairs; ++p) {
    const auto [i, j] = feat.pairs[p];
    cross_phasors(spectra[i], spectra[j], ure, uim);
    for (int f = 0; f < bank.num_filters; ++f) {
      if (denom[f] <= 0.0) continue;
      // Clip the support to the interior positive-frequency bins so band
      // sums treat DC/Nyquist exactly like the full-band correlation does.
      const int b0 = std::max(bank.supports[f].first, 1);
      const int b1 = std::min(bank.supports[f].second, num_bins - 1);
      if (b0 >= b1) continue;
      const double* row = bank.row(f);
      for (int k = b0; k < b1; ++k) {
        wre[k] = row[k] * ure[k];
        wim[k] = row[k] * uim[k];
      }
      double* out = feat.values.data() +
                    (static_cast<long>(p) * feat.num_filters + f) * feat.num_delays;
      for (int tau = 0; tau <= max_delay; ++tau) {
        double a = 0.0, b = 0.0;
        kern.corr_tau(wre.data() + b0, wim.data() + b0,
                      table->cos_row(tau) + b0, table->sin_row(tau) + b0,
                      b1 - b0, &a, &b);
        out[center + tau] = clamp_unit((a - b) / denom[f]);
        out[center - tau] = clamp_unit((a + b) / denom[f]);
      }
    }
  }
  return feat;
}

}  // namespace sslkit::dsp
