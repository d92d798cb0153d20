// Copyright 2026 The sslkit Authors
// SPDX-License-Identifier: Apache-2.0
//
// DSP oracles: the FFT against a naive DFT, the windowed transform against
// Parseval, and both correlation features against direct per-lag sums
// computed here without the delay-table/kernel machinery.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "sslkit/common/errors.hpp"
#include "sslkit/common/rng.hpp"
#include "sslkit/dsp/features.hpp"
#include "sslkit/dsp/fft.hpp"

using namespace sslkit;
using std::complex;
using std::numbers::pi;

namespace {

std::vector<complex<double>> naive_dft(const std::vector<complex<double>>& x) {
  const int n = static_cast<int>(x.size());
  std::vector<complex<double>> out(n);
  for (int k = 0; k < n; ++k) {
    complex<double> sum = 0.0;
    for (int t = 0; t < n; ++t) {
      sum += x[t] * std::polar(1.0, -2.0 * pi * k * t / n);
    }
    out[k] = sum;
  }
  return out;
}

dsp::MultichannelFrame make_frame(const std::vector<std::vector<double>>& ch) {
  dsp::MultichannelFrame frame;
  frame.num_channels = static_cast<int>(ch.size());
  frame.frame_len = static_cast<int>(ch[0].size());
  for (const auto& c : ch) {
    frame.samples.insert(frame.samples.end(), c.begin(), c.end());
  }
  return frame;
}

std::vector<double> circular_shift(const std::vector<double>& x, int d) {
  const int n = static_cast<int>(x.size());
  std::vector<double> y(n);
  for (int t = 0; t < n; ++t) {
    y[t] = x[((t - d) % n + n) % n];  // y(t) = x(t - d)
  }
  return y;
}

// Direct GCC-PHAT oracle: per-lag complex sum over the interior bins, no
// delay table, no fused kernels.
std::vector<double> gcc_oracle(const dsp::ChannelSpectrum& si,
                               const dsp::ChannelSpectrum& sj, int min_delay,
                               int max_delay) {
  const int num_bins = static_cast<int>(si.bins.size());
  const int fft_len = (num_bins - 1) * 2;
  std::vector<complex<double>> u(num_bins, 0.0);
  int count = 0;
  for (int k = 1; k < num_bins - 1; ++k) {
    const complex<double> cross = si.bins[k] * std::conj(sj.bins[k]);
    if (std::abs(cross) < 1e-12) continue;
    u[k] = cross / std::abs(cross);
    ++count;
  }
  std::vector<double> g(max_delay - min_delay + 1, 0.0);
  if (count == 0) return g;
  for (int tau = min_delay; tau <= max_delay; ++tau) {
    complex<double> sum = 0.0;
    for (int k = 1; k < num_bins - 1; ++k) {
      sum += u[k] * std::polar(1.0, 2.0 * pi * k * tau / fft_len);
    }
    g[tau - min_delay] = std::clamp(sum.real() / count, -1.0, 1.0);
  }
  return g;
}

int argmax_tau(const dsp::GccPhatFeature& feat, int p) {
  int best = feat.min_delay;
  for (int tau = feat.min_delay; tau <= feat.max_delay; ++tau) {
    if (feat.at(p, tau) > feat.at(p, best)) best = tau;
  }
  return best;
}

// Keeps only FFT bins whose center frequency lies in [lo, hi) Hz.
std::vector<double> bandpass(const std::vector<double>& x, double lo, double hi,
                             int sample_rate) {
  const int n = static_cast<int>(x.size());
  dsp::Fft fft(n);
  std::vector<complex<double>> spec(x.begin(), x.end());
  fft.forward(spec.data());
  for (int k = 0; k <= n / 2; ++k) {
    const double f = static_cast<double>(k) * sample_rate / n;
    if (f < lo || f >= hi) {
      spec[k] = 0.0;
      if (k != 0 && k != n / 2) spec[n - k] = 0.0;
    }
  }
  fft.inverse(spec.data());
  std::vector<double> y(n);
  for (int t = 0; t < n; ++t) y[t] = spec[t].real() / n;
  return y;
}

}  // namespace

TEST_CASE("complex FFT matches a naive DFT and inverts") {
  Rng rng(11);
  for (int n : {2, 4, 8, 16, 64, 256}) {
    dsp::Fft fft(n);
    std::vector<complex<double>> x(n);
    for (auto& v : x) v = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};

    std::vector<complex<double>> got = x;
    fft.forward(got.data());
    const auto want = naive_dft(x);
    for (int k = 0; k < n; ++k) {
      CHECK(std::abs(got[k] - want[k]) <= 1e-9 * std::max(1.0, std::abs(want[k])));
    }

    fft.inverse(got.data());
    for (int t = 0; t < n; ++t) {
      CHECK(std::abs(got[t] / static_cast<double>(n) - x[t]) <= 1e-12);
    }
  }
  CHECK_THROWS_AS(dsp::Fft(12), ConfigError);
  CHECK_THROWS_AS(dsp::Fft(0), ConfigError);
}

TEST_CASE("real FFT matches the complex FFT on real input") {
  Rng rng(12);
  for (int n : {8, 64, 2048}) {
    dsp::RealFft rfft(n);
    std::vector<double> x(n);
    for (auto& v : x) v = rng.uniform(-1.0, 1.0);

    std::vector<complex<double>> bins(rfft.num_bins());
    rfft.forward(x.data(), bins.data());

    dsp::Fft fft(n);
    std::vector<complex<double>> full(x.begin(), x.end());
    fft.forward(full.data());
    for (int k = 0; k < rfft.num_bins(); ++k) {
      CHECK(std::abs(bins[k] - full[k]) <= 1e-9 * std::max(1.0, std::abs(full[k])));
    }
  }
}

TEST_CASE("windowed transform satisfies Parseval") {
  Rng rng(13);
  const int len = 8192;
  std::vector<double> x(len);
  for (auto& v : x) v = rng.uniform(-1.0, 1.0);
  const auto frame = make_frame({x, x});
  const auto spectra = dsp::window_and_fft(frame);

  const auto w = dsp::hann_window(len);
  double time_energy = 0.0;
  for (int t = 0; t < len; ++t) time_energy += w[t] * x[t] * w[t] * x[t];

  // Real-input symmetry: interior bins appear twice in the full spectrum.
  const auto& bins = spectra[0].bins;
  double freq_energy = std::norm(bins.front()) + std::norm(bins.back());
  for (size_t k = 1; k + 1 < bins.size(); ++k) freq_energy += 2.0 * std::norm(bins[k]);
  freq_energy /= len;

  CHECK(std::abs(time_energy - freq_energy) <= 1e-10 * time_energy);
}

TEST_CASE("hann window endpoints, peak, and symmetry") {
  const int len = 64;
  const auto w = dsp::hann_window(len);
  CHECK(w[0] == 0.0);
  CHECK(w[len / 2] == doctest::Approx(1.0).epsilon(1e-15));
  for (int i = 1; i < len; ++i) {
    CHECK(w[i] == doctest::Approx(w[len - i]).epsilon(1e-12));
  }
}

TEST_CASE("window_and_fft rejects malformed frames") {
  Rng rng(14);
  std::vector<double> x(96);
  for (auto& v : x) v = rng.uniform(-1.0, 1.0);
  CHECK_THROWS_AS(dsp::window_and_fft(make_frame({x, x})), ContractError);

  std::vector<double> bad(128, 0.0);
  bad[7] = std::nan("");
  CHECK_THROWS_AS(dsp::window_and_fft(make_frame({bad, bad})), ContractError);

  std::vector<double> ok(128, 0.1);
  CHECK_THROWS_AS(dsp::window_and_fft(make_frame({ok})), ContractError);
}

TEST_CASE("gcc-phat: integer circular delays recovered exactly") {
  Rng rng(15);
  const int len = 8192;
  std::vector<double> x(len);
  for (auto& v : x) v = rng.normal();

  for (int d : {0, 1, 3, 7, 25, -4, -25}) {
    // Channel 1 is channel 0 delayed by d: its correlation peak sits at -d
    // (a positive peak lag means the second channel leads).
    const auto frame = make_frame({x, circular_shift(x, d)});
    const auto feat = dsp::gcc_phat(dsp::window_and_fft(frame));
    REQUIRE(feat.num_pairs == 1);
    CHECK(argmax_tau(feat, 0) == -d);
    CHECK(feat.at(0, -d) > 0.9);
  }
}

TEST_CASE("gcc-phat matches the direct per-lag oracle") {
  Rng rng(16);
  const int len = 1024;  // small frame keeps the O(K * taps) oracle cheap
  std::vector<std::vector<double>> ch(3);
  for (auto& c : ch) {
    c.resize(len);
    for (auto& v : c) v = rng.normal();
  }
  const auto spectra = dsp::window_and_fft(make_frame(ch));
  const auto feat = dsp::gcc_phat(spectra, -25, 25);
  REQUIRE(feat.num_pairs == 3);
  REQUIRE(feat.pairs[0] == std::make_pair(0, 1));
  REQUIRE(feat.pairs[1] == std::make_pair(0, 2));
  REQUIRE(feat.pairs[2] == std::make_pair(1, 2));

  for (int p = 0; p < feat.num_pairs; ++p) {
    const auto [i, j] = feat.pairs[p];
    const auto want = gcc_oracle(spectra[i], spectra[j], -25, 25);
    for (int tau = -25; tau <= 25; ++tau) {
      CHECK(feat.at(p, tau) == doctest::Approx(want[tau + 25]).epsilon(1e-10));
    }
  }
}

TEST_CASE("gcc-phat: independent channels stay near zero") {
  Rng rng(17);
  const int len = 8192;
  std::vector<std::vector<double>> ch(2);
  for (auto& c : ch) {
    c.resize(len);
    for (auto& v : c) v = rng.normal();
  }
  const auto feat = dsp::gcc_phat(dsp::window_and_fft(make_frame(ch)));
  for (int tau = -25; tau <= 25; ++tau) {
    // ~4000 random unit phasors average to O(1/sqrt(n)); 0.15 is > 9 sigma.
    CHECK(std::abs(feat.at(0, tau)) < 0.15);
  }
}

TEST_CASE("gcc-phat: silence leaves the row at zero") {
  const int len = 512;
  std::vector<double> zero(len, 0.0);
  const auto feat = dsp::gcc_phat(dsp::window_and_fft(make_frame({zero, zero})));
  for (int tau = -25; tau <= 25; ++tau) CHECK(feat.at(0, tau) == 0.0);
}

TEST_CASE("mel scale: formula values and round trip") {
  CHECK(dsp::hz_to_mel(0.0) == 0.0);
  // HTK formula reference point: 2595 log10(1 + 1000/700).
  CHECK(dsp::hz_to_mel(1000.0) ==
        doctest::Approx(2595.0 * std::log10(1.0 + 1000.0 / 700.0))
            .epsilon(1e-12));
  Rng rng(18);
  for (int i = 0; i < 50; ++i) {
    const double f = rng.uniform(10.0, 20000.0);
    CHECK(dsp::mel_to_hz(dsp::hz_to_mel(f)) == doctest::Approx(f).epsilon(1e-12));
    CHECK(dsp::hz_to_mel(f) < dsp::hz_to_mel(f + 1.0));  // monotone
  }
}

TEST_CASE("mel filterbank: supports, bounds, and band edges") {
  const auto bank = dsp::make_mel_filterbank(40, 100.0, 8000.0, 48000, 8192);
  CHECK(bank.num_filters == 40);
  CHECK(bank.num_bins == 4097);
  const double bin_hz = 48000.0 / 8192.0;
  for (int f = 0; f < bank.num_filters; ++f) {
    const auto [b0, b1] = bank.supports[f];
    CHECK(b0 < b1);
    double total = 0.0;
    for (int k = 0; k < bank.num_bins; ++k) {
      const double w = bank.row(f)[k];
      CHECK(w >= 0.0);
      CHECK(w <= 1.0 + 1e-12);
      if (w > 0.0) {
        CHECK(k >= b0);
        CHECK(k < b1);
        // Nonzero weights only inside the requested band.
        CHECK(k * bin_hz > 100.0 - 2.0 * bin_hz);
        CHECK(k * bin_hz < 8000.0 + 2.0 * bin_hz);
      }
      total += w;
    }
    CHECK(total > 0.0);
    // Filters are ordered low to high.
    if (f > 0) CHECK(bank.supports[f].first >= bank.supports[f - 1].first);
  }
}

TEST_CASE("gccfb matches a direct triangle-weighted oracle") {
  Rng rng(19);
  const int len = 2048;
  std::vector<std::vector<double>> ch(2);
  for (auto& c : ch) {
    c.resize(len);
    for (auto& v : c) v = rng.normal();
  }
  const auto spectra = dsp::window_and_fft(make_frame(ch));
  const auto bank = dsp::make_mel_filterbank(12, 100.0, 8000.0, 48000, len);
  const auto feat = dsp::gccfb(spectra, bank, -10, 10);

  const int num_bins = len / 2 + 1;
  std::vector<complex<double>> u(num_bins, 0.0);
  for (int k = 1; k < num_bins - 1; ++k) {
    const complex<double> cross = spectra[0].bins[k] * std::conj(spectra[1].bins[k]);
    if (std::abs(cross) < 1e-12) continue;
    u[k] = cross / std::abs(cross);
  }
  for (int f = 0; f < bank.num_filters; ++f) {
    double denom = 0.0;
    for (int k = bank.supports[f].first; k < bank.supports[f].second; ++k) {
      denom += bank.row(f)[k];
    }
    for (int tau = -10; tau <= 10; ++tau) {
      complex<double> sum = 0.0;
      const int b0 = std::max(bank.supports[f].first, 1);
      const int b1 = std::min(bank.supports[f].second, num_bins - 1);
      for (int k = b0; k < b1; ++k) {
        sum += bank.row(f)[k] * u[k] * std::polar(1.0, 2.0 * pi * k * tau / len);
      }
      const double want = std::clamp(sum.real() / denom, -1.0, 1.0);
      CHECK(feat.at(0, f, tau) == doctest::Approx(want).epsilon(1e-10));
    }
  }
}

TEST_CASE("gccfb: boxcar filter equals the plain band average") {
  Rng rng(20);
  const int len = 1024;
  const int num_bins = len / 2 + 1;
  std::vector<std::vector<double>> ch(2);
  ch[0].resize(len);
  for (auto& v : ch[0]) v = rng.normal();
  ch[1] = circular_shift(ch[0], 4);
  const auto spectra = dsp::window_and_fft(make_frame(ch));

  dsp::MelFilterBank box;
  box.num_filters = 1;
  box.num_bins = num_bins;
  box.sample_rate = 48000;
  box.transfer.assign(num_bins, 0.0);
  for (int k = 40; k < 120; ++k) box.transfer[k] = 1.0;
  box.supports = {{40, 120}};

  const auto feat = dsp::gccfb(spectra, box, -8, 8);
  for (int tau = -8; tau <= 8; ++tau) {
    complex<double> sum = 0.0;
    for (int k = 40; k < 120; ++k) {
      const complex<double> cross = spectra[0].bins[k] * std::conj(spectra[1].bins[k]);
      if (std::abs(cross) < 1e-12) continue;
      sum += (cross / std::abs(cross)) * std::polar(1.0, 2.0 * pi * k * tau / len);
    }
    CHECK(feat.at(0, 0, tau) == doctest::Approx(sum.real() / 80.0).epsilon(1e-10));
  }
}

TEST_CASE("gccfb separates band-limited sources by band") {
  Rng rng(21);
  const int len = 8192;
  const int fs = 48000;
  std::vector<double> a(len), b(len);
  for (auto& v : a) v = rng.normal();
  for (auto& v : b) v = rng.normal();
  const auto low = bandpass(a, 300.0, 800.0, fs);    // delayed by d1 on ch1
  const auto high = bandpass(b, 3000.0, 5000.0, fs); // delayed by d2 on ch1
  const int d1 = 4, d2 = -9;

  std::vector<double> ch0(len), ch1(len);
  const auto low_shift = circular_shift(low, -d1);   // peak lands at +d1
  const auto high_shift = circular_shift(high, -d2); // peak lands at +d2
  for (int t = 0; t < len; ++t) {
    ch0[t] = low[t] + high[t];
    ch1[t] = low_shift[t] + high_shift[t];
  }
  const auto spectra = dsp::window_and_fft(make_frame({ch0, ch1}));
  const auto bank = dsp::make_mel_filterbank(40, 100.0, 8000.0, fs, len);
  const auto feat = dsp::gccfb(spectra, bank, -25, 25);

  const double bin_hz = static_cast<double>(fs) / len;
  int low_bands = 0, high_bands = 0;
  for (int f = 0; f < bank.num_filters; ++f) {
    const auto [b0, b1] = bank.supports[f];
    const double f_lo = b0 * bin_hz, f_hi = (b1 - 1) * bin_hz;
    const bool in_low = f_lo >= 350.0 && f_hi <= 750.0;
    const bool in_high = f_lo >= 3100.0 && f_hi <= 4900.0;
    if (!in_low && !in_high) continue;
    int best = -25;
    for (int tau = -25; tau <= 25; ++tau) {
      if (feat.at(0, f, tau) > feat.at(0, f, best)) best = tau;
    }
    if (in_low) {
      ++low_bands;
      CHECK(best == d1);
    } else {
      ++high_bands;
      CHECK(best == d2);
    }
  }
  // The filterbank must actually cover both occupied bands.
  CHECK(low_bands >= 2);
  CHECK(high_bands >= 2);
}
