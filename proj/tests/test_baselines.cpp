// Copyright 2026 The sslkit Authors
// SPDX-License-Identifier: Apache-2.0
//
// Spatial-spectrum baselines: the Jacobi eigensolver against algebraic
// identities, block covariance structure, and all five spectra on exact
// plane-wave frames built with FFT-domain fractional delays.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "sslkit/baselines/covariance.hpp"
#include "sslkit/baselines/geometry.hpp"
#include "sslkit/baselines/hermitian.hpp"
#include "sslkit/baselines/spectra.hpp"
#include "sslkit/coding/coding.hpp"
#include "sslkit/common/errors.hpp"
#include "sslkit/common/rng.hpp"
#include "sslkit/dsp/features.hpp"
#include "sslkit/dsp/fft.hpp"

using namespace sslkit;
using baselines::cdouble;
using std::numbers::pi;

namespace {

std::vector<cdouble> random_hermitian(int m, Rng* rng) {
  std::vector<cdouble> a(static_cast<size_t>(m) * m);
  for (int i = 0; i < m; ++i) {
    a[static_cast<size_t>(i) * m + i] = rng->uniform(-2.0, 2.0);
    for (int j = i + 1; j < m; ++j) {
      const cdouble v(rng->uniform(-1.0, 1.0), rng->uniform(-1.0, 1.0));
      a[static_cast<size_t>(i) * m + j] = v;
      a[static_cast<size_t>(j) * m + i] = std::conj(v);
    }
  }
  return a;
}

cdouble entry(const std::vector<cdouble>& a, int m, int i, int j) {
  return a[static_cast<size_t>(i) * m + j];
}

// Exact circular fractional delay: Y(k) = X(k) e^{-j 2 pi k d / N}.
std::vector<double> fractional_delay(const std::vector<double>& x, double d) {
  const int n = static_cast<int>(x.size());
  dsp::Fft fft(n);
  std::vector<cdouble> spec(x.begin(), x.end());
  fft.forward(spec.data());
  for (int k = 1; k < n / 2; ++k) {
    spec[k] *= std::polar(1.0, -2.0 * pi * k * d / n);
    spec[n - k] = std::conj(spec[k]);
  }
  // Nyquist: the real part of the rotation keeps the signal real.
  spec[n / 2] = spec[n / 2].real() * std::cos(pi * d);
  fft.inverse(spec.data());
  std::vector<double> y(n);
  for (int t = 0; t < n; ++t) y[t] = spec[t].real() / n;
  return y;
}

// Far-field frame: every channel is the common signal advanced by the time
// the wavefront from `azimuth_deg` reaches that microphone.
dsp::MultichannelFrame plane_wave_frame(const baselines::ArrayGeometry& geom,
                                        double azimuth_deg,
                                        const std::vector<double>& signal,
                                        double gain = 1.0) {
  const double az = azimuth_deg * pi / 180.0;
  const double ux = std::cos(az), uy = std::sin(az);
  dsp::MultichannelFrame frame;
  frame.num_channels = geom.num_mics();
  frame.frame_len = static_cast<int>(signal.size());
  frame.samples.resize(static_cast<size_t>(frame.num_channels) * frame.frame_len);
  for (int m = 0; m < frame.num_channels; ++m) {
    const double proj = ux * geom.mics[m][0] + uy * geom.mics[m][1];
    const double delay = -proj / geom.speed_of_sound * 48000.0;
    const auto shifted = fractional_delay(signal, delay);
    for (int t = 0; t < frame.frame_len; ++t) {
      frame.channel(m)[t] = gain * shifted[t];
    }
  }
  return frame;
}

int spectrum_argmax(const coding::LikelihoodVector& spec) {
  return static_cast<int>(std::max_element(spec.values.begin(), spec.values.end()) -
                          spec.values.begin());
}

double argmax_error_deg(const coding::LikelihoodVector& spec, double truth) {
  return coding::angular_distance(coding::DoaGrid::direction(spectrum_argmax(spec)),
                                  truth);
}

std::vector<double> white_signal(int n, uint64_t seed) {
  Rng rng(seed);
  std::vector<double> x(n);
  for (auto& v : x) v = rng.normal() * 0.1;
  return x;
}

}  // namespace

TEST_CASE("jacobi eigensolver: residuals, orthonormality, reconstruction") {
  Rng rng(41);
  for (int m : {2, 3, 4, 6}) {
    for (int trial = 0; trial < 10; ++trial) {
      const auto a = random_hermitian(m, &rng);
      const auto eig = baselines::eig_hermitian(a, m);
      REQUIRE(static_cast<int>(eig.eigenvalues.size()) == m);
      CHECK(std::is_sorted(eig.eigenvalues.begin(), eig.eigenvalues.end()));

      for (int j = 0; j < m; ++j) {
        // || A v_j - lambda_j v_j || < 1e-9
        double resid = 0.0;
        for (int i = 0; i < m; ++i) {
          cdouble av = 0.0;
          for (int k = 0; k < m; ++k) {
            av += entry(a, m, i, k) * eig.eigenvectors[static_cast<size_t>(k) * m + j];
          }
          av -= eig.eigenvalues[j] * eig.eigenvectors[static_cast<size_t>(i) * m + j];
          resid += std::norm(av);
        }
        CHECK(std::sqrt(resid) < 1e-9);
        // Columns orthonormal.
        for (int j2 = 0; j2 < m; ++j2) {
          cdouble dot = 0.0;
          for (int i = 0; i < m; ++i) {
            dot += std::conj(eig.eigenvectors[static_cast<size_t>(i) * m + j]) *
                   eig.eigenvectors[static_cast<size_t>(i) * m + j2];
          }
          CHECK(std::abs(dot - (j == j2 ? 1.0 : 0.0)) < 1e-10);
        }
      }

      // A == V diag(lambda) V^H.
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
          cdouble rec = 0.0;
          for (int k = 0; k < m; ++k) {
            rec += eig.eigenvalues[k] *
                   eig.eigenvectors[static_cast<size_t>(i) * m + k] *
                   std::conj(eig.eigenvectors[static_cast<size_t>(j) * m + k]);
          }
          CHECK(std::abs(rec - entry(a, m, i, j)) < 1e-9);
        }
      }
    }
  }
}

TEST_CASE("jacobi eigensolver: analytic 2x2 and diagonal cases") {
  // [[2, i], [-i, 2]] has eigenvalues 1 and 3.
  std::vector<cdouble> a = {2.0, cdouble(0.0, 1.0), cdouble(0.0, -1.0), 2.0};
  const auto eig = baselines::eig_hermitian(a, 2);
  CHECK(eig.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(eig.eigenvalues[1] == doctest::Approx(3.0).epsilon(1e-12));

  std::vector<cdouble> d = {5.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 2.0};
  const auto de = baselines::eig_hermitian(d, 3);
  CHECK(de.eigenvalues[0] == -1.0);
  CHECK(de.eigenvalues[1] == 2.0);
  CHECK(de.eigenvalues[2] == 5.0);
}

TEST_CASE("matrix functions: inverse and inverse square root") {
  Rng rng(42);
  const int m = 4;
  // Make a well-conditioned positive definite matrix A = B B^H + I.
  auto b = random_hermitian(m, &rng);
  std::vector<cdouble> a(static_cast<size_t>(m) * m, 0.0);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      for (int k = 0; k < m; ++k) {
        a[static_cast<size_t>(i) * m + j] +=
            entry(b, m, i, k) * std::conj(entry(b, m, j, k));
      }
    }
    a[static_cast<size_t>(i) * m + i] += 1.0;
  }

  const auto inv = baselines::inverse_hermitian(a, m);
  const auto w = baselines::inv_sqrt_hermitian(a, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      cdouble ai = 0.0, ww = 0.0;
      for (int k = 0; k < m; ++k) {
        ai += entry(a, m, i, k) * entry(inv, m, k, j);
        ww += entry(w, m, i, k) * entry(w, m, k, j);
      }
      CHECK(std::abs(ai - (i == j ? 1.0 : 0.0)) < 1e-10);
      // W W == A^{-1}.
      CHECK(std::abs(ww - entry(inv, m, i, j)) < 1e-10);
    }
  }

  // Singular input must be rejected, not silently inverted.
  std::vector<cdouble> singular(4, 0.0);
  singular[0] = 1.0;  // [[1,0],[0,0]]
  CHECK_THROWS_AS(baselines::inverse_hermitian(singular, 2), NumericError);
}

TEST_CASE("diagonal loading adds scale * trace / m") {
  std::vector<cdouble> a = {2.0, cdouble(0.5, 0.1), cdouble(0.5, -0.1), 4.0};
  const double delta = baselines::diagonal_load(&a, 2, 1e-3);
  CHECK(delta == doctest::Approx(1e-3 * 6.0 / 2.0).epsilon(1e-12));
  CHECK(a[0].real() == doctest::Approx(2.0 + delta).epsilon(1e-12));
  CHECK(a[3].real() == doctest::Approx(4.0 + delta).epsilon(1e-12));
  CHECK(a[1] == cdouble(0.5, 0.1));
}

TEST_CASE("block covariance: shape, band, hermitian PSD") {
  const auto geom = baselines::default_square_array();
  const auto frame = plane_wave_frame(geom, 25.0, white_signal(8192, 50));
  const auto cov = baselines::block_covariance(frame);

  CHECK(cov.num_channels == 4);
  CHECK(cov.block_len == 2048);
  CHECK(cov.num_bins() == 337);  // ceil(100 Hz)..floor(8 kHz) at 23.4375 Hz
  CHECK(cov.freqs_hz.front() >= 100.0);
  CHECK(cov.freqs_hz.back() <= 8000.0);
  CHECK(cov.freqs_hz.front() == doctest::Approx(5 * 48000.0 / 2048.0));
  CHECK(cov.freqs_hz.back() == doctest::Approx(341 * 48000.0 / 2048.0));

  for (int bn = 0; bn < cov.num_bins(); bn += 48) {
    const cdouble* r = cov.bin(bn);
    double trace = 0.0;
    for (int i = 0; i < 4; ++i) {
      trace += r[static_cast<size_t>(i) * 4 + i].real();
      for (int j = 0; j < 4; ++j) {
        const cdouble upper = r[static_cast<size_t>(i) * 4 + j];
        const cdouble lower = r[static_cast<size_t>(j) * 4 + i];
        CHECK(std::abs(upper - std::conj(lower)) < 1e-10);
      }
    }
    CHECK(trace >= 0.0);
    std::vector<cdouble> rm(r, r + 16);
    const auto eig = baselines::eig_hermitian(rm, 4);
    CHECK(eig.eigenvalues.front() >= -1e-12 * std::max(trace, 1.0));
  }

  dsp::MultichannelFrame bad = frame;
  bad.frame_len = 4096;
  bad.samples.resize(static_cast<size_t>(4) * 4096);
  CHECK_THROWS_AS(baselines::block_covariance(bad), ContractError);
}

TEST_CASE("single plane wave gives rank-one covariance bins") {
  // A broadband signal is only approximately rank-one per bin (window
  // leakage mixes neighboring frequencies whose steering phases differ), so
  // the exact fixture is a sum of sinusoids sitting precisely on the block
  // FFT grid: for those a pure delay IS a per-bin phase multiply, and each
  // probed bin must come out rank one to near machine precision.
  const auto geom = baselines::default_square_array();
  Rng rng(51);
  std::vector<int> tone_bins;  // 2048-point grid; probed below at 5 + bn
  for (int bn = 10; bn < 337; bn += 37) tone_bins.push_back(5 + bn);
  std::vector<double> signal(8192, 0.0);
  for (int k : tone_bins) {
    const double phase = rng.uniform(0.0, 2.0 * pi);
    for (int t = 0; t < 8192; ++t) {
      signal[t] += 0.1 * std::sin(2.0 * pi * k * t / 2048.0 + phase);
    }
  }
  const auto frame = plane_wave_frame(geom, -70.0, signal);
  const auto cov = baselines::block_covariance(frame);

  int checked = 0;
  for (int bn = 10; bn < cov.num_bins(); bn += 37) {
    std::vector<cdouble> r(cov.bin(bn), cov.bin(bn) + 16);
    const auto eig = baselines::eig_hermitian(r, 4);
    const double top = eig.eigenvalues.back();
    REQUIRE(top > 1e-12);  // the probed bins carry a tone by construction
    CHECK(eig.eigenvalues[2] / top < 1e-6);
    ++checked;
  }
  CHECK(checked >= 5);
}

TEST_CASE("steering field: unit modulus and geometric phase") {
  const auto geom = baselines::default_square_array();
  const std::vector<double> freqs = {500.0, 2000.0, 7900.0};
  const auto field = baselines::make_steering(geom, freqs);
  CHECK(field.num_dirs == 360);
  CHECK(field.num_freqs == 3);
  CHECK(field.num_channels == 4);

  Rng rng(52);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = rng.uniform_int(0, 359);
    const int f = rng.uniform_int(0, 2);
    const cdouble* a = field.at(d, f);
    const double az = coding::DoaGrid::direction(d) * pi / 180.0;
    for (int m = 0; m < 4; ++m) {
      CHECK(std::abs(std::abs(a[m]) - 1.0) < 1e-12);
      const double proj =
          std::cos(az) * geom.mics[m][0] + std::sin(az) * geom.mics[m][1];
      const cdouble want =
          std::polar(1.0, 2.0 * pi * freqs[f] * proj / geom.speed_of_sound);
      CHECK(std::abs(a[m] - want) < 1e-12);
    }
  }
}

TEST_CASE("rescale01: affine map to [0, 1], degenerate input to zeros") {
  std::vector<double> raw(360, 3.0);
  raw[10] = 5.0;
  raw[20] = 1.0;
  const auto r = baselines::rescale01(raw);
  CHECK(r.values[10] == 1.0);
  CHECK(r.values[20] == 0.0);
  CHECK(r.values[0] == doctest::Approx(0.5));
  CHECK(r.values[359] == doctest::Approx(0.5));

  const auto flat = baselines::rescale01(std::vector<double>(360, 0.7));
  for (double v : flat.values) CHECK(v == 0.0);

  // One value per grid direction is part of the contract.
  CHECK_THROWS_AS(baselines::rescale01({3.0, 1.0, 2.0}), ContractError);
}

TEST_CASE("all five spectra localize a noiseless plane wave") {
  const auto geom = baselines::default_square_array();
  const double truths[] = {0.0, 30.0, -70.0, 110.5, -155.25, 89.0};
  for (double truth : truths) {
    CAPTURE(truth);
    const auto frame =
        plane_wave_frame(geom, truth, white_signal(8192, 53), 1.0);
    const auto cov = baselines::block_covariance(frame);
    const auto steering = baselines::make_steering(geom, cov.freqs_hz);

    const auto srp = baselines::srp_phat(cov, steering);
    const auto nonlin = baselines::srp_nonlin(cov, steering);
    const auto mvdr = baselines::mvdr_snr(cov, steering);
    const auto sevd = baselines::sevd_music(cov, steering);
    const auto gevd = baselines::gevd_music(cov, cov, steering);  // self-whitened

    CHECK(argmax_error_deg(srp, truth) <= 2.0);
    CHECK(argmax_error_deg(nonlin, truth) <= 2.0);
    CHECK(argmax_error_deg(mvdr, truth) <= 2.0);
    CHECK(argmax_error_deg(sevd, truth) <= 2.0);
    // Self-whitening flattens the spectrum, so only check it ran; the
    // directional GEVD case is covered below.
    CHECK(static_cast<int>(gevd.spectrum.values.size()) == 360);

    // Spectra are rescaled into [0, 1] with the peak at exactly 1.
    for (const auto* spec : {&srp, &nonlin, &mvdr, &sevd}) {
      const auto [lo, hi] =
          std::minmax_element(spec->values.begin(), spec->values.end());
      CHECK(*lo == 0.0);
      CHECK(*hi == 1.0);
    }
  }
}

TEST_CASE("gevd with identity noise equals sevd") {
  const auto geom = baselines::default_square_array();
  const auto frame = plane_wave_frame(geom, 42.0, white_signal(8192, 54));
  const auto cov = baselines::block_covariance(frame);
  const auto steering = baselines::make_steering(geom, cov.freqs_hz);

  baselines::SpatialCovariance eye = cov;
  std::fill(eye.r.begin(), eye.r.end(), cdouble(0.0, 0.0));
  for (int b = 0; b < eye.num_bins(); ++b) {
    for (int i = 0; i < 4; ++i) eye.bin(b)[static_cast<size_t>(i) * 4 + i] = 1.0;
  }

  const auto sevd = baselines::sevd_music(cov, steering);
  const auto gevd = baselines::gevd_music(cov, eye, steering);
  CHECK_FALSE(gevd.noise_cov_loaded);
  for (int i = 0; i < 360; ++i) {
    CHECK(std::abs(gevd.spectrum.values[i] - sevd.values[i]) < 1e-9);
  }
}

TEST_CASE("gevd suppresses a directional interferer that fools sevd") {
  const auto geom = baselines::default_square_array();
  const double target = 35.0, interferer = -120.0;

  // Mixture frame: weak target plus strong interferer.
  const auto target_frame =
      plane_wave_frame(geom, target, white_signal(8192, 55), 1.0);
  const auto noise_frame =
      plane_wave_frame(geom, interferer, white_signal(8192, 56), 4.0);
  dsp::MultichannelFrame mix = target_frame;
  for (size_t i = 0; i < mix.samples.size(); ++i) {
    mix.samples[i] += noise_frame.samples[i];
  }
  const auto cov = baselines::block_covariance(mix);
  // Noise-only covariance from a different realization, same direction.
  const auto noise_only =
      plane_wave_frame(geom, interferer, white_signal(8192, 57), 4.0);
  const auto noise_cov = baselines::block_covariance(noise_only);

  const auto steering = baselines::make_steering(geom, cov.freqs_hz);
  const auto sevd = baselines::sevd_music(cov, steering);
  const auto gevd = baselines::gevd_music(cov, noise_cov, steering);

  // SEVD latches onto the dominant interferer; whitening recovers the target.
  CHECK(argmax_error_deg(sevd, interferer) <= 3.0);
  CHECK(argmax_error_deg(gevd.spectrum, target) <= 3.0);
}

TEST_CASE("gevd flags a near-singular noise covariance") {
  const auto geom = baselines::default_square_array();
  const auto frame = plane_wave_frame(geom, 10.0, white_signal(8192, 58));
  const auto cov = baselines::block_covariance(frame);
  const auto steering = baselines::make_steering(geom, cov.freqs_hz);

  // A single plane wave gives rank-one noise bins: maximally degenerate.
  const auto noise_only = plane_wave_frame(geom, -40.0, white_signal(8192, 59));
  const auto noise_cov = baselines::block_covariance(noise_only);
  const auto gevd = baselines::gevd_music(cov, noise_cov, steering);
  CHECK(gevd.noise_cov_loaded);
  CHECK(static_cast<int>(gevd.spectrum.values.size()) == 360);
}
