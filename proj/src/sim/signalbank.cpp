// Copyright 2026 The sslkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sslkit/sim/signalbank.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sslkit/common/errors.hpp"
#include "sslkit/io/wav.hpp"

namespace sslkit::sim {

namespace {

double rms(const std::vector<double>& x) {
  double sum = 0.0;
  for (double v : x) sum += v * v;
  return x.empty() ? 0.0 : std::sqrt(sum / x.size());
}

void normalize_rms(std::vector<double>* x, double target) {
  const double r = rms(*x);
  if (r <= 0.0) return;
  const double g = target / r;
  for (double& v : *x) v *= g;
}

}  // namespace

std::vector<double> speech_like(int num_samples, int sample_rate, Rng* rng) {
  if (num_samples < 1 || sample_rate < 8000) {
    throw ContractError("speech_like: bad length or sample rate");
  }
  std::vector<double> out(num_samples, 0.0);

  // One-pole lowpass with its knee at 500 Hz.
  const double pole = std::exp(-2.0 * std::numbers::pi * 500.0 / sample_rate);
  double lp_state = 0.0;

  // Syllabic modulation: one rate per utterance in the 2-8 Hz range, with
  // a floor that keeps the quietest stretch 20 dB below the loudest.
  const double am_rate = rng->uniform(2.0, 8.0);
  const double am_phase = rng->uniform(0.0, 2.0 * std::numbers::pi);

  // Alternating voiced/unvoiced segments, 120-400 ms each.
  bool voiced = rng->uniform() < 0.7;
  int segment_left = 0;
  double pitch_period = 0.0;
  double pitch_phase = 0.0;

  for (int n = 0; n < num_samples; ++n) {
    if (segment_left == 0) {
      segment_left = static_cast<int>(
          rng->uniform(0.12, 0.4) * sample_rate);
      voiced = !voiced;
      if (voiced) {
        pitch_period = sample_rate / rng->uniform(90.0, 250.0);
        pitch_phase = 0.0;
      }
    }
    --segment_left;

    // Excitation: unit-variance pulse train when voiced (pulse amplitude
    // sqrt(period) keeps average power 1), unit white noise otherwise.
    double excitation;
    if (voiced) {
      pitch_phase += 1.0;
      if (pitch_phase >= pitch_period) {
        pitch_phase -= pitch_period;
        excitation = std::sqrt(pitch_period);
      } else {
        excitation = 0.0;
      }
      excitation += 0.1 * rng->normal();  // aspiration
    } else {
      excitation = 0.7 * rng->normal();
    }

    lp_state = (1.0 - pole) * excitation + pole * lp_state;

    const double t = static_cast<double>(n) / sample_rate;
    const double envelope =
        0.55 + 0.45 * std::sin(2.0 * std::numbers::pi * am_rate * t + am_phase);
    out[n] = lp_state * envelope;
  }
  normalize_rms(&out, 0.1);
  return out;
}

std::vector<double> noise_burst(int num_samples, int sample_rate, Rng* rng) {
  if (num_samples < 1 || sample_rate < 8000) {
    throw ContractError("noise_burst: bad length or sample rate");
  }
  std::vector<double> out(num_samples);
  for (double& v : out) v = rng->normal();
  const int ramp = std::min(num_samples / 2, sample_rate / 100);  // 10 ms
  for (int i = 0; i < ramp; ++i) {
    const double w =
        0.5 - 0.5 * std::cos(std::numbers::pi * (i + 1) / (ramp + 1));
    out[i] *= w;
    out[num_samples - 1 - i] *= w;
  }
  normalize_rms(&out, 0.1);
  return out;
}

std::vector<double> resample(const std::vector<double>& mono, int in_rate,
                             int out_rate) {
  if (in_rate < 1 || out_rate < 1) {
    throw ContractError("resample: rates must be positive");
  }
  if (in_rate == out_rate) return mono;
  const long out_len = std::lround(
      static_cast<double>(mono.size()) * out_rate / in_rate);
  std::vector<double> out(out_len, 0.0);
  constexpr int kHalfTaps = 32;
  // When downsampling, the sinc cutoff drops to the output Nyquist rate.
  const double ratio = static_cast<double>(out_rate) / in_rate;
  const double cutoff = std::min(1.0, ratio);
  for (long i = 0; i < out_len; ++i) {
    const double center = static_cast<double>(i) / ratio;
    const long base = std::lround(center);
    double acc = 0.0;
    for (long k = base - kHalfTaps; k <= base + kHalfTaps; ++k) {
      if (k < 0 || k >= static_cast<long>(mono.size())) continue;
      const double x = center - static_cast<double>(k);
      const double arg = std::numbers::pi * x;
      const double sinc = x == 0.0 ? cutoff : std::sin(cutoff * arg) / arg;
      const double window =
          0.5 + 0.5 * std::cos(std::numbers::pi * x / (kHalfTaps + 1));
      acc += mono[k] * sinc * window;
    }
    out[i] = acc;
  }
  return out;
}

std::vector<double> load_source_file(const std::string& path) {
  const dsp::MultichannelFrame audio = io::read_wav(path);
  std::vector<double> mono(audio.frame_len);
  const double* ch0 = audio.channel(0);
  std::copy(ch0, ch0 + audio.frame_len, mono.begin());
  return resample(mono, audio.sample_rate, kWorkingRate);
}

}  // namespace sslkit::sim
