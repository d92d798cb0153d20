// Copyright 2026 The sslkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sslkit/sim/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sslkit/common/errors.hpp"
#include "sslkit/common/rng.hpp"
#include "sslkit/sim/signalbank.hpp"

namespace sslkit::sim {

namespace {

constexpr int kSincHalfTaps = 32;  // 64-tap interpolator

void check_scene(const SceneSpec& scene) {
  baselines::validate_geometry(scene.geometry);
  if (scene.sources.size() > 4) {
    throw ContractError("synthesize: at most 4 sources per scene");
  }
  for (const SourceSpec& s : scene.sources) {
    if (!(s.azimuth_deg >= -180.0 && s.azimuth_deg < 180.0)) {
      throw ContractError("synthesize: azimuth must lie in [-180, 180)");
    }
    if (!(s.distance_m > 0.3)) {
      throw ContractError("synthesize: source distance must exceed 0.3 m");
    }
    if (s.onset_s < 0.0) {
      throw ContractError("synthesize: onset must be >= 0");
    }
  }
  const int num_samples =
      static_cast<int>(std::lround(scene.duration_s * kWorkingRate));
  if (num_samples < kFrameLen) {
    throw ContractError("synthesize: duration shorter than one frame");
  }
  if (scene.noise.kind != "white" && scene.noise.kind != "recorded" &&
      scene.noise.kind != "none") {
    throw ContractError("synthesize: noise kind must be white, recorded or none");
  }
  if (scene.noise.kind == "recorded" && scene.noise.recorded.empty()) {
    throw ContractError("synthesize: recorded noise kind needs a noise buffer");
  }
}

// x(t - delay) for integer t via windowed-sinc interpolation, accumulated
// into out with the given gain.  x is placed at global sample `onset`.
void add_delayed(const std::vector<double>& x, long onset, double delay,
                 double gain, double* out, int out_len) {
  const double int_part = std::floor(delay);
  const double frac = delay - int_part;
  const long base_shift = static_cast<long>(int_part);
  // The kernel depends only on the fractional delay, so the taps are the
  // same for every output sample; evaluate them once and run a plain FIR.
  double sinc_tap[2 * kSincHalfTaps];
  double window_tap[2 * kSincHalfTaps];
  for (int m = -kSincHalfTaps + 1; m <= kSincHalfTaps; ++m) {
    const double u = m - frac;
    const double arg = std::numbers::pi * u;
    sinc_tap[m + kSincHalfTaps - 1] = u == 0.0 ? 1.0 : std::sin(arg) / arg;
    window_tap[m + kSincHalfTaps - 1] =
        0.5 + 0.5 * std::cos(std::numbers::pi * u / (kSincHalfTaps + 1));
  }
  const long x_len = static_cast<long>(x.size());
  for (long n = 0; n < out_len; ++n) {
    // out[n] += gain * x_global(n - delay), x_global(k) = x[k - onset].
    const long center = n - base_shift;
    // Taps with an in-range source index 0 <= center - m - onset < x_len
    // form one contiguous run of m; the rest contribute nothing.
    const long lo =
        std::max<long>(-kSincHalfTaps + 1, center - onset - x_len + 1);
    const long hi = std::min<long>(kSincHalfTaps, center - onset);
    double acc = 0.0;
    for (long m = lo; m <= hi; ++m) {
      const long idx = center - m - onset;
      acc += x[idx] * sinc_tap[m + kSincHalfTaps - 1] *
             window_tap[m + kSincHalfTaps - 1];
    }
    out[n] += gain * acc;
  }
}

}  // namespace

int frames_in(int num_samples) {
  if (num_samples < kFrameLen) return 0;
  return (num_samples - kFrameLen) / kFrameHop + 1;
}

SceneAudio synthesize(const SceneSpec& scene) {
  check_scene(scene);
  const int m = static_cast<int>(scene.geometry.mics.size());
  const int num_samples =
      static_cast<int>(std::lround(scene.duration_s * kWorkingRate));
  const int num_frames = frames_in(num_samples);
  const double c = scene.geometry.speed_of_sound;

  SceneAudio out;
  out.waveform.num_channels = m;
  out.waveform.frame_len = num_samples;
  out.waveform.sample_rate = kWorkingRate;
  out.waveform.samples.assign(static_cast<size_t>(m) * num_samples, 0.0);
  out.annotation.azimuths.resize(num_frames);

  // Per-source clean render, accumulated into the mix and analyzed for
  // frame activity before noise is added.
  std::vector<double> clean(static_cast<size_t>(m) * num_samples);
  for (const SourceSpec& src : scene.sources) {
    std::fill(clean.begin(), clean.end(), 0.0);

    // Truncate the source material to its onset/offset window.
    const long onset = std::lround(src.onset_s * kWorkingRate);
    std::vector<double> sig = src.signal;
    if (src.offset_s >= 0.0) {
      const long limit = std::lround((src.offset_s - src.onset_s) * kWorkingRate);
      if (limit < static_cast<long>(sig.size())) {
        sig.resize(std::max(limit, 0L));
      }
    }

    const double az = src.azimuth_deg * std::numbers::pi / 180.0;
    const double el = src.elevation_deg * std::numbers::pi / 180.0;
    const double pos[3] = {src.distance_m * std::cos(el) * std::cos(az),
                           src.distance_m * std::cos(el) * std::sin(az),
                           src.distance_m * std::sin(el)};
    const double base_gain = std::pow(10.0, src.gain_db / 20.0);

    for (int mic = 0; mic < m; ++mic) {
      const auto& p = scene.geometry.mics[mic];
      const double dx = pos[0] - p[0];
      const double dy = pos[1] - p[1];
      const double dz = pos[2] - p[2];
      const double r = std::sqrt(dx * dx + dy * dy + dz * dz);
      const double delay_samples = r / c * kWorkingRate;
      const double gain = base_gain / r;
      add_delayed(sig, onset, delay_samples, gain,
                  clean.data() + static_cast<size_t>(mic) * num_samples,
                  num_samples);
    }

    // Frame activity: clean per-frame RMS within 30 dB of the source's
    // peak frame RMS (power ratio over all channels; the sqrt cancels).
    std::vector<double> frame_power(num_frames, 0.0);
    double peak_power = 0.0;
    for (int f = 0; f < num_frames; ++f) {
      double sum = 0.0;
      const long begin = static_cast<long>(f) * kFrameHop;
      for (int mic = 0; mic < m; ++mic) {
        const double* ch = clean.data() + static_cast<size_t>(mic) * num_samples;
        for (long i = begin; i < begin + kFrameLen; ++i) sum += ch[i] * ch[i];
      }
      frame_power[f] = sum;
      peak_power = std::max(peak_power, sum);
    }
    const double threshold =
        peak_power * std::pow(10.0, -kActivityRangeDb / 10.0);
    for (int f = 0; f < num_frames; ++f) {
      if (peak_power > 0.0 && frame_power[f] > threshold) {
        out.annotation.azimuths[f].push_back(src.azimuth_deg);
      }
    }

    for (size_t i = 0; i < clean.size(); ++i) {
      out.waveform.samples[i] += clean[i];
    }
  }

  // Noise at the configured SNR relative to the clean mixture power.
  if (scene.noise.kind != "none") {
    double mix_power = 0.0;
    for (double v : out.waveform.samples) mix_power += v * v;
    mix_power /= out.waveform.samples.empty() ? 1 : out.waveform.samples.size();
    // Source-free scenes have no reference power; use a fixed noise RMS.
    const double noise_power =
        mix_power > 0.0 ? mix_power * std::pow(10.0, -scene.noise.snr_db / 10.0)
                        : 1e-4;
    const double noise_rms = std::sqrt(noise_power);

    Rng rng(scene.seed);
    if (scene.noise.kind == "white") {
      for (double& v : out.waveform.samples) v += noise_rms * rng.normal();
    } else {
      const std::vector<double>& buf = scene.noise.recorded;
      double buf_rms = 0.0;
      for (double v : buf) buf_rms += v * v;
      buf_rms = std::sqrt(buf_rms / buf.size());
      const double g = buf_rms > 0.0 ? noise_rms / buf_rms : 0.0;
      for (int mic = 0; mic < m; ++mic) {
        // Decorrelate channels with a random circular shift each.
        const size_t shift =
            static_cast<size_t>(rng.uniform_int(0, static_cast<long>(buf.size()) - 1));
        double* ch =
            out.waveform.samples.data() + static_cast<size_t>(mic) * num_samples;
        for (int i = 0; i < num_samples; ++i) {
          ch[i] += g * buf[(i + shift) % buf.size()];
        }
      }
    }
  }

  // Full-scale guard: keep artifacts finite-range for 32-bit float WAV.
  double peak = 0.0;
  for (double v : out.waveform.samples) peak = std::max(peak, std::fabs(v));
  if (peak > 1.0) {
    out.clipped_rescaled = true;
    out.rescale_gain = 0.99 / peak;
    for (double& v : out.waveform.samples) v *= out.rescale_gain;
  }
  return out;
}

}  // namespace sslkit::sim
