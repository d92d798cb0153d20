// Copyright 2026 The sslkit Authors
// SPDX-License-Identifier: Apache-2.0
//
// Free-field scene synthesis: each source reaches each microphone through
// a pure delay (64-tap windowed-sinc fractional interpolation) and a 1/r
// gain, sources sum linearly, then noise is added at a configured SNR.
// Per-frame ground truth marks a source active when its clean in-frame RMS
// is within 30 dB of that source's peak frame RMS.

#ifndef SSLKIT_SIM_SYNTH_HPP_
#define SSLKIT_SIM_SYNTH_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "sslkit/baselines/geometry.hpp"
#include "sslkit/dsp/features.hpp"

namespace sslkit::sim {

inline constexpr int kFrameLen = 8192;
inline constexpr int kFrameHop = 4096;
inline constexpr double kActivityRangeDb = 30.0;

struct SourceSpec {
  double azimuth_deg = 0.0;    // [-180, 180)
  double elevation_deg = 0.0;
  double distance_m = 1.5;     // > 0.3
  std::vector<double> signal;  // mono waveform at the working rate
  double gain_db = 0.0;
  double onset_s = 0.0;
  double offset_s = -1.0;      // < 0: play the whole signal
};

struct NoiseSpec {
  // "white": independent Gaussian noise per channel; "recorded": a supplied
  // mono buffer, circularly shifted per channel; "none": noiseless output
  // (used by the analytic oracles).
  std::string kind = "white";
  double snr_db = 10.0;
  std::vector<double> recorded;
};

struct SceneSpec {
  baselines::ArrayGeometry geometry;
  std::vector<SourceSpec> sources;  // 0..4 entries
  NoiseSpec noise;
  double duration_s = 1.0;  // >= one frame
  uint64_t seed = 1;
};

struct ScenarioAnnotation {
  int frame_len = kFrameLen;
  int hop = kFrameHop;
  // Active-source azimuths per frame; counts are the list lengths.
  std::vector<std::vector<double>> azimuths;

  int num_frames() const { return static_cast<int>(azimuths.size()); }
};

struct SceneAudio {
  dsp::MultichannelFrame waveform;  // full scene, frame_len = total samples
  ScenarioAnnotation annotation;
  // Set when the mix exceeded full scale and had to be rescaled.
  bool clipped_rescaled = false;
  double rescale_gain = 1.0;
};

int frames_in(int num_samples);

// Validates the scene and renders it.  Throws ContractError for invalid
// specs (bad azimuth/distance ranges, too many sources, sub-frame duration).
SceneAudio synthesize(const SceneSpec& scene);

}  // namespace sslkit::sim

#endif  // SSLKIT_SIM_SYNTH_HPP_
