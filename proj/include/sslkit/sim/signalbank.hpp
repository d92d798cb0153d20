// Copyright 2026 The sslkit Authors
// SPDX-License-Identifier: Apache-2.0
//
// Mono source material for scene synthesis: a speech-like generator
// (first-order lowpassed excitation with syllabic amplitude modulation and
// voiced/unvoiced alternation), plain noise bursts, and ingestion of
// user-provided mono recordings with sinc resampling to the working rate.

#ifndef SSLKIT_SIM_SIGNALBANK_HPP_
#define SSLKIT_SIM_SIGNALBANK_HPP_

#include <string>
#include <vector>

#include "sslkit/common/rng.hpp"

namespace sslkit::sim {

inline constexpr int kWorkingRate = 48000;

// Speech-like utterance: alternating voiced (pulse-train) and unvoiced
// (noise) segments, shaped by a one-pole lowpass at 500 Hz — giving the
// classic -6 dB/octave rolloff above the knee — and a 2-8 Hz syllabic
// amplitude modulation whose floor keeps every active frame within 20 dB
// of the utterance peak.  RMS-normalized to 0.1.
std::vector<double> speech_like(int num_samples, int sample_rate, Rng* rng);

// White Gaussian burst with 10 ms raised-cosine ramps, RMS 0.1.
std::vector<double> noise_burst(int num_samples, int sample_rate, Rng* rng);

// Windowed-sinc resampling (32 taps per side); pass-through when the rates
// already match.  Output length = round(len * out_rate / in_rate).
std::vector<double> resample(const std::vector<double>& mono, int in_rate,
                             int out_rate);

// Reads a mono (or first-channel) WAV and resamples it to 48 kHz.
std::vector<double> load_source_file(const std::string& path);

}  // namespace sslkit::sim

#endif  // SSLKIT_SIM_SIGNALBANK_HPP_
