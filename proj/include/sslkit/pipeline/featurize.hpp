// Copyright 2026 The sslkit Authors
// SPDX-License-Identifier: Apache-2.0
//
// Glue between audio and model tensors: framing a recording at 8192/4096,
// extracting per-frame features in each architecture's input layout, and
// encoding ground truth into training targets.
//
// Layouts (M = 4 microphones -> P = 6 pairs, T = 51 delay taps, F = 40
// mel bands):
//   flat GCC     [P * T]        = 306   (feedforward network input)
//   GCCFB        [P][F][T]              (convolutional network input)
//   band-major   [F][P * T]     = 40 x 306 rows (two-stage network input,
//                 flattened row-major to one vector per frame)

#ifndef SSLKIT_PIPELINE_FEATURIZE_HPP_
#define SSLKIT_PIPELINE_FEATURIZE_HPP_

#include <string>
#include <vector>

#include "sslkit/dsp/features.hpp"
#include "sslkit/nn/architectures.hpp"
#include "sslkit/nn/tensor.hpp"

namespace sslkit::pipeline {

struct FeatureParams {
  int max_delay = 25;        // taps = 2 * max_delay + 1
  int num_mel_filters = 40;
  double mel_low_hz = 100.0;
  double mel_high_hz = 8000.0;

  int taps() const { return 2 * max_delay + 1; }
};

// Cuts a recording into overlapping 8192/4096 frames; the tail that does
// not fill a whole frame is dropped.  Throws ContractError when the
// recording is shorter than one frame.
std::vector<dsp::MultichannelFrame> frame_recording(
    const dsp::MultichannelFrame& recording);

// Per-frame feature vector in the layout the given architecture consumes.
// The mel filterbank is only touched for GCCFB-based models; pass the same
// params to amortize its construction across calls via make_filterbank.
std::vector<double> extract_feature(const dsp::MultichannelFrame& frame,
                                    nn::NetworkKind kind,
                                    const FeatureParams& params,
                                    const dsp::MelFilterBank& bank);

// Filterbank matching `params` for the standard 8192-point frame.
dsp::MelFilterBank make_filterbank(const FeatureParams& params,
                                   int sample_rate, int fft_len);

// Input width of extract_feature's output for this architecture.
int feature_dim(nn::NetworkKind kind, int num_channels,
                const FeatureParams& params);

// Stacks per-frame features/targets into training tensors.
nn::Tensor stack_rows(const std::vector<std::vector<double>>& rows);

}  // namespace sslkit::pipeline

#endif  // SSLKIT_PIPELINE_FEATURIZE_HPP_
