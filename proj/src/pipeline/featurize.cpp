// Copyright 2026 The sslkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sslkit/pipeline/featurize.hpp"

#include <algorithm>

#include "sslkit/common/errors.hpp"
#include "sslkit/sim/synth.hpp"

namespace sslkit::pipeline {

std::vector<dsp::MultichannelFrame> frame_recording(
    const dsp::MultichannelFrame& recording) {
  const int num_frames = sim::frames_in(recording.frame_len);
  if (num_frames < 1) {
    throw ContractError("frame_recording: recording shorter than one frame");
  }
  std::vector<dsp::MultichannelFrame> frames(num_frames);
  for (int f = 0; f < num_frames; ++f) {
    dsp::MultichannelFrame& frame = frames[f];
    frame.num_channels = recording.num_channels;
    frame.frame_len = sim::kFrameLen;
    frame.sample_rate = recording.sample_rate;
    frame.frame_index = f;
    frame.samples.resize(static_cast<size_t>(frame.num_channels) *
                         sim::kFrameLen);
    const long begin = static_cast<long>(f) * sim::kFrameHop;
    for (int ch = 0; ch < frame.num_channels; ++ch) {
      const double* src = recording.channel(ch) + begin;
      std::copy(src, src + sim::kFrameLen,
                frame.samples.begin() +
                    static_cast<size_t>(ch) * sim::kFrameLen);
    }
  }
  return frames;
}

dsp::MelFilterBank make_filterbank(const FeatureParams& params,
                                   int sample_rate, int fft_len) {
  return dsp::make_mel_filterbank(params.num_mel_filters, params.mel_low_hz,
                                  params.mel_high_hz, sample_rate, fft_len);
}

int feature_dim(nn::NetworkKind kind, int num_channels,
                const FeatureParams& params) {
  const int pairs = num_channels * (num_channels - 1) / 2;
  switch (kind) {
    case nn::NetworkKind::kMlpGcc:
      return pairs * params.taps();
    case nn::NetworkKind::kCnnGccfb:
    case nn::NetworkKind::kTsnnGccfb:
      return pairs * params.num_mel_filters * params.taps();
  }
  throw ContractError("feature_dim: unknown architecture");
}

std::vector<double> extract_feature(const dsp::MultichannelFrame& frame,
                                    nn::NetworkKind kind,
                                    const FeatureParams& params,
                                    const dsp::MelFilterBank& bank) {
  const std::vector<dsp::ChannelSpectrum> spectra = dsp::window_and_fft(frame);
  if (kind == nn::NetworkKind::kMlpGcc) {
    dsp::GccPhatFeature gcc =
        dsp::gcc_phat(spectra, -params.max_delay, params.max_delay);
    return std::move(gcc.values);
  }

  const dsp::GccFbFeature fb =
      dsp::gccfb(spectra, bank, -params.max_delay, params.max_delay);
  if (kind == nn::NetworkKind::kCnnGccfb) {
    return fb.values;  // already [pairs][bands][taps]
  }

  // Two-stage layout: band-major [bands][pairs * taps].
  const int taps = params.taps();
  std::vector<double> out(fb.values.size());
  for (int f = 0; f < fb.num_filters; ++f) {
    for (int p = 0; p < fb.num_pairs; ++p) {
      const double* src =
          fb.values.data() +
          (static_cast<long>(p) * fb.num_filters + f) * taps;
      std::copy(src, src + taps,
                out.begin() +
                    (static_cast<long>(f) * fb.num_pairs + p) * taps);
    }
  }
  return out;
}

nn::Tensor stack_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw ContractError("stack_rows: no rows");
  const int width = static_cast<int>(rows[0].size());
  nn::Tensor out({static_cast<int>(rows.size()), width});
  for (size_t r = 0; r < rows.size(); ++r) {
    if (static_cast<int>(rows[r].size()) != width) {
      throw ContractError("stack_rows: ragged rows");
    }
    std::copy(rows[r].begin(), rows[r].end(),
              out.ptr() + static_cast<long>(r) * width);
  }
  return out;
}

}  // namespace sslkit::pipeline
