// Copyright 2026 The sslkit Authors
// SPDX-License-Identifier: Apache-2.0
//
// Classical spatial-spectrum estimators over the 360-point azimuth grid:
// SRP-PHAT, its nonlinear variant, MVDR with an SNR score, and MUSIC with
// standard or generalized (noise-whitened) eigendecomposition.  Every
// estimator consumes a block-averaged SpatialCovariance plus a precomputed
// SteeringField and emits a per-direction likelihood affinely rescaled to
// [0, 1], so downstream peak picking treats them exactly like the learned
// models' outputs.

#ifndef SSLKIT_BASELINES_SPECTRA_HPP_
#define SSLKIT_BASELINES_SPECTRA_HPP_

#include <complex>
#include <vector>

#include "sslkit/baselines/covariance.hpp"
#include "sslkit/baselines/geometry.hpp"
#include "sslkit/coding/coding.hpp"

namespace sslkit::baselines {

// Far-field steering vectors for every grid direction and scoring bin.
// Entry m for direction u (unit vector toward the source, elevation 0) is
// the array manifold exp(+j w u.p_m / c): a microphone with positive
// projection on u meets the incoming wavefront early, i.e. with a phase
// advance.  All entries have modulus 1.
struct SteeringField {
  int num_dirs = 0;
  int num_freqs = 0;
  int num_channels = 0;
  // Row-major [num_dirs][num_freqs][M].
  std::vector<cdouble> a;

  const cdouble* at(int dir, int freq) const {
    return a.data() +
           (static_cast<size_t>(dir) * num_freqs + freq) * num_channels;
  }
};

SteeringField make_steering(const ArrayGeometry& geometry,
                            const std::vector<double>& freqs_hz);

// MUSIC output plus metadata; `noise_cov_loaded` reports that the supplied
// noise covariance was near singular and had to be diagonally loaded.
struct MusicResult {
  coding::LikelihoodVector spectrum;
  bool noise_cov_loaded = false;
};

// Affine per-frame rescale of a raw spectrum to [0, 1] (min -> 0, max -> 1);
// a degenerate flat spectrum maps to all zeros.
coding::LikelihoodVector rescale01(const std::vector<double>& values);

// score(theta) = sum_w sum_{i<j} Re( conj(a_i) a_j R_ij / |R_ij| ).
coding::LikelihoodVector srp_phat(const SpatialCovariance& cov,
                                  const SteeringField& steering);

// As srp_phat, but each pair correlation r in [-1, 1] passes through
// 1 - tanh(gamma * sqrt(1 - r)) before summation, sharpening the peaks.
// A non-positive gamma selects the default num_bins / 100.
coding::LikelihoodVector srp_nonlin(const SpatialCovariance& cov,
                                    const SteeringField& steering,
                                    double nonlin_gamma = 0.0);

// MVDR output power P(theta) = sum_w 1 / (a^H R~^{-1} a) with diagonal
// loading, scored as SNR against the frame's own noise floor:
// P(theta) / min_theta P(theta).
coding::LikelihoodVector mvdr_snr(const SpatialCovariance& cov,
                                  const SteeringField& steering);

// MUSIC with a standard eigendecomposition per frequency.  num_sources is
// the assumed signal count per time-frequency bin (the noise subspace keeps
// the M - num_sources smallest eigenvectors); callers model one dominant
// signal per bin and pass 1.
coding::LikelihoodVector sevd_music(const SpatialCovariance& cov,
                                    const SteeringField& steering,
                                    int num_sources = 1);

// MUSIC after whitening by the inverse square root of a measured noise
// covariance; reduces to sevd_music when noise_cov is the identity.
MusicResult gevd_music(const SpatialCovariance& cov,
                       const SpatialCovariance& noise_cov,
                       const SteeringField& steering, int num_sources = 1);

}  // namespace sslkit::baselines

#endif  // SSLKIT_BASELINES_SPECTRA_HPP_
