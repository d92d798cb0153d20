// Copyright 2026 The sslkit Authors
// SPDX-License-Identifier: Apache-2.0
//
// Likelihood-based azimuth coding on a 1-degree grid of 360 directions.
// Ground truth encodes as the pointwise maximum of Gaussian-like bumps
// centered on the true azimuths; decoding picks thresholded local maxima.

#ifndef SSLKIT_CODING_CODING_HPP_
#define SSLKIT_CODING_CODING_HPP_

#include <vector>

namespace sslkit::coding {

// Fixed circular grid theta_i = i - 180 degrees, i = 0..359.
struct DoaGrid {
  static constexpr int kSize = 360;
  static double direction(int i) { return static_cast<double>(i - 180); }
  // Nearest grid index for an azimuth in [-180, 180).
  static int nearest_index(double azimuth);
};

// 360-point DOA likelihood; values in [0, 1].
struct LikelihoodVector {
  std::vector<double> values;

  LikelihoodVector() : values(DoaGrid::kSize, 0.0) {}
};

struct CodingParams {
  double sigma = 8.0;    // encoding bump width, degrees
  double sigma_n = 8.0;  // decoding neighborhood radius, degrees
  double xi = 0.5;       // detection threshold in (0, 1)
};

// Per-frame ground truth: N >= 0 source azimuths in [-180, 180).
struct GroundTruth {
  std::vector<double> azimuths;
};

// Circular distance in degrees; result in [0, 180].
double angular_distance(double a, double b);

// o_i = max_j exp(-d(theta_i, theta_j)^2 / sigma^2); all zeros when N = 0.
// Off-grid azimuths are encoded exactly (no snapping).
LikelihoodVector encode(const GroundTruth& truth, const CodingParams& params);

// Thresholded circular peak picking: keeps every grid direction whose value
// exceeds xi and dominates its neighborhood (d < sigma_n), then greedily
// suppresses candidates within sigma_n of an accepted peak (larger value
// first, smaller azimuth on ties).  Result is sorted ascending.
std::vector<double> decode(const LikelihoodVector& likelihood,
                           const CodingParams& params);

// The n strongest local maxima under the same neighborhood rule, without a
// threshold; when fewer than n exist, pads with the next-largest grid points
// that keep at least sigma_n separation.  Result is sorted ascending.
std::vector<double> top_n(const LikelihoodVector& likelihood, int n,
                          const CodingParams& params);

}  // namespace sslkit::coding

#endif  // SSLKIT_CODING_CODING_HPP_
