// Copyright 2026 The sslkit Authors
// SPDX-License-Identifier: Apache-2.0
//
// Frame-level localization metrics.  Known-N evaluation takes the N
// strongest peaks per frame and matches them one-to-one against ground
// truth with a minimum-total-error assignment; unknown-N evaluation sweeps
// the detection threshold and pools precision/recall counts over frames.

#ifndef SSLKIT_EVAL_METRICS_HPP_
#define SSLKIT_EVAL_METRICS_HPP_

#include <vector>

#include "sslkit/coding/coding.hpp"

namespace sslkit::eval {

struct EvalConfig {
  double admissible_error_deg = 5.0;
  coding::CodingParams coding;  // sigma_n and the sweep's working xi
  std::vector<double> thresholds = default_thresholds();

  // 101 points: 0.005, 0.01 .. 0.99, 0.995 (endpoints clamped into (0, 1)).
  static std::vector<double> default_thresholds();
};

struct KnownNBucket {
  long frames = 0;
  long matched = 0;  // matched prediction/truth pairs
  long correct = 0;  // pairs with error < admissible_error
  double error_sum = 0.0;

  double mae() const { return matched > 0 ? error_sum / matched : 0.0; }
  double acc() const {
    return matched > 0 ? static_cast<double>(correct) / matched : 0.0;
  }
};

struct KnownNReport {
  KnownNBucket overall;            // every frame with N >= 1
  std::vector<KnownNBucket> by_n;  // index N in [1, 4]; [0] stays empty
};

struct PrPoint {
  double xi = 0.0;
  double precision = 1.0;
  double recall = 1.0;
  long tp = 0;
  long fp = 0;
  long fn = 0;
};

struct PrCurve {
  std::vector<PrPoint> points;  // in threshold order
};

// Minimum-total-error one-to-one assignment between two equally sized sets
// of azimuths (brute force, up to 4 elements); returns per-pair errors.
std::vector<double> assign_errors(const std::vector<double>& predictions,
                                  const std::vector<double>& truths);

// Known source count: top_n(N) peaks, optimal assignment, MAE/ACC with
// per-N breakdown.  Frames with N = 0 are skipped; N > 4 throws.
KnownNReport eval_known_n(const std::vector<coding::LikelihoodVector>& outputs,
                          const std::vector<std::vector<double>>& truths,
                          const EvalConfig& cfg);

// Unknown source count: decode at each threshold, greedy nearest-first
// one-to-one matching, counts pooled over all frames (N = 0 frames
// contribute false positives only).  Precision with zero predictions is 1.
PrCurve eval_unknown_n(const std::vector<coding::LikelihoodVector>& outputs,
                       const std::vector<std::vector<double>>& truths,
                       const EvalConfig& cfg);

}  // namespace sslkit::eval

#endif  // SSLKIT_EVAL_METRICS_HPP_
