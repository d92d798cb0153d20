// Copyright 2026 The sslkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sslkit/coding/coding.hpp"

#include <algorithm>
#include <cmath>

#include "sslkit/common/errors.hpp"

namespace sslkit::coding {

namespace {

void check_params(const CodingParams& params) {
  if (!(params.sigma > 0.0) || !(params.sigma_n > 0.0)) {
    throw ConfigError("coding sigma and sigma_n must be positive");
  }
  if (!(params.xi > 0.0) || !(params.xi < 1.0)) {
    throw ConfigError("coding threshold xi must lie in (0, 1)");
  }
}

// Grid candidates that dominate their circular neighborhood (d < sigma_n),
// ordered by value descending then azimuth ascending; used by both decode
// (after thresholding) and top_n.
std::vector<int> neighborhood_maxima(const std::vector<double>& v,
                                     double sigma_n) {
  const int n = DoaGrid::kSize;
  // d(theta_j, theta_i) < sigma_n on the 1-degree grid means an index offset
  // of at most ceil(sigma_n) - 1 in either direction.
  const int radius = static_cast<int>(std::ceil(sigma_n)) - 1;
  std::vector<int> maxima;
  for (int i = 0; i < n; ++i) {
    bool is_max = true;
    for (int off = -radius; off <= radius && is_max; ++off) {
      if (off == 0) continue;
      const int j = ((i + off) % n + n) % n;
      if (v[j] > v[i]) is_max = false;
    }
    if (is_max) maxima.push_back(i);
  }
  std::sort(maxima.begin(), maxima.end(), [&](int a, int b) {
    if (v[a] != v[b]) return v[a] > v[b];
    return a < b;
  });
  return maxima;
}

// Greedy suppression: accept candidates in order, skipping any within
// sigma_n of an accepted azimuth; stops after limit picks (limit < 0: all).
std::vector<double> greedy_select(const std::vector<int>& ordered,
                                  double sigma_n, int limit) {
  std::vector<double> picked;
  for (int idx : ordered) {
    if (limit >= 0 && static_cast<int>(picked.size()) >= limit) break;
    const double az = DoaGrid::direction(idx);
    bool clear = true;
    for (double chosen : picked) {
      if (angular_distance(az, chosen) < sigma_n) {
        clear = false;
        break;
      }
    }
    if (clear) picked.push_back(az);
  }
  return picked;
}

}  // namespace

int DoaGrid::nearest_index(double azimuth) {
  const int i = static_cast<int>(std::lround(azimuth)) + 180;
  return ((i % kSize) + kSize) % kSize;
}

double angular_distance(double a, double b) {
  double d = std::fmod(std::fabs(a - b), 360.0);
  return d > 180.0 ? 360.0 - d : d;
}

LikelihoodVector encode(const GroundTruth& truth, const CodingParams& params) {
  check_params(params);
  LikelihoodVector out;
  if (truth.azimuths.empty()) return out;
  const double inv_s2 = 1.0 / (params.sigma * params.sigma);
  for (int i = 0; i < DoaGrid::kSize; ++i) {
    const double theta = DoaGrid::direction(i);
    double best = 0.0;
    for (double src : truth.azimuths) {
      const double d = angular_distance(theta, src);
      best = std::max(best, std::exp(-d * d * inv_s2));
    }
    out.values[i] = best;
  }
  return out;
}

std::vector<double> decode(const LikelihoodVector& likelihood,
                           const CodingParams& params) {
  check_params(params);
  const auto& v = likelihood.values;
  std::vector<int> candidates;
  for (int idx : neighborhood_maxima(v, params.sigma_n)) {
    if (v[idx] > params.xi) candidates.push_back(idx);
  }
  std::vector<double> picked = greedy_select(candidates, params.sigma_n, -1);
  std::sort(picked.begin(), picked.end());
  return picked;
}

std::vector<double> top_n(const LikelihoodVector& likelihood, int n,
                          const CodingParams& params) {
  check_params(params);
  if (n < 1) throw ConfigError("top_n requires n >= 1");
  const auto& v = likelihood.values;
  std::vector<double> picked =
      greedy_select(neighborhood_maxima(v, params.sigma_n), params.sigma_n, n);

  if (static_cast<int>(picked.size()) < n) {
    // Degenerate likelihood (fewer maxima than requested sources): pad with
    // the next-largest grid points that keep the separation rule.
    std::vector<int> all(DoaGrid::kSize);
    for (int i = 0; i < DoaGrid::kSize; ++i) all[i] = i;
    std::sort(all.begin(), all.end(), [&](int a, int b) {
      if (v[a] != v[b]) return v[a] > v[b];
      return a < b;
    });
    for (int idx : all) {
      if (static_cast<int>(picked.size()) >= n) break;
      const double az = DoaGrid::direction(idx);
      bool clear = true;
      for (double chosen : picked) {
        if (angular_distance(az, chosen) < params.sigma_n) {
          clear = false;
          break;
        }
      }
      if (clear) picked.push_back(az);
    }
  }
  std::sort(picked.begin(), picked.end());
  return picked;
}

}  // namespace sslkit::coding
