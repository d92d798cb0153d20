// Copyright 2026 The sslkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sslkit/baselines/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sslkit/baselines/hermitian.hpp"
#include "sslkit/common/errors.hpp"

namespace sslkit::baselines {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

void check_compatible(const SpatialCovariance& cov,
                      const SteeringField& steering) {
  if (cov.num_channels != steering.num_channels ||
      cov.num_bins() != steering.num_freqs) {
    throw ContractError(
        "spatial spectrum: covariance and steering field disagree on "
        "channel count or frequency bins");
  }
}

// Phase-transformed pair correlations r_ij(theta, w) summed through `accum`;
// shared core of srp_phat and srp_nonlin.
template <typename Accum>
coding::LikelihoodVector srp_core(const SpatialCovariance& cov,
                                  const SteeringField& steering, Accum accum) {
  check_compatible(cov, steering);
  const int m = cov.num_channels;
  std::vector<double> score(coding::DoaGrid::kSize, 0.0);
  // Normalized cross terms for one bin, upper triangle only.
  std::vector<cdouble> phat(static_cast<size_t>(m) * m);
  for (int b = 0; b < cov.num_bins(); ++b) {
    const cdouble* rb = cov.bin(b);
    for (int i = 0; i < m; ++i) {
      for (int j = i + 1; j < m; ++j) {
        const cdouble rij = rb[static_cast<size_t>(i) * m + j];
        const double mag = std::abs(rij);
        phat[static_cast<size_t>(i) * m + j] =
            mag > 0.0 ? rij / mag : cdouble(0.0, 0.0);
      }
    }
    for (int d = 0; d < coding::DoaGrid::kSize; ++d) {
      const cdouble* a = steering.at(d, b);
      double s = 0.0;
      for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
          const cdouble r = phat[static_cast<size_t>(i) * m + j];
          if (r == cdouble(0.0, 0.0)) continue;
          s += accum((std::conj(a[i]) * a[j] * r).real());
        }
      }
      score[d] += s;
    }
  }
  return rescale01(score);
}

}  // namespace

SteeringField make_steering(const ArrayGeometry& geometry,
                            const std::vector<double>& freqs_hz) {
  validate_geometry(geometry);
  const int m = static_cast<int>(geometry.mics.size());
  SteeringField field;
  field.num_dirs = coding::DoaGrid::kSize;
  field.num_freqs = static_cast<int>(freqs_hz.size());
  field.num_channels = m;
  field.a.resize(static_cast<size_t>(field.num_dirs) * field.num_freqs * m);

  for (int d = 0; d < field.num_dirs; ++d) {
    const double az = coding::DoaGrid::direction(d) * kDegToRad;
    const double ux = std::cos(az);
    const double uy = std::sin(az);
    for (int f = 0; f < field.num_freqs; ++f) {
      const double w = 2.0 * std::numbers::pi * freqs_hz[f];
      cdouble* out =
          field.a.data() + (static_cast<size_t>(d) * field.num_freqs + f) * m;
      for (int mic = 0; mic < m; ++mic) {
        const auto& p = geometry.mics[mic];
        const double proj = ux * p[0] + uy * p[1];
        out[mic] = std::polar(1.0, w * proj / geometry.speed_of_sound);
      }
    }
  }
  return field;
}

coding::LikelihoodVector rescale01(const std::vector<double>& values) {
  if (static_cast<int>(values.size()) != coding::DoaGrid::kSize) {
    throw ContractError("rescale01: expected one value per grid direction");
  }
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double span = *hi_it - lo;
  coding::LikelihoodVector out;
  if (!(span > 0.0) || !std::isfinite(span)) {
    return out;  // degenerate or flat frame: all zeros
  }
  for (int i = 0; i < coding::DoaGrid::kSize; ++i) {
    out.values[i] = (values[i] - lo) / span;
  }
  return out;
}

coding::LikelihoodVector srp_phat(const SpatialCovariance& cov,
                                  const SteeringField& steering) {
  return srp_core(cov, steering, [](double r) { return r; });
}

coding::LikelihoodVector srp_nonlin(const SpatialCovariance& cov,
                                    const SteeringField& steering,
                                    double nonlin_gamma) {
  const double gamma =
      nonlin_gamma > 0.0 ? nonlin_gamma : cov.num_bins() / 100.0;
  return srp_core(cov, steering, [gamma](double r) {
    const double clipped = std::clamp(r, -1.0, 1.0);
    return 1.0 - std::tanh(gamma * std::sqrt(1.0 - clipped));
  });
}

coding::LikelihoodVector mvdr_snr(const SpatialCovariance& cov,
                                  const SteeringField& steering) {
  check_compatible(cov, steering);
  const int m = cov.num_channels;
  std::vector<double> power(coding::DoaGrid::kSize, 0.0);
  std::vector<cdouble> loaded(static_cast<size_t>(m) * m);
  std::vector<cdouble> tmp(m);
  for (int b = 0; b < cov.num_bins(); ++b) {
    const cdouble* rb = cov.bin(b);
    loaded.assign(rb, rb + static_cast<size_t>(m) * m);
    double trace = 0.0;
    for (int i = 0; i < m; ++i) trace += loaded[static_cast<size_t>(i) * m + i].real();
    if (!(trace > 0.0)) continue;  // silent bin carries no information
    diagonal_load(&loaded, m);
    const std::vector<cdouble> rinv = inverse_hermitian(loaded, m);
    for (int d = 0; d < coding::DoaGrid::kSize; ++d) {
      const cdouble* a = steering.at(d, b);
      for (int i = 0; i < m; ++i) {
        cdouble acc(0.0, 0.0);
        for (int j = 0; j < m; ++j) {
          acc += rinv[static_cast<size_t>(i) * m + j] * a[j];
        }
        tmp[i] = acc;
      }
      double quad = 0.0;
      for (int i = 0; i < m; ++i) quad += (std::conj(a[i]) * tmp[i]).real();
      power[d] += 1.0 / std::max(quad, 1e-300);
    }
  }
  const double floor_power =
      *std::min_element(power.begin(), power.end());
  if (floor_power > 0.0) {
    for (double& p : power) p /= floor_power;
  }
  return rescale01(power);
}

namespace {

// Shared MUSIC scorer: per frequency bin the caller provides the (possibly
// whitened) covariance and a transform applied to the steering vectors; the
// score is the normalized inverse projection onto the noise subspace.
class MusicAccumulator {
 public:
  MusicAccumulator(int m, int num_sources)
      : m_(m), noise_dim_(m - num_sources),
        score_(coding::DoaGrid::kSize, 0.0), proj_(m) {
    if (num_sources < 1 || noise_dim_ < 1) {
      throw ContractError(
          "music: num_sources must be in [1, channels - 1]");
    }
  }

  // eig: decomposition of this bin's covariance (eigenvalues ascending, so
  // the noise subspace is the first noise_dim_ columns).  steer(i) returns
  // steering entry i for the current direction, already whitened if needed.
  template <typename Steer>
  void add_bin(const HermitianEig& eig, int dir, Steer steer) {
    double norm2 = 0.0;
    for (int i = 0; i < m_; ++i) norm2 += std::norm(steer(i));
    double resid2 = 0.0;
    for (int v = 0; v < noise_dim_; ++v) {
      cdouble dot(0.0, 0.0);
      for (int i = 0; i < m_; ++i) {
        dot += std::conj(eig.eigenvectors[static_cast<size_t>(i) * m_ + v]) *
               steer(i);
      }
      resid2 += std::norm(dot);
    }
    score_[dir] += norm2 / (resid2 + 1e-300);
  }

  coding::LikelihoodVector finish(int num_bins) {
    if (num_bins > 0) {
      for (double& s : score_) s /= num_bins;
    }
    return rescale01(score_);
  }

  int noise_dim() const { return noise_dim_; }

 private:
  int m_;
  int noise_dim_;
  std::vector<double> score_;
  std::vector<cdouble> proj_;
};

}  // namespace

coding::LikelihoodVector sevd_music(const SpatialCovariance& cov,
                                    const SteeringField& steering,
                                    int num_sources) {
  check_compatible(cov, steering);
  const int m = cov.num_channels;
  MusicAccumulator acc(m, num_sources);
  std::vector<cdouble> loaded(static_cast<size_t>(m) * m);
  for (int b = 0; b < cov.num_bins(); ++b) {
    const cdouble* rb = cov.bin(b);
    loaded.assign(rb, rb + static_cast<size_t>(m) * m);
    diagonal_load(&loaded, m);
    const HermitianEig eig = eig_hermitian(loaded, m);
    for (int d = 0; d < coding::DoaGrid::kSize; ++d) {
      const cdouble* a = steering.at(d, b);
      acc.add_bin(eig, d, [a](int i) { return a[i]; });
    }
  }
  return acc.finish(cov.num_bins());
}

MusicResult gevd_music(const SpatialCovariance& cov,
                       const SpatialCovariance& noise_cov,
                       const SteeringField& steering, int num_sources) {
  check_compatible(cov, steering);
  check_compatible(noise_cov, steering);
  const int m = cov.num_channels;
  MusicAccumulator acc(m, num_sources);
  MusicResult result;
  std::vector<cdouble> rn(static_cast<size_t>(m) * m);
  std::vector<cdouble> loaded(static_cast<size_t>(m) * m);
  std::vector<cdouble> wa(m);
  for (int b = 0; b < cov.num_bins(); ++b) {
    const cdouble* nb = noise_cov.bin(b);
    rn.assign(nb, nb + static_cast<size_t>(m) * m);
    double trace = 0.0;
    for (int i = 0; i < m; ++i) trace += rn[static_cast<size_t>(i) * m + i].real();
    const HermitianEig neig = eig_hermitian(rn, m);
    if (neig.eigenvalues.front() <= 1e-12 * std::max(trace / m, 1e-300)) {
      diagonal_load(&rn, m);
      result.noise_cov_loaded = true;
    }
    const std::vector<cdouble> w = inv_sqrt_hermitian(rn, m);

    // Whitened covariance W R W^H (W is Hermitian, but keep the general form).
    const cdouble* rb = cov.bin(b);
    std::vector<cdouble> wr(static_cast<size_t>(m) * m, cdouble(0.0, 0.0));
    for (int i = 0; i < m; ++i) {
      for (int k = 0; k < m; ++k) {
        const cdouble wik = w[static_cast<size_t>(i) * m + k];
        for (int j = 0; j < m; ++j) {
          wr[static_cast<size_t>(i) * m + j] +=
              wik * rb[static_cast<size_t>(k) * m + j];
        }
      }
    }
    loaded.assign(static_cast<size_t>(m) * m, cdouble(0.0, 0.0));
    for (int i = 0; i < m; ++i) {
      for (int k = 0; k < m; ++k) {
        const cdouble wrik = wr[static_cast<size_t>(i) * m + k];
        for (int j = 0; j < m; ++j) {
          loaded[static_cast<size_t>(i) * m + j] +=
              wrik * std::conj(w[static_cast<size_t>(j) * m + k]);
        }
      }
    }
    diagonal_load(&loaded, m);
    const HermitianEig eig = eig_hermitian(loaded, m);

    for (int d = 0; d < coding::DoaGrid::kSize; ++d) {
      const cdouble* a = steering.at(d, b);
      for (int i = 0; i < m; ++i) {
        cdouble sum(0.0, 0.0);
        for (int j = 0; j < m; ++j) {
          sum += w[static_cast<size_t>(i) * m + j] * a[j];
        }
        wa[i] = sum;
      }
      acc.add_bin(eig, d, [&wa](int i) { return wa[i]; });
    }
  }
  result.spectrum = acc.finish(cov.num_bins());
  return result;
}

}  // namespace sslkit::baselines
