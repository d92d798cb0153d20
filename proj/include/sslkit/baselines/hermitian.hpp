// Copyright 2026 The sslkit Authors
// SPDX-License-Identifier: Apache-2.0
//
// Dense complex Hermitian linear algebra for the small per-frequency
// covariance matrices (M x M with M = a handful of microphones).  The
// eigensolver is a cyclic Jacobi iteration: each off-diagonal entry is
// zeroed by a unitary plane rotation, repeated in sweeps until the
// off-diagonal mass is negligible.  Cubic-in-M but exact to machine
// precision at these sizes, with eigenvalues returned ascending.

#ifndef SSLKIT_BASELINES_HERMITIAN_HPP_
#define SSLKIT_BASELINES_HERMITIAN_HPP_

#include <complex>
#include <vector>

namespace sslkit::baselines {

using cdouble = std::complex<double>;

struct HermitianEig {
  std::vector<double> eigenvalues;  // ascending
  // Column-major pairing: eigenvector j is entries [i * m + j] over rows i.
  std::vector<cdouble> eigenvectors;
};

// a is a row-major m x m Hermitian matrix (enforced by symmetrization).
HermitianEig eig_hermitian(const std::vector<cdouble>& a, int m);

// A^{-1} via the eigendecomposition; throws NumericError when an eigenvalue
// is too close to zero (callers apply diagonal loading first).
std::vector<cdouble> inverse_hermitian(const std::vector<cdouble>& a, int m);

// A^{-1/2} for positive definite A (same guard as inverse_hermitian).
std::vector<cdouble> inv_sqrt_hermitian(const std::vector<cdouble>& a, int m);

// a += delta * I with delta = scale * trace(a) / m; returns delta.
double diagonal_load(std::vector<cdouble>* a, int m, double scale = 1e-6);

}  // namespace sslkit::baselines

#endif  // SSLKIT_BASELINES_HERMITIAN_HPP_
