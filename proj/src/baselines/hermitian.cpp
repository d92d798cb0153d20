// Copyright 2026 The sslkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sslkit/baselines/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sslkit/common/errors.hpp"

namespace sslkit::baselines {

namespace {

// One unitary plane rotation zeroing a[p][q]:
//   U = diag(e^{i phi/2}, e^{-i phi/2}) * [[c, s], [-s, c]]
// where phi is the phase of a[p][q] and (c, s) is the classic real Jacobi
// rotation for the de-phased 2x2 block.
struct PlaneRotation {
  cdouble upp, upq, uqp, uqq;
};

PlaneRotation make_rotation(double app, double aqq, cdouble apq) {
  const double r = std::abs(apq);
  const double phi = std::arg(apq);
  const double tau = (aqq - app) / (2.0 * r);
  double t;
  if (tau == 0.0) {
    t = 1.0;
  } else {
    t = (tau > 0.0 ? 1.0 : -1.0) / (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
  }
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;
  const cdouble d1 = std::polar(1.0, phi / 2.0);
  const cdouble d2 = std::conj(d1);
  return {d1 * c, d1 * s, -d2 * s, d2 * c};
}

double offdiag_norm2(const std::vector<cdouble>& a, int m) {
  double sum = 0.0;
  for (int p = 0; p < m; ++p) {
    for (int q = p + 1; q < m; ++q) {
      sum += std::norm(a[static_cast<size_t>(p) * m + q]);
    }
  }
  return sum;
}

}  // namespace

HermitianEig eig_hermitian(const std::vector<cdouble>& a_in, int m) {
  if (static_cast<int>(a_in.size()) != m * m || m < 1) {
    throw ContractError("eig_hermitian: bad matrix size");
  }
  // Symmetrize to wash out round-off asymmetry from accumulation.
  std::vector<cdouble> a(static_cast<size_t>(m) * m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      a[static_cast<size_t>(i) * m + j] =
          0.5 * (a_in[static_cast<size_t>(i) * m + j] +
                 std::conj(a_in[static_cast<size_t>(j) * m + i]));
    }
  }

  std::vector<cdouble> v(static_cast<size_t>(m) * m, 0.0);
  for (int i = 0; i < m; ++i) v[static_cast<size_t>(i) * m + i] = 1.0;

  double fro2 = 0.0;
  for (const cdouble& x : a) fro2 += std::norm(x);
  const double stop = std::max(fro2, 1e-300) * 1e-30;

  for (int sweep = 0; sweep < 100 && offdiag_norm2(a, m) > stop; ++sweep) {
    for (int p = 0; p < m; ++p) {
      for (int q = p + 1; q < m; ++q) {
        const cdouble apq = a[static_cast<size_t>(p) * m + q];
        if (std::norm(apq) <= stop / (static_cast<double>(m) * m)) continue;
        const PlaneRotation u = make_rotation(
            a[static_cast<size_t>(p) * m + p].real(),
            a[static_cast<size_t>(q) * m + q].real(), apq);
        // A <- U^H A U: column combine then row combine.
        for (int k = 0; k < m; ++k) {
          const cdouble akp = a[static_cast<size_t>(k) * m + p];
          const cdouble akq = a[static_cast<size_t>(k) * m + q];
          a[static_cast<size_t>(k) * m + p] = akp * u.upp + akq * u.uqp;
          a[static_cast<size_t>(k) * m + q] = akp * u.upq + akq * u.uqq;
        }
        for (int k = 0; k < m; ++k) {
          const cdouble apk = a[static_cast<size_t>(p) * m + k];
          const cdouble aqk = a[static_cast<size_t>(q) * m + k];
          a[static_cast<size_t>(p) * m + k] =
              std::conj(u.upp) * apk + std::conj(u.uqp) * aqk;
          a[static_cast<size_t>(q) * m + k] =
              std::conj(u.upq) * apk + std::conj(u.uqq) * aqk;
        }
        // V <- V U.
        for (int k = 0; k < m; ++k) {
          const cdouble vkp = v[static_cast<size_t>(k) * m + p];
          const cdouble vkq = v[static_cast<size_t>(k) * m + q];
          v[static_cast<size_t>(k) * m + p] = vkp * u.upp + vkq * u.uqp;
          v[static_cast<size_t>(k) * m + q] = vkp * u.upq + vkq * u.uqq;
        }
      }
    }
  }

  std::vector<int> order(static_cast<size_t>(m));
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> diag(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) {
    diag[i] = a[static_cast<size_t>(i) * m + i].real();
  }
  std::sort(order.begin(), order.end(),
            [&](int x, int y) { return diag[x] < diag[y]; });

  HermitianEig out;
  out.eigenvalues.resize(static_cast<size_t>(m));
  out.eigenvectors.resize(static_cast<size_t>(m) * m);
  for (int j = 0; j < m; ++j) {
    out.eigenvalues[j] = diag[order[j]];
    for (int i = 0; i < m; ++i) {
      out.eigenvectors[static_cast<size_t>(i) * m + j] =
          v[static_cast<size_t>(i) * m + order[j]];
    }
  }
  return out;
}

namespace {

std::vector<cdouble> function_of_matrix(const std::vector<cdouble>& a, int m,
                                        double (*fn)(double),
                                        const char* what) {
  const HermitianEig eig = eig_hermitian(a, m);
  const double scale = std::fabs(eig.eigenvalues.back());
  for (double lambda : eig.eigenvalues) {
    if (!(lambda > scale * 1e-14) || !(lambda > 0.0)) {
      throw NumericError(std::string(what) +
                         ": matrix is singular or indefinite");
    }
  }
  std::vector<cdouble> out(static_cast<size_t>(m) * m, 0.0);
  for (int j = 0; j < m; ++j) {
    const double f = fn(eig.eigenvalues[j]);
    for (int i = 0; i < m; ++i) {
      const cdouble vi = eig.eigenvectors[static_cast<size_t>(i) * m + j];
      for (int k = 0; k < m; ++k) {
        const cdouble vk = eig.eigenvectors[static_cast<size_t>(k) * m + j];
        out[static_cast<size_t>(i) * m + k] += f * vi * std::conj(vk);
      }
    }
  }
  return out;
}

}  // namespace

std::vector<cdouble> inverse_hermitian(const std::vector<cdouble>& a, int m) {
  return function_of_matrix(
      a, m, [](double x) { return 1.0 / x; }, "inverse_hermitian");
}

std::vector<cdouble> inv_sqrt_hermitian(const std::vector<cdouble>& a, int m) {
  return function_of_matrix(
      a, m, [](double x) { return 1.0 / std::sqrt(x); }, "inv_sqrt_hermitian");
}

double diagonal_load(std::vector<cdouble>* a, int m, double scale) {
  double trace = 0.0;
  for (int i = 0; i < m; ++i) trace += (*a)[static_cast<size_t>(i) * m + i].real();
  const double delta = scale * trace / m;
  for (int i = 0; i < m; ++i) (*a)[static_cast<size_t>(i) * m + i] += delta;
  return delta;
}

}  // namespace sslkit::baselines
