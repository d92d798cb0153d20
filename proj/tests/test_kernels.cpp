// Copyright 2026 The sslkit Authors
// SPDX-License-Identifier: Apache-2.0
//
// Kernel dispatch and scalar/SIMD equivalence.  The scalar variant is
// checked against naive loops written here; every SIMD variant the CPU
// supports is then checked against scalar on shapes chosen to exercise
// vector-width remainders.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "sslkit/common/errors.hpp"
#include "sslkit/common/rng.hpp"
#include "sslkit/kernels/kernels.hpp"

using namespace sslkit;

namespace {

std::vector<double> random_vec(size_t n, Rng* rng) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng->uniform(-1.0, 1.0);
  return v;
}

// Naive reference products, accumulation order independent of the kernels.
void naive_nn(const std::vector<double>& a, const std::vector<double>& b,
              std::vector<double>* c, int m, int k, int n, bool acc) {
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      double sum = acc ? (*c)[static_cast<size_t>(i) * n + j] : 0.0;
      for (int l = 0; l < k; ++l) {
        sum += a[static_cast<size_t>(i) * k + l] * b[static_cast<size_t>(l) * n + j];
      }
      (*c)[static_cast<size_t>(i) * n + j] = sum;
    }
  }
}

void naive_nt(const std::vector<double>& a, const std::vector<double>& b,
              std::vector<double>* c, int m, int k, int n, bool acc) {
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      double sum = acc ? (*c)[static_cast<size_t>(i) * n + j] : 0.0;
      for (int l = 0; l < k; ++l) {
        sum += a[static_cast<size_t>(i) * k + l] * b[static_cast<size_t>(j) * k + l];
      }
      (*c)[static_cast<size_t>(i) * n + j] = sum;
    }
  }
}

void naive_tn(const std::vector<double>& a, const std::vector<double>& b,
              std::vector<double>* c, int m, int k, int n, bool acc) {
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      double sum = acc ? (*c)[static_cast<size_t>(i) * n + j] : 0.0;
      for (int l = 0; l < k; ++l) {
        sum += a[static_cast<size_t>(l) * m + i] * b[static_cast<size_t>(l) * n + j];
      }
      (*c)[static_cast<size_t>(i) * n + j] = sum;
    }
  }
}

void check_close(const std::vector<double>& got, const std::vector<double>& want,
                 double tol) {
  REQUIRE(got.size() == want.size());
  for (size_t i = 0; i < got.size(); ++i) {
    const double denom = std::max({std::abs(got[i]), std::abs(want[i]), 1.0});
    CHECK(std::abs(got[i] - want[i]) / denom <= tol);
  }
}

struct Shape {
  int m, k, n;
};

// Odd shapes straddle the 4-lane (AVX2) and 8-lane (AVX-512) boundaries.
const Shape kShapes[] = {{1, 1, 1},  {2, 3, 4},   {5, 7, 3},   {4, 4, 4},
                         {8, 8, 8},  {17, 31, 13}, {33, 1, 65}, {3, 64, 9},
                         {16, 9, 27}};

}  // namespace

TEST_CASE("scalar matmul variants match naive loops") {
  const kernels::KernelTable* scalar = kernels::table_by_name("scalar");
  REQUIRE(scalar != nullptr);
  Rng rng(101);
  for (const Shape& s : kShapes) {
    for (bool acc : {false, true}) {
      const auto a = random_vec(static_cast<size_t>(s.m) * s.k, &rng);
      const auto b_nn = random_vec(static_cast<size_t>(s.k) * s.n, &rng);
      const auto b_nt = random_vec(static_cast<size_t>(s.n) * s.k, &rng);
      const auto a_tn = random_vec(static_cast<size_t>(s.k) * s.m, &rng);
      const auto seed_c = random_vec(static_cast<size_t>(s.m) * s.n, &rng);

      std::vector<double> got = seed_c, want = seed_c;
      scalar->matmul_nn(a.data(), b_nn.data(), got.data(), s.m, s.k, s.n, acc);
      naive_nn(a, b_nn, &want, s.m, s.k, s.n, acc);
      check_close(got, want, 1e-12);

      got = seed_c;
      want = seed_c;
      scalar->matmul_nt(a.data(), b_nt.data(), got.data(), s.m, s.k, s.n, acc);
      naive_nt(a, b_nt, &want, s.m, s.k, s.n, acc);
      check_close(got, want, 1e-12);

      got = seed_c;
      want = seed_c;
      scalar->matmul_tn(a_tn.data(), b_nn.data(), got.data(), s.m, s.k, s.n, acc);
      naive_tn(a_tn, b_nn, &want, s.m, s.k, s.n, acc);
      check_close(got, want, 1e-12);
    }
  }
}

TEST_CASE("scalar corr_tau matches a plain loop") {
  const kernels::KernelTable* scalar = kernels::table_by_name("scalar");
  REQUIRE(scalar != nullptr);
  Rng rng(202);
  for (int n : {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 64, 337}) {
    const auto xre = random_vec(n, &rng);
    const auto xim = random_vec(n, &rng);
    const auto cre = random_vec(n, &rng);
    const auto sim = random_vec(n, &rng);
    double want_re = 0.25, want_im = -0.5;  // nonzero accumulators
    for (int i = 0; i < n; ++i) {
      want_re += xre[i] * cre[i];
      want_im += xim[i] * sim[i];
    }
    double got_re = 0.25, got_im = -0.5;
    scalar->corr_tau(xre.data(), xim.data(), cre.data(), sim.data(), n,
                     &got_re, &got_im);
    CHECK(std::abs(got_re - want_re) <= 1e-12 * std::max(1.0, std::abs(want_re)));
    CHECK(std::abs(got_im - want_im) <= 1e-12 * std::max(1.0, std::abs(want_im)));
  }
}

TEST_CASE("every SIMD variant matches scalar") {
  const kernels::KernelTable* scalar = kernels::table_by_name("scalar");
  REQUIRE(scalar != nullptr);
  for (const std::string& name : kernels::available()) {
    if (name == "scalar") continue;
    const kernels::KernelTable* simd = kernels::table_by_name(name);
    REQUIRE(simd != nullptr);
    CAPTURE(name);
    Rng rng(303);
    for (const Shape& s : kShapes) {
      for (bool acc : {false, true}) {
        const auto a = random_vec(static_cast<size_t>(s.m) * s.k, &rng);
        const auto b = random_vec(static_cast<size_t>(s.k) * s.n, &rng);
        const auto bt = random_vec(static_cast<size_t>(s.n) * s.k, &rng);
        const auto at = random_vec(static_cast<size_t>(s.k) * s.m, &rng);
        const auto seed_c = random_vec(static_cast<size_t>(s.m) * s.n, &rng);

        std::vector<double> c1 = seed_c, c2 = seed_c;
        scalar->matmul_nn(a.data(), b.data(), c1.data(), s.m, s.k, s.n, acc);
        simd->matmul_nn(a.data(), b.data(), c2.data(), s.m, s.k, s.n, acc);
        check_close(c2, c1, 1e-12);

        c1 = seed_c;
        c2 = seed_c;
        scalar->matmul_nt(a.data(), bt.data(), c1.data(), s.m, s.k, s.n, acc);
        simd->matmul_nt(a.data(), bt.data(), c2.data(), s.m, s.k, s.n, acc);
        check_close(c2, c1, 1e-12);

        c1 = seed_c;
        c2 = seed_c;
        scalar->matmul_tn(at.data(), b.data(), c1.data(), s.m, s.k, s.n, acc);
        simd->matmul_tn(at.data(), b.data(), c2.data(), s.m, s.k, s.n, acc);
        check_close(c2, c1, 1e-12);
      }
    }
    for (int n : {0, 1, 3, 4, 7, 8, 9, 16, 17, 31, 33, 337, 4095}) {
      const auto xre = random_vec(n, &rng);
      const auto xim = random_vec(n, &rng);
      const auto cre = random_vec(n, &rng);
      const auto sim = random_vec(n, &rng);
      double r1 = 0, i1 = 0, r2 = 0, i2 = 0;
      scalar->corr_tau(xre.data(), xim.data(), cre.data(), sim.data(), n, &r1, &i1);
      simd->corr_tau(xre.data(), xim.data(), cre.data(), sim.data(), n, &r2, &i2);
      CHECK(std::abs(r1 - r2) <= 1e-12 * std::max(1.0, std::abs(r1)));
      CHECK(std::abs(i1 - i2) <= 1e-12 * std::max(1.0, std::abs(i1)));
    }
  }
}

TEST_CASE("dispatch: force by name, reject unknown names") {
  const std::vector<std::string> names = kernels::available();
  REQUIRE(!names.empty());
  CHECK(std::find(names.begin(), names.end(), "scalar") != names.end());

  const std::string original = kernels::active().name;
  CHECK(std::find(names.begin(), names.end(), original) != names.end());

  kernels::force("scalar");
  CHECK(std::string(kernels::active().name) == "scalar");

  CHECK_THROWS_AS(kernels::force("vliw"), ConfigError);
  // Unknown names must not clobber the selection.
  CHECK(std::string(kernels::active().name) == "scalar");

  kernels::force(original);
  CHECK(std::string(kernels::active().name) == original);
}
