// Copyright 2026 The sslkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sslkit/nn/tensor.hpp"

#include <algorithm>
#include <cmath>

#include "sslkit/common/errors.hpp"

namespace sslkit::nn {

long shape_product(const std::vector<int>& dims) {
  long n = 1;
  for (int d : dims) {
    if (d <= 0) throw ContractError("tensor dimensions must be positive");
    n *= d;
  }
  return n;
}

Tensor::Tensor(std::vector<int> dims) : shape(std::move(dims)) {
  data.assign(static_cast<size_t>(shape_product(shape)), 0.0);
}

void Tensor::fill(double v) { std::fill(data.begin(), data.end(), v); }

void Tensor::check_finite(const std::string& context) const {
  for (double v : data) {
    if (!std::isfinite(v)) {
      throw NumericError("non-finite value in " + context);
    }
  }
}

}  // namespace sslkit::nn
