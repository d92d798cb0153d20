// Copyright 2026 The sslkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sslkit/nn/adam.hpp"

#include <cmath>

#include "sslkit/common/errors.hpp"

namespace sslkit::nn {

void Adam::step(const std::vector<ParamRef>& params) {
  ++step_;
  const double bc1 = 1.0 - std::pow(config_.beta1, static_cast<double>(step_));
  const double bc2 = 1.0 - std::pow(config_.beta2, static_cast<double>(step_));
  for (const ParamRef& p : params) {
    auto it = moments_.find(p.name);
    if (it == moments_.end()) {
      it = moments_
               .emplace(p.name, std::make_pair(Tensor(p.value->shape),
                                               Tensor(p.value->shape)))
               .first;
    }
    Tensor& m = it->second.first;
    Tensor& v = it->second.second;
    if (!m.same_shape(*p.value)) {
      throw ContractError("Adam moment shape mismatch for " + p.name);
    }
    const size_t n = p.value->data.size();
    for (size_t i = 0; i < n; ++i) {
      const double g = p.grad->data[i];
      m.data[i] = config_.beta1 * m.data[i] + (1.0 - config_.beta1) * g;
      v.data[i] = config_.beta2 * v.data[i] + (1.0 - config_.beta2) * g * g;
      const double mhat = m.data[i] / bc1;
      const double vhat = v.data[i] / bc2;
      p.value->data[i] -= config_.lr * mhat / (std::sqrt(vhat) + config_.epsilon);
    }
  }
}

}  // namespace sslkit::nn
