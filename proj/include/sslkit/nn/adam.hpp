// Copyright 2026 The sslkit Authors
// SPDX-License-Identifier: Apache-2.0
//
// Standard bias-corrected Adam.  Moments are kept per parameter name so the
// full optimizer state can be checkpointed and restored.

#ifndef SSLKIT_NN_ADAM_HPP_
#define SSLKIT_NN_ADAM_HPP_

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sslkit/nn/layers.hpp"
#include "sslkit/nn/tensor.hpp"

namespace sslkit::nn {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

class Adam {
 public:
  explicit Adam(const AdamConfig& config) : config_(config) {}

  // Applies one update to every parameter using its accumulated gradient.
  // Moment tensors are created lazily on first sight of a parameter name.
  void step(const std::vector<ParamRef>& params);

  long step_count() const { return step_; }
  const AdamConfig& config() const { return config_; }

  // Exposed for checkpointing: name -> (first moment, second moment).
  std::map<std::string, std::pair<Tensor, Tensor>>& moments() {
    return moments_;
  }
  const std::map<std::string, std::pair<Tensor, Tensor>>& moments() const {
    return moments_;
  }
  void set_step_count(long t) { step_ = t; }

 private:
  AdamConfig config_;
  long step_ = 0;
  std::map<std::string, std::pair<Tensor, Tensor>> moments_;
};

}  // namespace sslkit::nn

#endif  // SSLKIT_NN_ADAM_HPP_
