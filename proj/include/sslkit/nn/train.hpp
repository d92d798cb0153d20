// Copyright 2026 The sslkit Authors
// SPDX-License-Identifier: Apache-2.0
//
// Shuffled mini-batch training with Adam and MSE loss, plus the two-step
// scheme for the two-stage network: phase 1 fits Subnet1 alone against each
// frame's likelihood vector (every frequency band becomes one sample), phase
// 2 continues end-to-end.  Fully deterministic under a fixed seed.

#ifndef SSLKIT_NN_TRAIN_HPP_
#define SSLKIT_NN_TRAIN_HPP_

#include <cstdint>
#include <vector>

#include "sslkit/nn/adam.hpp"
#include "sslkit/nn/architectures.hpp"
#include "sslkit/nn/tensor.hpp"

namespace sslkit::nn {

struct TrainConfig {
  int batch_size = 256;
  int epochs = 10;         // end-to-end epochs (phase 2 for the TSNN)
  int phase1_epochs = 4;   // TSNN stage-1 pretraining epochs
  bool skip_phase1 = false;
  AdamConfig adam;
  uint64_t seed = 1;
};

struct TrainResult {
  // Mean training loss per epoch (end-to-end phase).
  std::vector<double> epoch_loss;
  // Mean loss per phase-1 epoch (two-step training only; otherwise empty).
  std::vector<double> phase1_loss;
};

// Mean squared error over every output element; fills grad with dL/dpred
// when grad is non-null (evaluation callers pass nullptr).
double mse_loss(const Tensor& pred, const Tensor& target, Tensor* grad);

// Mini-batch Adam/MSE on (inputs [N x D], targets [N x output_dim]).
// When `optimizer` is given its state (moments, step count) is used and
// advanced in place — the hook for resuming from a checkpoint; otherwise a
// fresh Adam is created from config.adam.
TrainResult train(Network& net, const Tensor& inputs, const Tensor& targets,
                  const TrainConfig& config, Adam* optimizer = nullptr);

// Two-step TSNN training; throws ContractError for other architectures.
// With skip_phase1 the call degenerates to plain end-to-end training.
TrainResult train_two_stage(Network& net, const Tensor& inputs,
                            const Tensor& targets, const TrainConfig& config);

// Mean MSE of the frozen network over a dataset, batched for memory.
double evaluate_mse(const Network& net, const Tensor& inputs,
                    const Tensor& targets, int batch_size = 64);

}  // namespace sslkit::nn

#endif  // SSLKIT_NN_TRAIN_HPP_
