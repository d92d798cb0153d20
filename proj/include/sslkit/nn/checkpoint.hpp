// Copyright 2026 The sslkit Authors
// SPDX-License-Identifier: Apache-2.0
//
// SSLW checkpoint container: little-endian binary file holding the
// architecture id, its hyperparameter block, the seed, and a named tensor
// table (parameters, batchnorm running statistics, and optionally Adam
// moments).  Round trips are lossless: loading rebuilds the architecture and
// restores every value bit for bit.

#ifndef SSLKIT_NN_CHECKPOINT_HPP_
#define SSLKIT_NN_CHECKPOINT_HPP_

#include <memory>
#include <optional>
#include <string>

#include "sslkit/nn/adam.hpp"
#include "sslkit/nn/architectures.hpp"

namespace sslkit::nn {

// Writes the network (and optimizer state when given) to path.
void save_weights(Network& net, const std::string& path,
                  const Adam* adam = nullptr);

// Rebuilds the checkpointed network.  When `expected` is set and the file
// declares a different architecture, throws ContractError.
std::unique_ptr<Network> load_weights(
    const std::string& path,
    std::optional<NetworkKind> expected = std::nullopt);

struct LoadedCheckpoint {
  std::unique_ptr<Network> net;
  // Restored optimizer (step count and moments); null when the checkpoint
  // was saved without optimizer state.
  std::unique_ptr<Adam> adam;
};

// As load_weights, but also restores the optimizer for resumed training.
LoadedCheckpoint load_checkpoint(
    const std::string& path, const AdamConfig& adam_config,
    std::optional<NetworkKind> expected = std::nullopt);

}  // namespace sslkit::nn

#endif  // SSLKIT_NN_CHECKPOINT_HPP_
