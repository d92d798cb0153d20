// Copyright 2026 The sslkit Authors
// SPDX-License-Identifier: Apache-2.0
//
// The three localization networks:
//
//   MLP-GCC    flat GCC-PHAT input -> 3 x [dense + ReLU + batchnorm]
//              -> dense(360) + sigmoid.
//   CNN-GCCFB  pair-as-channel GCCFB input -> 4 x [conv 3x3 stride 2 + ReLU
//              + batchnorm] -> flatten -> dense(360) + sigmoid.
//   TSNN-GCCFB two-stage net: Subnet1 (2-hidden-layer MLP, shared across all
//              frequency bands) maps each band's pair correlations to a
//              DOA-aligned latent vector; Subnet2 (1-hidden-layer MLP, shared
//              across all DOAs) reads the latents of every band in a +/-12
//              degree neighborhood of one DOA and emits that direction's
//              likelihood.
//
// All outputs are 360-point likelihood vectors squashed by a sigmoid.

#ifndef SSLKIT_NN_ARCHITECTURES_HPP_
#define SSLKIT_NN_ARCHITECTURES_HPP_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "sslkit/nn/layers.hpp"
#include "sslkit/nn/tensor.hpp"

namespace sslkit::nn {

enum class NetworkKind : uint8_t {
  kMlpGcc = 1,
  kCnnGccfb = 2,
  kTsnnGccfb = 3,
};

std::string network_kind_name(NetworkKind kind);
NetworkKind network_kind_from_name(const std::string& name);

// Opaque per-batch autodiff state; each network defines its own.
struct Tape {
  virtual ~Tape() = default;
};

class Network {
 public:
  Network(NetworkKind kind, uint64_t seed) : kind_(kind), seed_(seed) {}
  virtual ~Network() = default;

  NetworkKind kind() const { return kind_; }
  uint64_t seed() const { return seed_; }

  virtual int input_dim() const = 0;
  virtual int output_dim() const = 0;

  // Inference-mode forward: [batch x input_dim] -> [batch x output_dim].
  // Pure function of the parameters (batchnorm uses running statistics).
  virtual Tensor forward(const Tensor& in) const = 0;

  // Training-mode forward; returns the tape that backward consumes.
  virtual std::unique_ptr<Tape> forward_train(const Tensor& in,
                                              Tensor* out) = 0;

  // Accumulates parameter gradients for d(loss)/d(output).
  virtual void backward(const Tape& tape, const Tensor& grad_out) = 0;

  virtual std::vector<ParamRef> params() = 0;
  virtual std::vector<BufferRef> buffers() = 0;

  // Hyperparameters sufficient to rebuild the architecture.
  virtual nlohmann::json hyper_json() const = 0;

  void zero_grads();
  long param_count();

 private:
  NetworkKind kind_;
  uint64_t seed_;
};

// An ordered layer stack used by the concrete networks.
class Sequential {
 public:
  void add(std::unique_ptr<Layer> layer) { layers_.push_back(std::move(layer)); }

  Tensor forward_train(const Tensor& in, std::vector<LayerCache>* caches);
  Tensor forward_infer(const Tensor& in) const;
  Tensor backward(const std::vector<LayerCache>& caches,
                  const Tensor& grad_out);
  void params(const std::string& prefix, std::vector<ParamRef>* out);
  void buffers(const std::string& prefix, std::vector<BufferRef>* out);

 private:
  std::vector<std::unique_ptr<Layer>> layers_;
};

// ---------------------------------------------------------------------------
// Architecture configurations (defaults are for a 4-microphone array)
// ---------------------------------------------------------------------------

struct MlpConfig {
  int input_dim = 306;  // pairs * delays = 6 * 51
  std::vector<int> hidden = {1000, 1000, 500};
  int output_dim = 360;

  nlohmann::json to_json() const;
  static MlpConfig from_json(const nlohmann::json& j);
};

struct CnnConfig {
  int in_channels = 6;  // microphone pairs
  int height = 40;      // mel bands
  int width = 51;       // delays
  std::vector<int> channels = {32, 64, 128, 128};
  int kernel = 3;
  int stride = 2;
  int output_dim = 360;

  nlohmann::json to_json() const;
  static CnnConfig from_json(const nlohmann::json& j);
};

struct TsnnConfig {
  int bands = 40;
  int band_input = 306;  // pairs * delays per band
  std::vector<int> subnet1_hidden = {500, 500};
  int latent = 360;  // DOA-aligned latent size; must equal output_dim
  int subnet2_hidden = 500;
  int neighborhood = 12;  // degrees to each side -> 25 latent taps per band
  int output_dim = 360;

  int taps() const { return 2 * neighborhood + 1; }
  nlohmann::json to_json() const;
  static TsnnConfig from_json(const nlohmann::json& j);
};

// ---------------------------------------------------------------------------
// Concrete networks
// ---------------------------------------------------------------------------

class SequentialNetwork : public Network {
 public:
  SequentialNetwork(NetworkKind kind, uint64_t seed, int input_dim,
                    int output_dim, nlohmann::json hyper);

  int input_dim() const override { return input_dim_; }
  int output_dim() const override { return output_dim_; }
  Tensor forward(const Tensor& in) const override;
  std::unique_ptr<Tape> forward_train(const Tensor& in, Tensor* out) override;
  void backward(const Tape& tape, const Tensor& grad_out) override;
  std::vector<ParamRef> params() override;
  std::vector<BufferRef> buffers() override;
  nlohmann::json hyper_json() const override { return hyper_; }

  Sequential& stack() { return seq_; }

 private:
  int input_dim_;
  int output_dim_;
  nlohmann::json hyper_;
  Sequential seq_;
};

class TsnnNetwork : public Network {
 public:
  TsnnNetwork(const TsnnConfig& config, uint64_t seed);

  int input_dim() const override { return config_.bands * config_.band_input; }
  int output_dim() const override { return config_.output_dim; }
  Tensor forward(const Tensor& in) const override;
  std::unique_ptr<Tape> forward_train(const Tensor& in, Tensor* out) override;
  void backward(const Tape& tape, const Tensor& grad_out) override;
  std::vector<ParamRef> params() override;
  std::vector<BufferRef> buffers() override;
  nlohmann::json hyper_json() const override;

  const TsnnConfig& config() const { return config_; }

  // Stage-1 training view: Subnet1 + sigmoid head over single-band samples
  // [n x band_input] -> [n x latent].  Shares parameters with this network.
  Tensor phase1_forward(const Tensor& bands) const;
  std::unique_ptr<Tape> phase1_forward_train(const Tensor& bands, Tensor* out);
  void phase1_backward(const Tape& tape, const Tensor& grad_out);
  std::vector<ParamRef> phase1_params();

 private:
  // Latents for one batch, as [batch*bands x latent].
  Tensor stage2_input(const Tensor& latents, int batch) const;

  TsnnConfig config_;
  Sequential subnet1_;
  SigmoidLayer head_;  // phase-1 target head; phase 2 feeds pre-sigmoid latents onward
  Sequential subnet2_;
  // gather_[i * taps + t] = latent column feeding output DOA i at tap t.
  std::vector<int> gather_;
};

// ---------------------------------------------------------------------------
// Builders and feature adapters
// ---------------------------------------------------------------------------

std::unique_ptr<Network> build_mlp_gcc(const MlpConfig& config, uint64_t seed);
std::unique_ptr<Network> build_cnn_gccfb(const CnnConfig& config, uint64_t seed);
std::unique_ptr<Network> build_tsnn_gccfb(const TsnnConfig& config,
                                          uint64_t seed);
std::unique_ptr<Network> build_network(NetworkKind kind,
                                       const nlohmann::json& hyper,
                                       uint64_t seed);

}  // namespace sslkit::nn

#endif  // SSLKIT_NN_ARCHITECTURES_HPP_
