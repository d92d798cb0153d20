// Copyright 2026 The sslkit Authors
// SPDX-License-Identifier: Apache-2.0
//
// Differentiable layers with explicit caches.  A layer exposes two forward
// paths: forward_train fills a cache for backward and may advance internal
// running statistics (batchnorm), while forward_infer is a const pure
// function of the parameters, so a frozen network can be shared across
// threads.  Inputs and outputs are [batch x features] row-major tensors;
// conv2d interprets its feature axis as [channels x height x width].

#ifndef SSLKIT_NN_LAYERS_HPP_
#define SSLKIT_NN_LAYERS_HPP_

#include <memory>
#include <string>
#include <vector>

#include "sslkit/common/rng.hpp"
#include "sslkit/nn/tensor.hpp"

namespace sslkit::nn {

// A named view of one parameter tensor and its gradient accumulator.
struct ParamRef {
  std::string name;
  Tensor* value = nullptr;
  Tensor* grad = nullptr;
};

// Named non-trainable state (batchnorm running statistics); serialized with
// checkpoints but never touched by the optimizer.
struct BufferRef {
  std::string name;
  Tensor* value = nullptr;
};

// Per-call scratch written by forward_train and consumed by backward.
struct LayerCache {
  Tensor input;
  Tensor aux;
  Tensor aux2;
};

class Layer {
 public:
  virtual ~Layer() = default;

  virtual const char* kind() const = 0;

  // Training-mode forward.
  virtual Tensor forward_train(const Tensor& in, LayerCache* cache) = 0;

  // Inference-mode forward (pure).
  virtual Tensor forward_infer(const Tensor& in) const = 0;

  // Maps d(loss)/d(output) to d(loss)/d(input), accumulating parameter
  // gradients along the way.
  virtual Tensor backward(const LayerCache& cache, const Tensor& grad_out) = 0;

  virtual void params(const std::string& prefix, std::vector<ParamRef>* out) {
    (void)prefix;
    (void)out;
  }
  virtual void buffers(const std::string& prefix, std::vector<BufferRef>* out) {
    (void)prefix;
    (void)out;
  }
};

// y = x W + b with W [in x out].
class DenseLayer : public Layer {
 public:
  // He-style uniform fan-in init for ReLU interiors; pass glorot=true for the
  // sigmoid output layer.
  DenseLayer(int in_dim, int out_dim, Rng* rng, bool glorot = false);

  const char* kind() const override { return "dense"; }
  Tensor forward_train(const Tensor& in, LayerCache* cache) override;
  Tensor forward_infer(const Tensor& in) const override;
  Tensor backward(const LayerCache& cache, const Tensor& grad_out) override;
  void params(const std::string& prefix, std::vector<ParamRef>* out) override;

  int in_dim() const { return in_dim_; }
  int out_dim() const { return out_dim_; }

 private:
  Tensor run(const Tensor& in) const;

  int in_dim_;
  int out_dim_;
  Tensor weight_, bias_;
  Tensor grad_weight_, grad_bias_;
};

// 3x3 stride-2 convolution with TensorFlow-style SAME padding over
// [channels x height x width] inputs; implemented via im2col + matmul.
class Conv2dLayer : public Layer {
 public:
  Conv2dLayer(int in_channels, int out_channels, int in_h, int in_w,
              int kernel, int stride, Rng* rng);

  const char* kind() const override { return "conv2d"; }
  Tensor forward_train(const Tensor& in, LayerCache* cache) override;
  Tensor forward_infer(const Tensor& in) const override;
  Tensor backward(const LayerCache& cache, const Tensor& grad_out) override;
  void params(const std::string& prefix, std::vector<ParamRef>* out) override;

  int out_h() const { return out_h_; }
  int out_w() const { return out_w_; }
  int out_channels() const { return out_channels_; }
  int out_size() const { return out_channels_ * out_h_ * out_w_; }

 private:
  Tensor run(const Tensor& in) const;
  void im2col(const double* src, double* col) const;

  int in_channels_, out_channels_;
  int in_h_, in_w_;
  int kernel_, stride_;
  int out_h_, out_w_;
  int pad_top_, pad_left_;
  Tensor weight_;  // [out_channels x in_channels*k*k]
  Tensor bias_;    // [out_channels]
  Tensor grad_weight_, grad_bias_;
};

// Per-feature batch normalization with learnable scale/shift.  Training mode
// normalizes by batch statistics (biased variance) and advances running
// statistics; inference normalizes by the running statistics.  For feature
// maps, pass spatial > 1: inputs are [batch x features*spatial] with each
// feature occupying a contiguous block, and statistics pool over batch and
// spatial positions (per-channel normalization).
class BatchNormLayer : public Layer {
 public:
  explicit BatchNormLayer(int features, int spatial = 1, double momentum = 0.9,
                          double eps = 1e-5);

  const char* kind() const override { return "batchnorm"; }
  Tensor forward_train(const Tensor& in, LayerCache* cache) override;
  Tensor forward_infer(const Tensor& in) const override;
  Tensor backward(const LayerCache& cache, const Tensor& grad_out) override;
  void params(const std::string& prefix, std::vector<ParamRef>* out) override;
  void buffers(const std::string& prefix, std::vector<BufferRef>* out) override;

 private:
  int features_;
  int spatial_;
  double momentum_, eps_;
  Tensor gamma_, beta_;
  Tensor grad_gamma_, grad_beta_;
  Tensor running_mean_, running_var_;
};

class ReluLayer : public Layer {
 public:
  const char* kind() const override { return "relu"; }
  Tensor forward_train(const Tensor& in, LayerCache* cache) override;
  Tensor forward_infer(const Tensor& in) const override;
  Tensor backward(const LayerCache& cache, const Tensor& grad_out) override;
};

class SigmoidLayer : public Layer {
 public:
  const char* kind() const override { return "sigmoid"; }
  Tensor forward_train(const Tensor& in, LayerCache* cache) override;
  Tensor forward_infer(const Tensor& in) const override;
  Tensor backward(const LayerCache& cache, const Tensor& grad_out) override;
};

}  // namespace sslkit::nn

#endif  // SSLKIT_NN_LAYERS_HPP_
