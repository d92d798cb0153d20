// Copyright 2026 The sslkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sslkit/nn/layers.hpp"

#include <algorithm>
#include <cmath>

#include "sslkit/common/errors.hpp"
#include "sslkit/kernels/kernels.hpp"

namespace sslkit::nn {

namespace {

void expect_rank2(const Tensor& t, int features, const char* who) {
  if (t.rank() != 2 || t.dim(1) != features) {
    throw ContractError(std::string(who) + ": input shape mismatch");
  }
}

double uniform_limit_he(int fan_in) { return std::sqrt(6.0 / fan_in); }

double uniform_limit_glorot(int fan_in, int fan_out) {
  return std::sqrt(6.0 / (fan_in + fan_out));
}

void init_uniform(Tensor* t, double limit, Rng* rng) {
  for (double& v : t->data) v = rng->uniform(-limit, limit);
}

}  // namespace

// ---------------------------------------------------------------------------
// Dense
// ---------------------------------------------------------------------------

DenseLayer::DenseLayer(int in_dim, int out_dim, Rng* rng, bool glorot)
    : in_dim_(in_dim),
      out_dim_(out_dim),
      weight_({in_dim, out_dim}),
      bias_({out_dim}),
      grad_weight_({in_dim, out_dim}),
      grad_bias_({out_dim}) {
  const double limit = glorot ? uniform_limit_glorot(in_dim, out_dim)
                              : uniform_limit_he(in_dim);
  init_uniform(&weight_, limit, rng);
}

Tensor DenseLayer::run(const Tensor& in) const {
  expect_rank2(in, in_dim_, "dense");
  const int batch = in.dim(0);
  Tensor out({batch, out_dim_});
  kernels::active().matmul_nn(in.ptr(), weight_.ptr(), out.ptr(), batch,
                              in_dim_, out_dim_, false);
  for (int b = 0; b < batch; ++b) {
    double* row = out.ptr() + static_cast<long>(b) * out_dim_;
    for (int j = 0; j < out_dim_; ++j) row[j] += bias_.data[j];
  }
  return out;
}

Tensor DenseLayer::forward_train(const Tensor& in, LayerCache* cache) {
  cache->input = in;
  return run(in);
}

Tensor DenseLayer::forward_infer(const Tensor& in) const { return run(in); }

Tensor DenseLayer::backward(const LayerCache& cache, const Tensor& grad_out) {
  const Tensor& in = cache.input;
  const int batch = in.dim(0);
  // dW += X^T G, db += column sums of G, dX = G W^T.
  kernels::active().matmul_tn(in.ptr(), grad_out.ptr(), grad_weight_.ptr(),
                              in_dim_, batch, out_dim_, true);
  for (int b = 0; b < batch; ++b) {
    const double* row = grad_out.ptr() + static_cast<long>(b) * out_dim_;
    for (int j = 0; j < out_dim_; ++j) grad_bias_.data[j] += row[j];
  }
  Tensor grad_in({batch, in_dim_});
  kernels::active().matmul_nt(grad_out.ptr(), weight_.ptr(), grad_in.ptr(),
                              batch, out_dim_, in_dim_, false);
  return grad_in;
}

void DenseLayer::params(const std::string& prefix, std::vector<ParamRef>* out) {
  out->push_back({prefix + ".weight", &weight_, &grad_weight_});
  out->push_back({prefix + ".bias", &bias_, &grad_bias_});
}

// ---------------------------------------------------------------------------
// Conv2d
// ---------------------------------------------------------------------------

Conv2dLayer::Conv2dLayer(int in_channels, int out_channels, int in_h, int in_w,
                         int kernel, int stride, Rng* rng)
    : in_channels_(in_channels),
      out_channels_(out_channels),
      in_h_(in_h),
      in_w_(in_w),
      kernel_(kernel),
      stride_(stride),
      out_h_((in_h + stride - 1) / stride),
      out_w_((in_w + stride - 1) / stride),
      weight_({out_channels, in_channels * kernel * kernel}),
      bias_({out_channels}),
      grad_weight_({out_channels, in_channels * kernel * kernel}),
      grad_bias_({out_channels}) {
  // SAME padding: total = max((out-1)*stride + kernel - in, 0), extra pixel
  // goes to the bottom/right.
  const int pad_h =
      std::max((out_h_ - 1) * stride_ + kernel_ - in_h_, 0);
  const int pad_w =
      std::max((out_w_ - 1) * stride_ + kernel_ - in_w_, 0);
  pad_top_ = pad_h / 2;
  pad_left_ = pad_w / 2;
  init_uniform(&weight_, uniform_limit_he(in_channels * kernel * kernel), rng);
}

void Conv2dLayer::im2col(const double* src, double* col) const {
  const int k2 = kernel_ * kernel_;
  const int ohw = out_h_ * out_w_;
  for (int c = 0; c < in_channels_; ++c) {
    const double* plane = src + static_cast<long>(c) * in_h_ * in_w_;
    for (int ky = 0; ky < kernel_; ++ky) {
      for (int kx = 0; kx < kernel_; ++kx) {
        double* row = col + (static_cast<long>(c) * k2 + ky * kernel_ + kx) * ohw;
        for (int oy = 0; oy < out_h_; ++oy) {
          const int iy = oy * stride_ + ky - pad_top_;
          for (int ox = 0; ox < out_w_; ++ox) {
            const int ix = ox * stride_ + kx - pad_left_;
            row[oy * out_w_ + ox] =
                (iy >= 0 && iy < in_h_ && ix >= 0 && ix < in_w_)
                    ? plane[iy * in_w_ + ix]
                    : 0.0;
          }
        }
      }
    }
  }
}

Tensor Conv2dLayer::run(const Tensor& in) const {
  const int in_size = in_channels_ * in_h_ * in_w_;
  expect_rank2(in, in_size, "conv2d");
  const int batch = in.dim(0);
  const int ck2 = in_channels_ * kernel_ * kernel_;
  const int ohw = out_h_ * out_w_;
  Tensor out({batch, out_channels_ * ohw});
  std::vector<double> col(static_cast<long>(ck2) * ohw);
  for (int b = 0; b < batch; ++b) {
    im2col(in.ptr() + static_cast<long>(b) * in_size, col.data());
    double* dst = out.ptr() + static_cast<long>(b) * out_channels_ * ohw;
    kernels::active().matmul_nn(weight_.ptr(), col.data(), dst, out_channels_,
                                ck2, ohw, false);
    for (int c = 0; c < out_channels_; ++c) {
      const double bv = bias_.data[c];
      double* row = dst + static_cast<long>(c) * ohw;
      for (int i = 0; i < ohw; ++i) row[i] += bv;
    }
  }
  return out;
}

Tensor Conv2dLayer::forward_train(const Tensor& in, LayerCache* cache) {
  cache->input = in;
  return run(in);
}

Tensor Conv2dLayer::forward_infer(const Tensor& in) const { return run(in); }

Tensor Conv2dLayer::backward(const LayerCache& cache, const Tensor& grad_out) {
  const Tensor& in = cache.input;
  const int batch = in.dim(0);
  const int in_size = in_channels_ * in_h_ * in_w_;
  const int ck2 = in_channels_ * kernel_ * kernel_;
  const int ohw = out_h_ * out_w_;
  const int k2 = kernel_ * kernel_;

  Tensor grad_in({batch, in_size});
  std::vector<double> col(static_cast<long>(ck2) * ohw);
  std::vector<double> gcol(static_cast<long>(ck2) * ohw);
  for (int b = 0; b < batch; ++b) {
    // The column matrix is recomputed rather than cached: it is the largest
    // intermediate and rebuilding it costs less than holding one per sample.
    im2col(in.ptr() + static_cast<long>(b) * in_size, col.data());
    const double* g = grad_out.ptr() + static_cast<long>(b) * out_channels_ * ohw;
    kernels::active().matmul_nt(g, col.data(), grad_weight_.ptr(),
                                out_channels_, ohw, ck2, true);
    for (int c = 0; c < out_channels_; ++c) {
      const double* row = g + static_cast<long>(c) * ohw;
      double sum = 0.0;
      for (int i = 0; i < ohw; ++i) sum += row[i];
      grad_bias_.data[c] += sum;
    }
    kernels::active().matmul_tn(weight_.ptr(), g, gcol.data(), ck2,
                                out_channels_, ohw, false);
    // col2im: scatter-add column gradients back onto the input plane.
    double* gin = grad_in.ptr() + static_cast<long>(b) * in_size;
    for (int c = 0; c < in_channels_; ++c) {
      double* plane = gin + static_cast<long>(c) * in_h_ * in_w_;
      for (int ky = 0; ky < kernel_; ++ky) {
        for (int kx = 0; kx < kernel_; ++kx) {
          const double* row =
              gcol.data() + (static_cast<long>(c) * k2 + ky * kernel_ + kx) * ohw;
          for (int oy = 0; oy < out_h_; ++oy) {
            const int iy = oy * stride_ + ky - pad_top_;
            if (iy < 0 || iy >= in_h_) continue;
            for (int ox = 0; ox < out_w_; ++ox) {
              const int ix = ox * stride_ + kx - pad_left_;
              if (ix < 0 || ix >= in_w_) continue;
              plane[iy * in_w_ + ix] += row[oy * out_w_ + ox];
            }
          }
        }
      }
    }
  }
  return grad_in;
}

void Conv2dLayer::params(const std::string& prefix,
                         std::vector<ParamRef>* out) {
  out->push_back({prefix + ".weight", &weight_, &grad_weight_});
  out->push_back({prefix + ".bias", &bias_, &grad_bias_});
}

// ---------------------------------------------------------------------------
// BatchNorm
// ---------------------------------------------------------------------------

BatchNormLayer::BatchNormLayer(int features, int spatial, double momentum,
                               double eps)
    : features_(features),
      spatial_(spatial),
      momentum_(momentum),
      eps_(eps),
      gamma_({features}),
      beta_({features}),
      grad_gamma_({features}),
      grad_beta_({features}),
      running_mean_({features}),
      running_var_({features}) {
  gamma_.fill(1.0);
  running_var_.fill(1.0);
}

Tensor BatchNormLayer::forward_train(const Tensor& in, LayerCache* cache) {
  expect_rank2(in, features_ * spatial_, "batchnorm");
  const int batch = in.dim(0);
  const long count = static_cast<long>(batch) * spatial_;

  Tensor mean({features_}), var({features_});
  for (int b = 0; b < batch; ++b) {
    const double* row = in.ptr() + static_cast<long>(b) * features_ * spatial_;
    for (int c = 0; c < features_; ++c) {
      const double* blk = row + static_cast<long>(c) * spatial_;
      double s = 0.0;
      for (int i = 0; i < spatial_; ++i) s += blk[i];
      mean.data[c] += s;
    }
  }
  for (int c = 0; c < features_; ++c) mean.data[c] /= count;
  for (int b = 0; b < batch; ++b) {
    const double* row = in.ptr() + static_cast<long>(b) * features_ * spatial_;
    for (int c = 0; c < features_; ++c) {
      const double* blk = row + static_cast<long>(c) * spatial_;
      double s = 0.0;
      for (int i = 0; i < spatial_; ++i) {
        const double d = blk[i] - mean.data[c];
        s += d * d;
      }
      var.data[c] += s;
    }
  }
  for (int c = 0; c < features_; ++c) var.data[c] /= count;  // biased

  Tensor inv_std({features_});
  for (int c = 0; c < features_; ++c) {
    inv_std.data[c] = 1.0 / std::sqrt(var.data[c] + eps_);
  }

  Tensor xhat({batch, features_ * spatial_});
  Tensor out({batch, features_ * spatial_});
  for (int b = 0; b < batch; ++b) {
    const long off = static_cast<long>(b) * features_ * spatial_;
    for (int c = 0; c < features_; ++c) {
      const double m = mean.data[c];
      const double inv = inv_std.data[c];
      const double g = gamma_.data[c];
      const double be = beta_.data[c];
      const long coff = off + static_cast<long>(c) * spatial_;
      for (int i = 0; i < spatial_; ++i) {
        const double xh = (in.data[coff + i] - m) * inv;
        xhat.data[coff + i] = xh;
        out.data[coff + i] = g * xh + be;
      }
    }
  }

  for (int c = 0; c < features_; ++c) {
    running_mean_.data[c] =
        momentum_ * running_mean_.data[c] + (1.0 - momentum_) * mean.data[c];
    running_var_.data[c] =
        momentum_ * running_var_.data[c] + (1.0 - momentum_) * var.data[c];
  }

  cache->aux = std::move(xhat);
  cache->aux2 = std::move(inv_std);
  return out;
}

Tensor BatchNormLayer::forward_infer(const Tensor& in) const {
  expect_rank2(in, features_ * spatial_, "batchnorm");
  const int batch = in.dim(0);
  Tensor out({batch, features_ * spatial_});
  for (int b = 0; b < batch; ++b) {
    const long off = static_cast<long>(b) * features_ * spatial_;
    for (int c = 0; c < features_; ++c) {
      const double inv = 1.0 / std::sqrt(running_var_.data[c] + eps_);
      const double m = running_mean_.data[c];
      const double g = gamma_.data[c];
      const double be = beta_.data[c];
      const long coff = off + static_cast<long>(c) * spatial_;
      for (int i = 0; i < spatial_; ++i) {
        out.data[coff + i] = g * (in.data[coff + i] - m) * inv + be;
      }
    }
  }
  return out;
}

Tensor BatchNormLayer::backward(const LayerCache& cache,
                                const Tensor& grad_out) {
  const Tensor& xhat = cache.aux;
  const Tensor& inv_std = cache.aux2;
  const int batch = grad_out.dim(0);
  const long count = static_cast<long>(batch) * spatial_;

  Tensor sum_g({features_}), sum_gx({features_});
  for (int b = 0; b < batch; ++b) {
    const long off = static_cast<long>(b) * features_ * spatial_;
    for (int c = 0; c < features_; ++c) {
      const long coff = off + static_cast<long>(c) * spatial_;
      double sg = 0.0, sgx = 0.0;
      for (int i = 0; i < spatial_; ++i) {
        sg += grad_out.data[coff + i];
        sgx += grad_out.data[coff + i] * xhat.data[coff + i];
      }
      sum_g.data[c] += sg;
      sum_gx.data[c] += sgx;
    }
  }
  for (int c = 0; c < features_; ++c) {
    grad_gamma_.data[c] += sum_gx.data[c];
    grad_beta_.data[c] += sum_g.data[c];
  }

  Tensor grad_in({batch, features_ * spatial_});
  for (int b = 0; b < batch; ++b) {
    const long off = static_cast<long>(b) * features_ * spatial_;
    for (int c = 0; c < features_; ++c) {
      const double scale = gamma_.data[c] * inv_std.data[c] / count;
      const long coff = off + static_cast<long>(c) * spatial_;
      for (int i = 0; i < spatial_; ++i) {
        grad_in.data[coff + i] =
            scale * (count * grad_out.data[coff + i] - sum_g.data[c] -
                     xhat.data[coff + i] * sum_gx.data[c]);
      }
    }
  }
  return grad_in;
}

void BatchNormLayer::params(const std::string& prefix,
                            std::vector<ParamRef>* out) {
  out->push_back({prefix + ".gamma", &gamma_, &grad_gamma_});
  out->push_back({prefix + ".beta", &beta_, &grad_beta_});
}

void BatchNormLayer::buffers(const std::string& prefix,
                             std::vector<BufferRef>* out) {
  out->push_back({prefix + ".running_mean", &running_mean_});
  out->push_back({prefix + ".running_var", &running_var_});
}

// ---------------------------------------------------------------------------
// Activations
// ---------------------------------------------------------------------------

Tensor ReluLayer::forward_train(const Tensor& in, LayerCache* cache) {
  cache->input = in;
  return forward_infer(in);
}

Tensor ReluLayer::forward_infer(const Tensor& in) const {
  Tensor out = in;
  for (double& v : out.data) v = v > 0.0 ? v : 0.0;
  return out;
}

Tensor ReluLayer::backward(const LayerCache& cache, const Tensor& grad_out) {
  Tensor grad_in = grad_out;
  for (size_t i = 0; i < grad_in.data.size(); ++i) {
    if (cache.input.data[i] <= 0.0) grad_in.data[i] = 0.0;
  }
  return grad_in;
}

Tensor SigmoidLayer::forward_train(const Tensor& in, LayerCache* cache) {
  Tensor out = forward_infer(in);
  cache->aux = out;
  return out;
}

Tensor SigmoidLayer::forward_infer(const Tensor& in) const {
  Tensor out = in;
  for (double& v : out.data) v = 1.0 / (1.0 + std::exp(-v));
  return out;
}

Tensor SigmoidLayer::backward(const LayerCache& cache, const Tensor& grad_out) {
  Tensor grad_in = grad_out;
  for (size_t i = 0; i < grad_in.data.size(); ++i) {
    const double s = cache.aux.data[i];
    grad_in.data[i] *= s * (1.0 - s);
  }
  return grad_in;
}

}  // namespace sslkit::nn
