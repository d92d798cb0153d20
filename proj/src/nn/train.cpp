// Copyright 2026 The sslkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sslkit/nn/train.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "sslkit/common/errors.hpp"
#include "sslkit/common/rng.hpp"

namespace sslkit::nn {

namespace {

void check_dataset(const Tensor& inputs, const Tensor& targets, int input_dim,
                   int output_dim) {
  if (inputs.rank() != 2 || targets.rank() != 2) {
    throw ContractError("training tensors must be [N x D]");
  }
  if (inputs.dim(0) == 0) throw ContractError("training dataset is empty");
  if (inputs.dim(0) != targets.dim(0)) {
    throw ContractError("input/target sample counts differ");
  }
  if (inputs.dim(1) != input_dim || targets.dim(1) != output_dim) {
    throw ContractError("dataset dimensions do not match the network");
  }
}

Tensor gather_rows(const Tensor& src, const std::vector<int>& order, int begin,
                   int end) {
  const int width = src.dim(1);
  Tensor out({end - begin, width});
  for (int r = begin; r < end; ++r) {
    const double* s = src.ptr() + static_cast<long>(order[r]) * width;
    std::copy(s, s + width, out.ptr() + static_cast<long>(r - begin) * width);
  }
  return out;
}

struct TrainHooks {
  std::function<std::unique_ptr<Tape>(const Tensor&, Tensor*)> forward;
  std::function<void(const Tape&, const Tensor&)> backward;
  std::function<std::vector<ParamRef>()> params;
};

// One shuffled pass per epoch; returns the sample-weighted mean batch loss.
std::vector<double> run_epochs(const TrainHooks& hooks, const Tensor& inputs,
                               const Tensor& targets, int batch_size,
                               int epochs, Adam* adam, Rng* rng) {
  const int n = inputs.dim(0);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> losses;
  losses.reserve(static_cast<size_t>(epochs));

  // Each epoch's shuffle comes from a fork keyed by the epoch's global
  // index, recovered from the optimizer's step count.  A resumed run with
  // the same data and batch size therefore sees exactly the batch sequence
  // the interrupted run would have continued with.
  const long batches_per_epoch = (n + batch_size - 1) / batch_size;
  const long first_epoch = adam->step_count() / batches_per_epoch;

  for (int epoch = 0; epoch < epochs; ++epoch) {
    // Re-shuffle from the identity so the epoch's batch order is a pure
    // function of its global index, not of the epochs that ran before it
    // in this process.
    std::iota(order.begin(), order.end(), 0);
    Rng order_rng = rng->fork(static_cast<uint64_t>(first_epoch + epoch));
    for (int i = n - 1; i > 0; --i) {
      const int j = static_cast<int>(order_rng.uniform_int(0, i));
      std::swap(order[i], order[j]);
    }
    double loss_sum = 0.0;
    for (int begin = 0; begin < n; begin += batch_size) {
      const int end = std::min(begin + batch_size, n);
      const Tensor batch_in = gather_rows(inputs, order, begin, end);
      const Tensor batch_tgt = gather_rows(targets, order, begin, end);

      for (ParamRef& p : hooks.params()) p.grad->fill(0.0);
      Tensor pred;
      const std::unique_ptr<Tape> tape = hooks.forward(batch_in, &pred);
      Tensor grad;
      const double loss = mse_loss(pred, batch_tgt, &grad);
      hooks.backward(*tape, grad);
      adam->step(hooks.params());
      loss_sum += loss * (end - begin);
    }
    losses.push_back(loss_sum / n);
  }
  return losses;
}

TrainHooks full_network_hooks(Network* net) {
  return TrainHooks{
      [net](const Tensor& in, Tensor* out) { return net->forward_train(in, out); },
      [net](const Tape& tape, const Tensor& g) { net->backward(tape, g); },
      [net]() { return net->params(); },
  };
}

}  // namespace

double mse_loss(const Tensor& pred, const Tensor& target, Tensor* grad) {
  if (!pred.same_shape(target)) {
    throw ContractError("prediction/target shape mismatch in MSE");
  }
  const long n = pred.size();
  if (grad != nullptr) *grad = Tensor(pred.shape);
  double sum = 0.0;
  for (long i = 0; i < n; ++i) {
    const double d = pred.data[i] - target.data[i];
    sum += d * d;
    if (grad != nullptr) grad->data[i] = 2.0 * d / n;
  }
  return sum / n;
}

TrainResult train(Network& net, const Tensor& inputs, const Tensor& targets,
                  const TrainConfig& config, Adam* optimizer) {
  check_dataset(inputs, targets, net.input_dim(), net.output_dim());
  if (config.batch_size < 1) throw ConfigError("batch_size must be >= 1");
  Adam local(config.adam);
  Adam* adam = optimizer != nullptr ? optimizer : &local;
  Rng rng(config.seed);
  TrainResult result;
  result.epoch_loss =
      run_epochs(full_network_hooks(&net), inputs, targets, config.batch_size,
                 config.epochs, adam, &rng);
  return result;
}

TrainResult train_two_stage(Network& net, const Tensor& inputs,
                            const Tensor& targets, const TrainConfig& config) {
  auto* tsnn = dynamic_cast<TsnnNetwork*>(&net);
  if (tsnn == nullptr) {
    throw ContractError("two-step training applies to the TSNN only");
  }
  check_dataset(inputs, targets, net.input_dim(), net.output_dim());
  if (config.batch_size < 1) throw ConfigError("batch_size must be >= 1");

  // Phase RNGs are forked from one master stream so the ablation run
  // (skip_phase1) sees exactly the same phase-2 shuffles.
  Rng master(config.seed);
  Rng phase1_rng = master.fork(1);
  Rng phase2_rng = master.fork(2);

  TrainResult result;
  if (!config.skip_phase1) {
    // Every frequency band of every frame becomes one stage-1 sample whose
    // target is the frame's full likelihood vector.
    const TsnnConfig& tc = tsnn->config();
    const int n = inputs.dim(0);
    Tensor band_in({n * tc.bands, tc.band_input});
    Tensor band_tgt({n * tc.bands, tc.latent});
    for (int i = 0; i < n; ++i) {
      const double* src = inputs.ptr() + static_cast<long>(i) * net.input_dim();
      std::copy(src, src + static_cast<long>(tc.bands) * tc.band_input,
                band_in.ptr() + static_cast<long>(i) * tc.bands * tc.band_input);
      const double* tgt = targets.ptr() + static_cast<long>(i) * tc.latent;
      for (int f = 0; f < tc.bands; ++f) {
        std::copy(tgt, tgt + tc.latent,
                  band_tgt.ptr() +
                      (static_cast<long>(i) * tc.bands + f) * tc.latent);
      }
    }
    TrainHooks hooks{
        [tsnn](const Tensor& in, Tensor* out) {
          return tsnn->phase1_forward_train(in, out);
        },
        [tsnn](const Tape& tape, const Tensor& g) {
          tsnn->phase1_backward(tape, g);
        },
        [tsnn]() { return tsnn->phase1_params(); },
    };
    Adam adam(config.adam);
    result.phase1_loss =
        run_epochs(hooks, band_in, band_tgt, config.batch_size,
                   config.phase1_epochs, &adam, &phase1_rng);
  }

  Adam adam(config.adam);
  result.epoch_loss =
      run_epochs(full_network_hooks(&net), inputs, targets, config.batch_size,
                 config.epochs, &adam, &phase2_rng);
  return result;
}

double evaluate_mse(const Network& net, const Tensor& inputs,
                    const Tensor& targets, int batch_size) {
  check_dataset(inputs, targets, net.input_dim(), net.output_dim());
  const int n = inputs.dim(0);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  double sum = 0.0;
  for (int begin = 0; begin < n; begin += batch_size) {
    const int end = std::min(begin + batch_size, n);
    const Tensor batch_in = gather_rows(inputs, order, begin, end);
    const Tensor batch_tgt = gather_rows(targets, order, begin, end);
    const Tensor pred = net.forward(batch_in);
    sum += mse_loss(pred, batch_tgt, nullptr) * (end - begin);
  }
  return sum / n;
}

}  // namespace sslkit::nn
