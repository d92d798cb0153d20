// Copyright 2026 The sslkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sslkit/nn/architectures.hpp"

#include <utility>

#include "sslkit/common/errors.hpp"

namespace sslkit::nn {

namespace {

struct SeqTape : Tape {
  std::vector<LayerCache> caches;
};

struct TsnnTape : Tape {
  int batch = 0;
  std::vector<LayerCache> s1;
  std::vector<LayerCache> s2;
};

struct TsnnPhase1Tape : Tape {
  std::vector<LayerCache> s1;
  LayerCache head;
};

std::vector<int> parse_int_list(const nlohmann::json& j, const char* key,
                                std::vector<int> fallback) {
  if (!j.contains(key)) return fallback;
  return j.at(key).get<std::vector<int>>();
}

}  // namespace

std::string network_kind_name(NetworkKind kind) {
  switch (kind) {
    case NetworkKind::kMlpGcc:
      return "mlp-gcc";
    case NetworkKind::kCnnGccfb:
      return "cnn-gccfb";
    case NetworkKind::kTsnnGccfb:
      return "tsnn-gccfb";
  }
  throw ContractError("unknown network kind");
}

NetworkKind network_kind_from_name(const std::string& name) {
  if (name == "mlp-gcc") return NetworkKind::kMlpGcc;
  if (name == "cnn-gccfb") return NetworkKind::kCnnGccfb;
  if (name == "tsnn-gccfb") return NetworkKind::kTsnnGccfb;
  throw ConfigError("unknown model architecture: " + name +
                    " (expected mlp-gcc, cnn-gccfb, or tsnn-gccfb)");
}

void Network::zero_grads() {
  for (ParamRef& p : params()) p.grad->fill(0.0);
}

long Network::param_count() {
  long n = 0;
  for (ParamRef& p : params()) n += p.value->size();
  return n;
}

// ---------------------------------------------------------------------------
// Sequential
// ---------------------------------------------------------------------------

Tensor Sequential::forward_train(const Tensor& in,
                                 std::vector<LayerCache>* caches) {
  caches->clear();
  caches->resize(layers_.size());
  Tensor cur = in;
  for (size_t i = 0; i < layers_.size(); ++i) {
    cur = layers_[i]->forward_train(cur, &(*caches)[i]);
    cur.check_finite("layer " + std::to_string(i) + " (" +
                     layers_[i]->kind() + ")");
  }
  return cur;
}

Tensor Sequential::forward_infer(const Tensor& in) const {
  Tensor cur = in;
  for (size_t i = 0; i < layers_.size(); ++i) {
    cur = layers_[i]->forward_infer(cur);
    cur.check_finite("layer " + std::to_string(i) + " (" +
                     layers_[i]->kind() + ")");
  }
  return cur;
}

Tensor Sequential::backward(const std::vector<LayerCache>& caches,
                            const Tensor& grad_out) {
  if (caches.size() != layers_.size()) {
    throw ContractError("layer cache count does not match the stack");
  }
  Tensor grad = grad_out;
  for (size_t i = layers_.size(); i-- > 0;) {
    grad = layers_[i]->backward(caches[i], grad);
  }
  return grad;
}

void Sequential::params(const std::string& prefix, std::vector<ParamRef>* out) {
  for (size_t i = 0; i < layers_.size(); ++i) {
    layers_[i]->params(prefix + "." + std::to_string(i) + "." +
                           layers_[i]->kind(),
                       out);
  }
}

void Sequential::buffers(const std::string& prefix,
                         std::vector<BufferRef>* out) {
  for (size_t i = 0; i < layers_.size(); ++i) {
    layers_[i]->buffers(prefix + "." + std::to_string(i) + "." +
                            layers_[i]->kind(),
                        out);
  }
}

// ---------------------------------------------------------------------------
// Configs
// ---------------------------------------------------------------------------

nlohmann::json MlpConfig::to_json() const {
  return {{"input_dim", input_dim}, {"hidden", hidden},
          {"output_dim", output_dim}};
}

MlpConfig MlpConfig::from_json(const nlohmann::json& j) {
  MlpConfig c;
  c.input_dim = j.value("input_dim", c.input_dim);
  c.hidden = parse_int_list(j, "hidden", c.hidden);
  c.output_dim = j.value("output_dim", c.output_dim);
  return c;
}

nlohmann::json CnnConfig::to_json() const {
  return {{"in_channels", in_channels}, {"height", height}, {"width", width},
          {"channels", channels},       {"kernel", kernel}, {"stride", stride},
          {"output_dim", output_dim}};
}

CnnConfig CnnConfig::from_json(const nlohmann::json& j) {
  CnnConfig c;
  c.in_channels = j.value("in_channels", c.in_channels);
  c.height = j.value("height", c.height);
  c.width = j.value("width", c.width);
  c.channels = parse_int_list(j, "channels", c.channels);
  c.kernel = j.value("kernel", c.kernel);
  c.stride = j.value("stride", c.stride);
  c.output_dim = j.value("output_dim", c.output_dim);
  return c;
}

nlohmann::json TsnnConfig::to_json() const {
  return {{"bands", bands},
          {"band_input", band_input},
          {"subnet1_hidden", subnet1_hidden},
          {"latent", latent},
          {"subnet2_hidden", subnet2_hidden},
          {"neighborhood", neighborhood},
          {"output_dim", output_dim}};
}

TsnnConfig TsnnConfig::from_json(const nlohmann::json& j) {
  TsnnConfig c;
  c.bands = j.value("bands", c.bands);
  c.band_input = j.value("band_input", c.band_input);
  c.subnet1_hidden = parse_int_list(j, "subnet1_hidden", c.subnet1_hidden);
  c.latent = j.value("latent", c.latent);
  c.subnet2_hidden = j.value("subnet2_hidden", c.subnet2_hidden);
  c.neighborhood = j.value("neighborhood", c.neighborhood);
  c.output_dim = j.value("output_dim", c.output_dim);
  return c;
}

// ---------------------------------------------------------------------------
// SequentialNetwork
// ---------------------------------------------------------------------------

SequentialNetwork::SequentialNetwork(NetworkKind kind, uint64_t seed,
                                     int input_dim, int output_dim,
                                     nlohmann::json hyper)
    : Network(kind, seed),
      input_dim_(input_dim),
      output_dim_(output_dim),
      hyper_(std::move(hyper)) {}

Tensor SequentialNetwork::forward(const Tensor& in) const {
  return seq_.forward_infer(in);
}

std::unique_ptr<Tape> SequentialNetwork::forward_train(const Tensor& in,
                                                       Tensor* out) {
  auto tape = std::make_unique<SeqTape>();
  *out = seq_.forward_train(in, &tape->caches);
  return tape;
}

void SequentialNetwork::backward(const Tape& tape, const Tensor& grad_out) {
  const auto& t = dynamic_cast<const SeqTape&>(tape);
  seq_.backward(t.caches, grad_out);
}

std::vector<ParamRef> SequentialNetwork::params() {
  std::vector<ParamRef> out;
  seq_.params("net", &out);
  return out;
}

std::vector<BufferRef> SequentialNetwork::buffers() {
  std::vector<BufferRef> out;
  seq_.buffers("net", &out);
  return out;
}

// ---------------------------------------------------------------------------
// TsnnNetwork
// ---------------------------------------------------------------------------

TsnnNetwork::TsnnNetwork(const TsnnConfig& config, uint64_t seed)
    : Network(NetworkKind::kTsnnGccfb, seed), config_(config) {
  if (config_.latent != config_.output_dim) {
    throw ConfigError(
        "TSNN latent size must equal the output grid size (DOA-aligned "
        "latents)");
  }
  if (config_.taps() > config_.latent) {
    throw ConfigError("TSNN neighborhood exceeds the latent grid");
  }
  Rng rng(seed);

  int prev = config_.band_input;
  for (int h : config_.subnet1_hidden) {
    subnet1_.add(std::make_unique<DenseLayer>(prev, h, &rng));
    subnet1_.add(std::make_unique<ReluLayer>());
    prev = h;
  }
  subnet1_.add(std::make_unique<DenseLayer>(prev, config_.latent, &rng,
                                            /*glorot=*/true));

  const int stage2_in = config_.bands * config_.taps();
  subnet2_.add(
      std::make_unique<DenseLayer>(stage2_in, config_.subnet2_hidden, &rng));
  subnet2_.add(std::make_unique<ReluLayer>());
  subnet2_.add(std::make_unique<DenseLayer>(config_.subnet2_hidden, 1, &rng,
                                            /*glorot=*/true));
  subnet2_.add(std::make_unique<SigmoidLayer>());

  const int g = config_.output_dim;
  const int taps = config_.taps();
  gather_.resize(static_cast<size_t>(g) * taps);
  for (int i = 0; i < g; ++i) {
    for (int t = 0; t < taps; ++t) {
      gather_[static_cast<size_t>(i) * taps + t] =
          ((i - config_.neighborhood + t) % g + g) % g;
    }
  }
}

Tensor TsnnNetwork::stage2_input(const Tensor& latents, int batch) const {
  const int f = config_.bands;
  const int g = config_.output_dim;
  const int l = config_.latent;
  const int taps = config_.taps();
  Tensor out({batch * g, f * taps});
  for (int b = 0; b < batch; ++b) {
    for (int i = 0; i < g; ++i) {
      double* row = out.ptr() + (static_cast<long>(b) * g + i) * f * taps;
      const int* idx = gather_.data() + static_cast<long>(i) * taps;
      for (int band = 0; band < f; ++band) {
        const double* lrow =
            latents.ptr() + (static_cast<long>(b) * f + band) * l;
        double* dst = row + static_cast<long>(band) * taps;
        for (int t = 0; t < taps; ++t) dst[t] = lrow[idx[t]];
      }
    }
  }
  return out;
}

Tensor TsnnNetwork::forward(const Tensor& in) const {
  if (in.rank() != 2 || in.dim(1) != input_dim()) {
    throw ContractError("TSNN input shape mismatch");
  }
  const int batch = in.dim(0);
  Tensor bands;
  bands.shape = {batch * config_.bands, config_.band_input};
  bands.data = in.data;
  const Tensor latents = subnet1_.forward_infer(bands);
  const Tensor s2in = stage2_input(latents, batch);
  Tensor out2 = subnet2_.forward_infer(s2in);
  Tensor out;
  out.shape = {batch, config_.output_dim};
  out.data = std::move(out2.data);
  return out;
}

std::unique_ptr<Tape> TsnnNetwork::forward_train(const Tensor& in,
                                                 Tensor* out) {
  if (in.rank() != 2 || in.dim(1) != input_dim()) {
    throw ContractError("TSNN input shape mismatch");
  }
  const int batch = in.dim(0);
  auto tape = std::make_unique<TsnnTape>();
  tape->batch = batch;

  Tensor bands;
  bands.shape = {batch * config_.bands, config_.band_input};
  bands.data = in.data;
  const Tensor latents = subnet1_.forward_train(bands, &tape->s1);
  const Tensor s2in = stage2_input(latents, batch);
  Tensor out2 = subnet2_.forward_train(s2in, &tape->s2);

  out->shape = {batch, config_.output_dim};
  out->data = std::move(out2.data);
  return tape;
}

void TsnnNetwork::backward(const Tape& tape, const Tensor& grad_out) {
  const auto& t = dynamic_cast<const TsnnTape&>(tape);
  const int batch = t.batch;
  const int f = config_.bands;
  const int g = config_.output_dim;
  const int l = config_.latent;
  const int taps = config_.taps();

  Tensor g2;
  g2.shape = {batch * g, 1};
  g2.data = grad_out.data;
  const Tensor g_s2in = subnet2_.backward(t.s2, g2);

  // Scatter the stage-2 input gradient back onto the band latents.
  Tensor g_lat({batch * f, l});
  for (int b = 0; b < batch; ++b) {
    for (int i = 0; i < g; ++i) {
      const double* row =
          g_s2in.ptr() + (static_cast<long>(b) * g + i) * f * taps;
      const int* idx = gather_.data() + static_cast<long>(i) * taps;
      for (int band = 0; band < f; ++band) {
        double* lrow = g_lat.ptr() + (static_cast<long>(b) * f + band) * l;
        const double* src = row + static_cast<long>(band) * taps;
        for (int tp = 0; tp < taps; ++tp) lrow[idx[tp]] += src[tp];
      }
    }
  }
  subnet1_.backward(t.s1, g_lat);
}

std::vector<ParamRef> TsnnNetwork::params() {
  std::vector<ParamRef> out;
  subnet1_.params("s1", &out);
  subnet2_.params("s2", &out);
  return out;
}

std::vector<BufferRef> TsnnNetwork::buffers() {
  std::vector<BufferRef> out;
  subnet1_.buffers("s1", &out);
  subnet2_.buffers("s2", &out);
  return out;
}

nlohmann::json TsnnNetwork::hyper_json() const { return config_.to_json(); }

Tensor TsnnNetwork::phase1_forward(const Tensor& bands) const {
  return head_.forward_infer(subnet1_.forward_infer(bands));
}

std::unique_ptr<Tape> TsnnNetwork::phase1_forward_train(const Tensor& bands,
                                                        Tensor* out) {
  auto tape = std::make_unique<TsnnPhase1Tape>();
  const Tensor latents = subnet1_.forward_train(bands, &tape->s1);
  *out = head_.forward_train(latents, &tape->head);
  return tape;
}

void TsnnNetwork::phase1_backward(const Tape& tape, const Tensor& grad_out) {
  const auto& t = dynamic_cast<const TsnnPhase1Tape&>(tape);
  const Tensor g_lat = head_.backward(t.head, grad_out);
  subnet1_.backward(t.s1, g_lat);
}

std::vector<ParamRef> TsnnNetwork::phase1_params() {
  std::vector<ParamRef> out;
  subnet1_.params("s1", &out);
  return out;
}

// ---------------------------------------------------------------------------
// Builders
// ---------------------------------------------------------------------------

std::unique_ptr<Network> build_mlp_gcc(const MlpConfig& config, uint64_t seed) {
  auto net = std::make_unique<SequentialNetwork>(
      NetworkKind::kMlpGcc, seed, config.input_dim, config.output_dim,
      config.to_json());
  Rng rng(seed);
  int prev = config.input_dim;
  for (int h : config.hidden) {
    net->stack().add(std::make_unique<DenseLayer>(prev, h, &rng));
    net->stack().add(std::make_unique<ReluLayer>());
    net->stack().add(std::make_unique<BatchNormLayer>(h));
    prev = h;
  }
  net->stack().add(std::make_unique<DenseLayer>(prev, config.output_dim, &rng,
                                                /*glorot=*/true));
  net->stack().add(std::make_unique<SigmoidLayer>());
  return net;
}

std::unique_ptr<Network> build_cnn_gccfb(const CnnConfig& config,
                                         uint64_t seed) {
  auto net = std::make_unique<SequentialNetwork>(
      NetworkKind::kCnnGccfb, seed,
      config.in_channels * config.height * config.width, config.output_dim,
      config.to_json());
  Rng rng(seed);
  int channels = config.in_channels;
  int h = config.height;
  int w = config.width;
  for (int c : config.channels) {
    auto conv = std::make_unique<Conv2dLayer>(channels, c, h, w, config.kernel,
                                              config.stride, &rng);
    channels = c;
    h = conv->out_h();
    w = conv->out_w();
    net->stack().add(std::move(conv));
    net->stack().add(std::make_unique<ReluLayer>());
    // Per-channel statistics pooled over batch and the h*w positions.
    net->stack().add(std::make_unique<BatchNormLayer>(channels, h * w));
  }
  net->stack().add(std::make_unique<DenseLayer>(channels * h * w,
                                                config.output_dim, &rng,
                                                /*glorot=*/true));
  net->stack().add(std::make_unique<SigmoidLayer>());
  return net;
}

std::unique_ptr<Network> build_tsnn_gccfb(const TsnnConfig& config,
                                          uint64_t seed) {
  return std::make_unique<TsnnNetwork>(config, seed);
}

std::unique_ptr<Network> build_network(NetworkKind kind,
                                       const nlohmann::json& hyper,
                                       uint64_t seed) {
  switch (kind) {
    case NetworkKind::kMlpGcc:
      return build_mlp_gcc(MlpConfig::from_json(hyper), seed);
    case NetworkKind::kCnnGccfb:
      return build_cnn_gccfb(CnnConfig::from_json(hyper), seed);
    case NetworkKind::kTsnnGccfb:
      return build_tsnn_gccfb(TsnnConfig::from_json(hyper), seed);
  }
  throw ContractError("unknown network kind");
}

}  // namespace sslkit::nn
