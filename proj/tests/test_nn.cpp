// Copyright 2026 The sslkit Authors
// SPDX-License-Identifier: Apache-2.0
//
// Network training machinery: analytic gradients against central finite
// differences for every architecture (including the two-stage pretraining
// view), Adam against its closed-form first steps, determinism, and
// checkpoint round trips.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "sslkit/common/errors.hpp"
#include "sslkit/common/rng.hpp"
#include "sslkit/nn/adam.hpp"
#include "sslkit/nn/architectures.hpp"
#include "sslkit/nn/checkpoint.hpp"
#include "sslkit/nn/train.hpp"

using namespace sslkit;
using nlohmann::json;

namespace {

// Small variants of each architecture keep the finite-difference sweep fast
// while exercising every layer type (dense, conv, batchnorm, relu, sigmoid,
// and the TSNN gather).
json small_mlp() {
  return json{{"input_dim", 18}, {"hidden", {11, 7}}, {"output_dim", 24}};
}
json small_cnn() {
  return json{{"in_channels", 3}, {"height", 10},  {"width", 9},
              {"channels", {4, 6}}, {"kernel", 3}, {"stride", 2},
              {"output_dim", 24}};
}
json small_tsnn() {
  return json{{"bands", 4},          {"band_input", 12}, {"subnet1_hidden", {9, 8}},
              {"latent", 24},        {"subnet2_hidden", 7}, {"neighborhood", 2},
              {"output_dim", 24}};
}

nn::Tensor random_tensor(std::vector<int> dims, Rng* rng, double lo, double hi) {
  nn::Tensor t(std::move(dims));
  for (auto& v : t.data) v = rng->uniform(lo, hi);
  return t;
}

double train_loss(nn::Network& net, const nn::Tensor& in, const nn::Tensor& tgt) {
  nn::Tensor out;
  auto tape = net.forward_train(in, &out);
  nn::Tensor grad;
  return nn::mse_loss(out, tgt, &grad);
}

// Central finite differences on a deterministic sample of parameter entries,
// compared to the gradients produced by one backward pass.  Returns the
// worst relative error over all sampled entries.
double max_gradient_error(nn::Network& net, const nn::Tensor& in,
                          const nn::Tensor& tgt, Rng* rng) {
  net.zero_grads();
  nn::Tensor out;
  auto tape = net.forward_train(in, &out);
  nn::Tensor grad;
  nn::mse_loss(out, tgt, &grad);
  net.backward(*tape, grad);

  std::vector<std::pair<std::string, std::vector<double>>> analytic;
  for (auto& p : net.params()) {
    analytic.emplace_back(p.name, p.grad->data);
  }

  const double h = 1e-6;
  double worst = 0.0;
  auto params = net.params();
  for (size_t pi = 0; pi < params.size(); ++pi) {
    auto& p = params[pi];
    const long n = p.value->size();
    // Up to six entries per tensor: ends plus random picks.
    std::set<long> picks = {0, n - 1};
    while (static_cast<long>(picks.size()) < std::min<long>(6, n)) {
      picks.insert(rng->uniform_int(0, static_cast<int>(n - 1)));
    }
    for (long idx : picks) {
      const double orig = p.value->data[idx];
      p.value->data[idx] = orig + h;
      const double lp = train_loss(net, in, tgt);
      p.value->data[idx] = orig - h;
      const double lm = train_loss(net, in, tgt);
      p.value->data[idx] = orig;
      const double fd = (lp - lm) / (2.0 * h);
      const double an = analytic[pi].second[idx];
      const double err = std::abs(fd - an);
      if (err <= 1e-7) continue;  // both effectively zero
      worst = std::max(worst, err / std::max({std::abs(fd), std::abs(an), 1e-7}));
    }
  }
  return worst;
}

std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("mse loss and gradient formula") {
  nn::Tensor pred({2, 3});
  pred.data = {0.2, 0.8, 0.5, 0.1, 0.9, 0.4};
  nn::Tensor tgt({2, 3});
  tgt.data = {0.0, 1.0, 0.5, 0.3, 0.5, 0.4};
  nn::Tensor grad;
  const double loss = nn::mse_loss(pred, tgt, &grad);
  double want = 0.0;
  for (int i = 0; i < 6; ++i) {
    const double d = pred.data[i] - tgt.data[i];
    want += d * d / 6.0;
    CHECK(grad.data[i] == doctest::Approx(2.0 * d / 6.0).epsilon(1e-15));
  }
  CHECK(loss == doctest::Approx(want).epsilon(1e-15));

  nn::Tensor bad({2, 2});
  CHECK_THROWS_AS(nn::mse_loss(pred, bad, &grad), ContractError);
}

TEST_CASE("gradients match finite differences for every architecture") {
  struct Case {
    nn::NetworkKind kind;
    json hyper;
  };
  const Case cases[] = {
      {nn::NetworkKind::kMlpGcc, small_mlp()},
      {nn::NetworkKind::kCnnGccfb, small_cnn()},
      {nn::NetworkKind::kTsnnGccfb, small_tsnn()},
  };
  for (const auto& c : cases) {
    CAPTURE(nn::network_kind_name(c.kind));
    for (uint64_t seed : {7ULL, 8ULL, 9ULL}) {
      auto net = nn::build_network(c.kind, c.hyper, seed);
      Rng rng(seed * 1000 + 17);
      const auto in = random_tensor({4, net->input_dim()}, &rng, -1.0, 1.0);
      const auto tgt = random_tensor({4, net->output_dim()}, &rng, 0.0, 1.0);
      CHECK(max_gradient_error(*net, in, tgt, &rng) <= 1e-4);
    }
  }
}

TEST_CASE("two-stage pretraining view has correct gradients") {
  auto net = nn::build_network(nn::NetworkKind::kTsnnGccfb, small_tsnn(), 5);
  auto* tsnn = dynamic_cast<nn::TsnnNetwork*>(net.get());
  REQUIRE(tsnn != nullptr);

  Rng rng(55);
  const auto in = random_tensor({6, tsnn->config().band_input}, &rng, -1.0, 1.0);
  const auto tgt = random_tensor({6, tsnn->config().latent}, &rng, 0.0, 1.0);

  net->zero_grads();
  nn::Tensor out;
  auto tape = tsnn->phase1_forward_train(in, &out);
  nn::Tensor grad;
  nn::mse_loss(out, tgt, &grad);
  tsnn->phase1_backward(*tape, grad);

  auto params = tsnn->phase1_params();
  std::vector<std::vector<double>> analytic;
  for (auto& p : params) analytic.push_back(p.grad->data);

  const double h = 1e-6;
  for (size_t pi = 0; pi < params.size(); ++pi) {
    auto& p = params[pi];
    const long n = p.value->size();
    for (long idx : {0L, n / 2, n - 1}) {
      const double orig = p.value->data[idx];
      auto loss_at = [&](double v) {
        p.value->data[idx] = v;
        nn::Tensor o;
        auto t = tsnn->phase1_forward_train(in, &o);
        nn::Tensor g;
        return nn::mse_loss(o, tgt, &g);
      };
      const double fd = (loss_at(orig + h) - loss_at(orig - h)) / (2.0 * h);
      p.value->data[idx] = orig;
      const double an = analytic[pi][idx];
      if (std::abs(fd - an) <= 1e-7) continue;
      CHECK(std::abs(fd - an) / std::max({std::abs(fd), std::abs(an), 1e-7}) <= 1e-4);
    }
  }
}

TEST_CASE("adam matches its closed-form first two steps") {
  nn::Tensor w({2});
  w.data = {0.5, -0.3};
  nn::Tensor g({2});
  g.data = {2.0, -1.0};
  nn::ParamRef ref{"w", &w, &g};

  nn::AdamConfig config;
  config.lr = 0.1;
  nn::Adam opt(config);

  // Bias correction makes the first update lr * g / (|g| + eps) exactly.
  opt.step({ref});
  CHECK(opt.step_count() == 1);
  CHECK(w.data[0] == doctest::Approx(0.5 - 0.1 * 2.0 / (2.0 + 1e-8)).epsilon(1e-12));
  CHECK(w.data[1] == doctest::Approx(-0.3 + 0.1 * 1.0 / (1.0 + 1e-8)).epsilon(1e-12));

  // With the same gradient the corrected moments are unchanged, so the
  // second step applies the same delta.
  const double w0 = w.data[0];
  opt.step({ref});
  CHECK(opt.step_count() == 2);
  CHECK(w.data[0] == doctest::Approx(w0 - 0.1 * 2.0 / (2.0 + 1e-8)).epsilon(1e-11));
}

TEST_CASE("adam minimizes a quadratic") {
  nn::Tensor w({3});
  w.data = {2.0, -3.0, 1.5};
  nn::Tensor g({3});
  const std::vector<double> target = {0.4, 0.6, -1.0};

  nn::AdamConfig config;
  config.lr = 0.05;
  nn::Adam opt(config);
  for (int it = 0; it < 2000; ++it) {
    for (int i = 0; i < 3; ++i) g.data[i] = 2.0 * (w.data[i] - target[i]);
    opt.step({nn::ParamRef{"w", &w, &g}});
  }
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(w.data[i] - target[i]) < 1e-3);
  }
}

TEST_CASE("training overfits a tiny dataset") {
  auto net = nn::build_network(nn::NetworkKind::kMlpGcc, small_mlp(), 42);
  Rng rng(43);
  const auto in = random_tensor({8, net->input_dim()}, &rng, -1.0, 1.0);
  const auto tgt = random_tensor({8, net->output_dim()}, &rng, 0.05, 0.95);

  nn::TrainConfig config;
  config.batch_size = 8;
  config.epochs = 300;
  config.adam.lr = 3e-3;
  config.seed = 44;
  const auto result = nn::train(*net, in, tgt, config);
  REQUIRE(result.epoch_loss.size() == 300);
  CHECK(result.epoch_loss.back() < 0.05 * result.epoch_loss.front());

  // Inference mode reproduces the fit (batchnorm running stats converged).
  const nn::Tensor out = net->forward(in);
  nn::Tensor grad;
  CHECK(nn::mse_loss(out, tgt, &grad) < 0.5 * result.epoch_loss.front());
}

TEST_CASE("same seed, same network, same training run") {
  for (auto kind : {nn::NetworkKind::kMlpGcc, nn::NetworkKind::kTsnnGccfb}) {
    const json hyper = kind == nn::NetworkKind::kMlpGcc ? small_mlp() : small_tsnn();
    auto a = nn::build_network(kind, hyper, 99);
    auto b = nn::build_network(kind, hyper, 99);

    auto pa = a->params();
    auto pb = b->params();
    REQUIRE(pa.size() == pb.size());
    for (size_t i = 0; i < pa.size(); ++i) {
      CHECK(pa[i].name == pb[i].name);
      REQUIRE(pa[i].value->data == pb[i].value->data);  // bitwise
    }

    Rng rng(7);
    const auto in = random_tensor({10, a->input_dim()}, &rng, -1.0, 1.0);
    const auto tgt = random_tensor({10, a->output_dim()}, &rng, 0.0, 1.0);
    nn::TrainConfig config;
    config.batch_size = 4;
    config.epochs = 3;
    config.phase1_epochs = 2;
    config.seed = 123;
    const auto ra = nn::train(*a, in, tgt, config);
    const auto rb = nn::train(*b, in, tgt, config);
    CHECK(ra.epoch_loss == rb.epoch_loss);  // bitwise
    pa = a->params();
    pb = b->params();
    for (size_t i = 0; i < pa.size(); ++i) {
      CHECK(pa[i].value->data == pb[i].value->data);
    }

    // A different seed must actually change the initialization.
    auto c = nn::build_network(kind, hyper, 100);
    CHECK(c->params()[0].value->data != pa[0].value->data);
  }
}

TEST_CASE("mlp parameter count matches the closed form") {
  const json hyper{{"input_dim", 306}, {"hidden", {1000, 1000, 500}}, {"output_dim", 360}};
  auto net = nn::build_network(nn::NetworkKind::kMlpGcc, hyper, 1);
  long want = 0;
  want += 306L * 1000 + 1000;   // dense 1
  want += 1000L * 1000 + 1000;  // dense 2
  want += 1000L * 500 + 500;    // dense 3
  want += 500L * 360 + 360;     // output head
  want += 2L * (1000 + 1000 + 500);  // batchnorm gamma/beta
  CHECK(net->param_count() == want);
  CHECK(net->input_dim() == 306);
  CHECK(net->output_dim() == 360);
}

TEST_CASE("network outputs are sigmoid-bounded") {
  for (auto [kind, hyper] :
       std::vector<std::pair<nn::NetworkKind, json>>{
           {nn::NetworkKind::kMlpGcc, small_mlp()},
           {nn::NetworkKind::kCnnGccfb, small_cnn()},
           {nn::NetworkKind::kTsnnGccfb, small_tsnn()}}) {
    auto net = nn::build_network(kind, hyper, 3);
    Rng rng(4);
    const auto in = random_tensor({5, net->input_dim()}, &rng, -2.0, 2.0);
    const nn::Tensor out = net->forward(in);
    REQUIRE(out.shape == std::vector<int>({5, net->output_dim()}));
    for (double v : out.data) {
      CHECK(v > 0.0);
      CHECK(v < 1.0);
    }
  }
}

TEST_CASE("checkpoint round trip is bitwise") {
  auto net = nn::build_network(nn::NetworkKind::kCnnGccfb, small_cnn(), 21);
  Rng rng(22);
  const auto in = random_tensor({6, net->input_dim()}, &rng, -1.0, 1.0);
  const auto tgt = random_tensor({6, net->output_dim()}, &rng, 0.0, 1.0);
  nn::TrainConfig config;
  config.batch_size = 3;
  config.epochs = 2;
  config.seed = 23;
  nn::Adam adam(config.adam);
  nn::train(*net, in, tgt, config, &adam);
  CHECK(adam.step_count() == 4);  // 2 epochs x 2 batches

  const std::string path = temp_path("sslkit_test_ckpt.sslw");
  nn::save_weights(*net, path, &adam);

  nn::LoadedCheckpoint loaded = nn::load_checkpoint(path, config.adam);
  REQUIRE(loaded.net != nullptr);
  REQUIRE(loaded.adam != nullptr);
  CHECK(loaded.net->kind() == nn::NetworkKind::kCnnGccfb);
  CHECK(loaded.adam->step_count() == adam.step_count());

  auto pa = net->params();
  auto pb = loaded.net->params();
  REQUIRE(pa.size() == pb.size());
  for (size_t i = 0; i < pa.size(); ++i) {
    CHECK(pa[i].name == pb[i].name);
    CHECK(pa[i].value->data == pb[i].value->data);
  }
  auto ba = net->buffers();
  auto bb = loaded.net->buffers();
  REQUIRE(ba.size() == bb.size());
  for (size_t i = 0; i < ba.size(); ++i) {
    CHECK(ba[i].value->data == bb[i].value->data);
  }
  for (const auto& [name, mv] : adam.moments()) {
    REQUIRE(loaded.adam->moments().count(name) == 1);
    CHECK(loaded.adam->moments().at(name).first.data == mv.first.data);
    CHECK(loaded.adam->moments().at(name).second.data == mv.second.data);
  }

  const nn::Tensor out_a = net->forward(in);
  const nn::Tensor out_b = loaded.net->forward(in);
  CHECK(out_a.data == out_b.data);

  // Kind guard: asking for a different architecture must fail loudly.
  CHECK_THROWS_AS(nn::load_weights(path, nn::NetworkKind::kMlpGcc), ContractError);

  // Weights-only save restores no optimizer.
  nn::save_weights(*net, path);
  nn::LoadedCheckpoint bare = nn::load_checkpoint(path, config.adam);
  CHECK(bare.adam == nullptr);
  std::remove(path.c_str());
}

TEST_CASE("resumed training continues the optimizer trajectory") {
  // Train 4 epochs in one go vs 2 + checkpoint + 2 resumed: identical only
  // if the moments and step count survive the round trip.  (The batch
  // shuffle is driven by the epoch index, so both runs see the same order.)
  const json hyper = small_mlp();
  Rng rng(60);
  const auto in = random_tensor({12, 18}, &rng, -1.0, 1.0);
  const auto tgt = random_tensor({12, 24}, &rng, 0.0, 1.0);

  nn::TrainConfig four;
  four.batch_size = 6;
  four.epochs = 4;
  four.seed = 61;

  auto ref = nn::build_network(nn::NetworkKind::kMlpGcc, hyper, 62);
  nn::train(*ref, in, tgt, four);

  auto split = nn::build_network(nn::NetworkKind::kMlpGcc, hyper, 62);
  nn::TrainConfig two = four;
  two.epochs = 2;
  nn::Adam adam(two.adam);
  nn::train(*split, in, tgt, two, &adam);
  const std::string path = temp_path("sslkit_test_resume.sslw");
  nn::save_weights(*split, path, &adam);

  nn::LoadedCheckpoint loaded = nn::load_checkpoint(path, two.adam);
  REQUIRE(loaded.adam != nullptr);
  nn::train(*loaded.net, in, tgt, two, loaded.adam.get());

  auto pa = ref->params();
  auto pb = loaded.net->params();
  REQUIRE(pa.size() == pb.size());
  for (size_t i = 0; i < pa.size(); ++i) {
    CHECK(pa[i].value->data == pb[i].value->data);  // bitwise
  }
  std::remove(path.c_str());
}

TEST_CASE("two-stage training runs both phases and reports both losses") {
  auto net = nn::build_network(nn::NetworkKind::kTsnnGccfb, small_tsnn(), 71);
  Rng rng(72);
  const auto in = random_tensor({10, net->input_dim()}, &rng, -1.0, 1.0);
  const auto tgt = random_tensor({10, net->output_dim()}, &rng, 0.0, 1.0);

  nn::TrainConfig config;
  config.batch_size = 5;
  config.epochs = 3;
  config.phase1_epochs = 2;
  config.seed = 73;
  const auto result = nn::train_two_stage(*net, in, tgt, config);
  CHECK(result.phase1_loss.size() == 2);
  CHECK(result.epoch_loss.size() == 3);
  for (double l : result.phase1_loss) CHECK(l >= 0.0);

  // skip_phase1 collapses to plain end-to-end training.
  auto plain = nn::build_network(nn::NetworkKind::kTsnnGccfb, small_tsnn(), 71);
  nn::TrainConfig skip = config;
  skip.skip_phase1 = true;
  const auto r2 = nn::train_two_stage(*plain, in, tgt, skip);
  CHECK(r2.phase1_loss.empty());
  CHECK(r2.epoch_loss.size() == 3);
}
