// Copyright 2026 The sslkit Authors
// SPDX-License-Identifier: Apache-2.0
//
// sslkit command-line driver: simulate -> train -> infer / baseline -> eval.
// One pipeline stage per subcommand; every run is deterministic under a
// fixed seed and every artifact embeds the resolved configuration.
//
// Exit codes: 0 success, 2 configuration error, 3 I/O error, 4 contract or
// numeric violation.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sslkit/baselines/covariance.hpp"
#include "sslkit/baselines/geometry.hpp"
#include "sslkit/baselines/spectra.hpp"
#include "sslkit/coding/coding.hpp"
#include "sslkit/common/errors.hpp"
#include "sslkit/common/parallel.hpp"
#include "sslkit/dsp/features.hpp"
#include "sslkit/eval/metrics.hpp"
#include "sslkit/eval/report.hpp"
#include "sslkit/io/sslf.hpp"
#include "sslkit/io/wav.hpp"
#include "sslkit/nn/checkpoint.hpp"
#include "sslkit/nn/train.hpp"
#include "sslkit/pipeline/featurize.hpp"
#include "sslkit/sim/dataset.hpp"
#include "sslkit/sim/signalbank.hpp"
#include "sslkit/sim/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sslkit;

namespace {

// ---------------------------------------------------------------------------
// Configuration: defaults, merging, unknown-key rejection
// ---------------------------------------------------------------------------

json default_config() {
  return json{
      {"seed", nullptr},  // overrides dataset.seed and train.seed when set
      {"dataset",
       {{"num_frames", 1000},
        {"ratios", {{"one", 0.55}, {"two", 0.28}, {"none", 0.17}}},
        {"snr_db", {{"min", 0.0}, {"max", 20.0}}},
        {"min_separation_deg", 20.0},
        {"distance_m", {{"min", 1.0}, {"max", 2.5}}},
        {"frames_per_file", {{"min", 2}, {"max", 5}}},
        {"signal", {{"kind", "speech_like"}, {"files", json::array()}}},
        {"noise", "white"},
        {"seed", 1}}},
      {"features",
       {{"max_delay", 25},
        {"num_mel_filters", 40},
        {"band_hz", {{"low", 100.0}, {"high", 8000.0}}}}},
      {"model",
       {{"kind", "mlp-gcc"},
        {"hidden", nullptr},  // per-architecture default when null
        {"channels", json::array({32, 64, 128, 128})},
        {"kernel", 3},
        {"stride", 2},
        {"subnet2_hidden", 500},
        {"neighborhood", 12}}},
      {"train",
       {{"batch_size", 256},
        {"epochs", 10},
        {"phase1_epochs", 4},
        {"skip_phase1", false},
        {"lr", 1e-3},
        {"seed", 1}}},
      {"eval",
       {{"admissible_error_deg", 5.0},
        {"xi", 0.5},
        {"sigma", 8.0},
        {"sigma_n", 8.0}}},
      {"geometry",
       {{"file", ""},
        {"speed_of_sound", 343.0},
        {"mics", json::array()}}}};  // empty: default 6 cm square
}

// Merges `user` over `base`, rejecting keys absent from the defaults so a
// typo fails loudly with the offending key's full path.
void merge_config(json* base, const json& user, const std::string& path) {
  if (!user.is_object()) {
    throw ConfigError("config section '" + (path.empty() ? "<root>" : path) +
                      "' must be a JSON object");
  }
  for (const auto& [key, value] : user.items()) {
    const std::string full = path.empty() ? key : path + "." + key;
    if (!base->contains(key)) {
      throw ConfigError("unknown config key '" + full + "'");
    }
    json& slot = (*base)[key];
    if (slot.is_object() && value.is_object()) {
      merge_config(&slot, value, full);
    } else {
      slot = value;
    }
  }
}

json load_config(const std::string& path, std::optional<uint64_t> seed_flag) {
  json resolved = default_config();
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config: " + path);
    json user;
    try {
      user = json::parse(in);
    } catch (const json::exception& e) {
      throw ConfigError("malformed config " + path + ": " + e.what());
    }
    merge_config(&resolved, user, "");
  }
  if (!resolved["seed"].is_null()) {
    const uint64_t s = resolved["seed"].get<uint64_t>();
    resolved["dataset"]["seed"] = s;
    resolved["train"]["seed"] = s;
  }
  if (seed_flag.has_value()) {
    resolved["seed"] = *seed_flag;
    resolved["dataset"]["seed"] = *seed_flag;
    resolved["train"]["seed"] = *seed_flag;
  }
  return resolved;
}

sim::DatasetRecipe parse_dataset(const json& cfg) {
  const json& d = cfg.at("dataset");
  sim::DatasetRecipe recipe;
  recipe.num_frames = d.at("num_frames").get<int>();
  recipe.ratio_one = d.at("ratios").at("one").get<double>();
  recipe.ratio_two = d.at("ratios").at("two").get<double>();
  recipe.ratio_none = d.at("ratios").at("none").get<double>();
  recipe.snr_min_db = d.at("snr_db").at("min").get<double>();
  recipe.snr_max_db = d.at("snr_db").at("max").get<double>();
  recipe.min_separation_deg = d.at("min_separation_deg").get<double>();
  recipe.distance_min_m = d.at("distance_m").at("min").get<double>();
  recipe.distance_max_m = d.at("distance_m").at("max").get<double>();
  recipe.frames_per_file_min = d.at("frames_per_file").at("min").get<int>();
  recipe.frames_per_file_max = d.at("frames_per_file").at("max").get<int>();
  recipe.signal_kind = d.at("signal").at("kind").get<std::string>();
  recipe.signal_files =
      d.at("signal").at("files").get<std::vector<std::string>>();
  recipe.noise_kind = d.at("noise").get<std::string>();
  recipe.seed = d.at("seed").get<uint64_t>();
  return recipe;
}

pipeline::FeatureParams parse_features(const json& cfg) {
  const json& f = cfg.at("features");
  pipeline::FeatureParams params;
  params.max_delay = f.at("max_delay").get<int>();
  params.num_mel_filters = f.at("num_mel_filters").get<int>();
  params.mel_low_hz = f.at("band_hz").at("low").get<double>();
  params.mel_high_hz = f.at("band_hz").at("high").get<double>();
  if (params.max_delay < 1) throw ConfigError("features.max_delay must be >= 1");
  return params;
}

baselines::ArrayGeometry parse_geometry(const json& cfg) {
  const json& g = cfg.at("geometry");
  const std::string file = g.at("file").get<std::string>();
  if (!file.empty()) return baselines::load_geometry(file);
  baselines::ArrayGeometry geometry;
  geometry.speed_of_sound = g.at("speed_of_sound").get<double>();
  for (const auto& mic : g.at("mics")) {
    const std::vector<double> p = mic.get<std::vector<double>>();
    if (p.size() != 3) {
      throw ConfigError("geometry.mics entries must have 3 coordinates");
    }
    geometry.mics.push_back({p[0], p[1], p[2]});
  }
  if (geometry.mics.empty()) geometry = baselines::default_square_array();
  baselines::validate_geometry(geometry);
  return geometry;
}

nn::TrainConfig parse_train(const json& cfg) {
  const json& t = cfg.at("train");
  nn::TrainConfig config;
  config.batch_size = t.at("batch_size").get<int>();
  config.epochs = t.at("epochs").get<int>();
  config.phase1_epochs = t.at("phase1_epochs").get<int>();
  config.skip_phase1 = t.at("skip_phase1").get<bool>();
  config.adam.lr = t.at("lr").get<double>();
  config.seed = t.at("seed").get<uint64_t>();
  if (config.epochs < 1) throw ConfigError("train.epochs must be >= 1");
  return config;
}

coding::CodingParams parse_coding(const json& cfg) {
  const json& e = cfg.at("eval");
  coding::CodingParams params;
  params.sigma = e.at("sigma").get<double>();
  params.sigma_n = e.at("sigma_n").get<double>();
  params.xi = e.at("xi").get<double>();
  return params;
}

eval::EvalConfig parse_eval(const json& cfg) {
  eval::EvalConfig config;
  config.admissible_error_deg =
      cfg.at("eval").at("admissible_error_deg").get<double>();
  config.coding = parse_coding(cfg);
  return config;
}

// Architecture hyperparameters: structural dims come from the geometry and
// feature settings, widths from the model section.
std::pair<nn::NetworkKind, json> parse_model(const json& cfg, int num_channels,
                                             const pipeline::FeatureParams& fp) {
  const json& m = cfg.at("model");
  const nn::NetworkKind kind =
      nn::network_kind_from_name(m.at("kind").get<std::string>());
  const int pairs = num_channels * (num_channels - 1) / 2;
  json hyper;
  switch (kind) {
    case nn::NetworkKind::kMlpGcc: {
      std::vector<int> hidden = {1000, 1000, 500};
      if (!m.at("hidden").is_null()) {
        hidden = m.at("hidden").get<std::vector<int>>();
      }
      hyper = json{{"input_dim", pairs * fp.taps()},
                   {"hidden", hidden},
                   {"output_dim", coding::DoaGrid::kSize}};
      break;
    }
    case nn::NetworkKind::kCnnGccfb: {
      hyper = json{{"in_channels", pairs},
                   {"height", fp.num_mel_filters},
                   {"width", fp.taps()},
                   {"channels", m.at("channels").get<std::vector<int>>()},
                   {"kernel", m.at("kernel").get<int>()},
                   {"stride", m.at("stride").get<int>()},
                   {"output_dim", coding::DoaGrid::kSize}};
      break;
    }
    case nn::NetworkKind::kTsnnGccfb: {
      std::vector<int> hidden = {500, 500};
      if (!m.at("hidden").is_null()) {
        hidden = m.at("hidden").get<std::vector<int>>();
      }
      hyper = json{{"bands", fp.num_mel_filters},
                   {"band_input", pairs * fp.taps()},
                   {"subnet1_hidden", hidden},
                   {"latent", coding::DoaGrid::kSize},
                   {"subnet2_hidden", m.at("subnet2_hidden").get<int>()},
                   {"neighborhood", m.at("neighborhood").get<int>()},
                   {"output_dim", coding::DoaGrid::kSize}};
      break;
    }
  }
  return {kind, hyper};
}

// ---------------------------------------------------------------------------
// Shared command plumbing
// ---------------------------------------------------------------------------

void ensure_out_dir(const std::string& out_dir, bool force) {
  const fs::path root(out_dir);
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec) throw IoError("cannot create output directory: " + out_dir);
  if (!fs::is_empty(root) && !force) {
    throw IoError("output directory not empty (use --force): " + out_dir);
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << text;
  if (!out) throw IoError("short write: " + path);
}

// Loads a labeled dataset and extracts (features, targets) for a model.
struct LoadedData {
  std::vector<std::vector<double>> features;
  std::vector<std::vector<double>> annotations;  // truth azimuths per frame
};

LoadedData load_features(const sim::DatasetIndex& index, nn::NetworkKind kind,
                         const pipeline::FeatureParams& fp) {
  LoadedData data;
  dsp::MelFilterBank bank;
  bool bank_ready = false;
  for (const auto& entry : index.entries) {
    const dsp::MultichannelFrame recording = io::read_wav(entry.wav);
    const sim::ScenarioAnnotation ann = sim::read_sidecar(entry.sidecar);
    const std::vector<dsp::MultichannelFrame> frames =
        pipeline::frame_recording(recording);
    if (static_cast<int>(frames.size()) != ann.num_frames()) {
      throw ContractError("frame count mismatch between " + entry.wav +
                          " and its sidecar");
    }
    if (!bank_ready && kind != nn::NetworkKind::kMlpGcc) {
      bank = pipeline::make_filterbank(fp, recording.sample_rate,
                                       sim::kFrameLen);
      bank_ready = true;
    }
    for (size_t f = 0; f < frames.size(); ++f) {
      data.features.push_back(
          pipeline::extract_feature(frames[f], kind, fp, bank));
      data.annotations.push_back(ann.azimuths[f]);
    }
  }
  return data;
}

nn::Tensor encode_targets(const std::vector<std::vector<double>>& annotations,
                          const coding::CodingParams& params) {
  nn::Tensor targets(
      {static_cast<int>(annotations.size()), coding::DoaGrid::kSize});
  for (size_t f = 0; f < annotations.size(); ++f) {
    const coding::LikelihoodVector lik =
        coding::encode(coding::GroundTruth{annotations[f]}, params);
    std::copy(lik.values.begin(), lik.values.end(),
              targets.ptr() + static_cast<long>(f) * coding::DoaGrid::kSize);
  }
  return targets;
}

// Batched forward pass over per-frame feature rows.
std::vector<coding::LikelihoodVector> forward_frames(
    const nn::Network& net, const std::vector<std::vector<double>>& rows) {
  std::vector<coding::LikelihoodVector> out;
  out.reserve(rows.size());
  constexpr int kBatch = 64;
  for (size_t begin = 0; begin < rows.size(); begin += kBatch) {
    const size_t end = std::min(rows.size(), begin + kBatch);
    std::vector<std::vector<double>> chunk(rows.begin() + begin,
                                           rows.begin() + end);
    const nn::Tensor pred = net.forward(pipeline::stack_rows(chunk));
    for (size_t r = 0; r < chunk.size(); ++r) {
      coding::LikelihoodVector lik;
      const double* p = pred.ptr() + static_cast<long>(r) * net.output_dim();
      std::copy(p, p + coding::DoaGrid::kSize, lik.values.begin());
      out.push_back(std::move(lik));
    }
  }
  return out;
}

void write_likelihoods(const std::string& out_dir, const std::string& stem,
                       const std::vector<coding::LikelihoodVector>& outputs,
                       const coding::CodingParams& decode_params,
                       const json& metadata) {
  io::SslfFile sslf;
  sslf.kind = io::SslfKind::kLikelihood;
  sslf.dims = {static_cast<uint32_t>(outputs.size()),
               static_cast<uint32_t>(coding::DoaGrid::kSize)};
  sslf.metadata_json = metadata.dump();
  sslf.data.reserve(outputs.size() * coding::DoaGrid::kSize);
  for (const auto& lik : outputs) {
    for (double v : lik.values) sslf.data.push_back(static_cast<float>(v));
  }
  io::write_sslf((fs::path(out_dir) / (stem + ".sslf")).string(), sslf);

  json frames = json::array();
  for (size_t f = 0; f < outputs.size(); ++f) {
    frames.push_back(
        {{"index", f},
         {"azimuths", coding::decode(outputs[f], decode_params)}});
  }
  json doc = metadata;
  doc["frames"] = std::move(frames);
  write_text_file((fs::path(out_dir) / (stem + ".predictions.json")).string(),
                  doc.dump(2) + "\n");
}

json artifact_metadata(const json& resolved_config, const std::string& model) {
  return json{{"schema_version", 1},
              {"tool_version", eval::kToolVersion},
              {"model", model},
              {"config", resolved_config}};
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

int cmd_simulate(const json& cfg, const std::string& out_dir, bool force) {
  const sim::DatasetRecipe recipe = parse_dataset(cfg);
  const baselines::ArrayGeometry geometry = parse_geometry(cfg);
  const sim::DatasetSummary summary =
      sim::make_dataset(recipe, geometry, out_dir, force, cfg.dump());
  std::printf("wrote %d files, %d frames (none %d / one %d / two %d) to %s\n",
              summary.num_files, summary.num_frames, summary.frames_none,
              summary.frames_one, summary.frames_two, out_dir.c_str());
  return 0;
}

int cmd_train(const json& cfg, const std::string& data_dir,
              const std::string& out_dir, const std::string& resume,
              bool force) {
  ensure_out_dir(out_dir, force);
  const pipeline::FeatureParams fp = parse_features(cfg);
  const baselines::ArrayGeometry geometry = parse_geometry(cfg);
  const int channels = static_cast<int>(geometry.mics.size());
  const auto [kind, hyper] = parse_model(cfg, channels, fp);
  const nn::TrainConfig train_config = parse_train(cfg);
  const coding::CodingParams coding_params = parse_coding(cfg);

  const sim::DatasetIndex index = sim::load_dataset(data_dir);
  std::printf("extracting %s features for %d frames...\n",
              nn::network_kind_name(kind).c_str(), index.num_frames);
  const LoadedData data = load_features(index, kind, fp);
  const nn::Tensor inputs = pipeline::stack_rows(data.features);
  const nn::Tensor targets = encode_targets(data.annotations, coding_params);

  std::unique_ptr<nn::Network> net;
  std::unique_ptr<nn::Adam> adam;
  if (!resume.empty()) {
    nn::LoadedCheckpoint loaded =
        nn::load_checkpoint(resume, train_config.adam, kind);
    net = std::move(loaded.net);
    adam = std::move(loaded.adam);
    if (adam == nullptr) adam = std::make_unique<nn::Adam>(train_config.adam);
    std::printf("resumed %s from %s at step %ld\n",
                nn::network_kind_name(kind).c_str(), resume.c_str(),
                adam->step_count());
  } else {
    net = nn::build_network(kind, hyper, train_config.seed);
  }

  nn::TrainResult result;
  if (kind == nn::NetworkKind::kTsnnGccfb && resume.empty()) {
    // Two-step schedule manages its own optimizers; the checkpoint then
    // carries weights only, and a later --resume continues end-to-end.
    result = nn::train_two_stage(*net, inputs, targets, train_config);
  } else {
    if (adam == nullptr) adam = std::make_unique<nn::Adam>(train_config.adam);
    result = nn::train(*net, inputs, targets, train_config, adam.get());
  }

  std::string log = "phase,epoch,loss\n";
  char row[96];
  for (size_t e = 0; e < result.phase1_loss.size(); ++e) {
    std::snprintf(row, sizeof(row), "1,%zu,%.12g\n", e + 1,
                  result.phase1_loss[e]);
    log += row;
  }
  for (size_t e = 0; e < result.epoch_loss.size(); ++e) {
    std::snprintf(row, sizeof(row), "2,%zu,%.12g\n", e + 1,
                  result.epoch_loss[e]);
    log += row;
  }
  write_text_file((fs::path(out_dir) / "train_log.csv").string(), log);

  const std::string ckpt = (fs::path(out_dir) / "model.sslw").string();
  nn::save_weights(*net, ckpt, adam.get());

  json meta = artifact_metadata(cfg, nn::network_kind_name(kind));
  meta["hyper"] = hyper;
  meta["final_loss"] =
      result.epoch_loss.empty() ? 0.0 : result.epoch_loss.back();
  meta["epochs"] = result.epoch_loss.size();
  meta["phase1_epochs"] = result.phase1_loss.size();
  write_text_file((fs::path(out_dir) / "train_meta.json").string(),
                  meta.dump(2) + "\n");
  std::printf("checkpoint %s final loss %.6g\n", ckpt.c_str(),
              result.epoch_loss.empty() ? 0.0 : result.epoch_loss.back());
  return 0;
}

int cmd_infer(const json& cfg, const std::string& checkpoint,
              const std::vector<std::string>& wavs, const std::string& out_dir,
              bool force) {
  if (wavs.empty()) throw ConfigError("infer: no input recordings given");
  ensure_out_dir(out_dir, force);
  const pipeline::FeatureParams fp = parse_features(cfg);
  const coding::CodingParams coding_params = parse_coding(cfg);
  const std::unique_ptr<nn::Network> net = nn::load_weights(checkpoint);
  const nn::NetworkKind kind = net->kind();

  dsp::MelFilterBank bank;
  if (kind != nn::NetworkKind::kMlpGcc) {
    bank = pipeline::make_filterbank(fp, sim::kWorkingRate, sim::kFrameLen);
  }
  json meta = artifact_metadata(cfg, nn::network_kind_name(kind));
  meta["checkpoint"] = checkpoint;

  for (const std::string& wav : wavs) {
    const dsp::MultichannelFrame recording = io::read_wav(wav);
    const std::vector<dsp::MultichannelFrame> frames =
        pipeline::frame_recording(recording);
    std::vector<std::vector<double>> rows;
    rows.reserve(frames.size());
    for (const auto& frame : frames) {
      rows.push_back(pipeline::extract_feature(frame, kind, fp, bank));
    }
    const std::vector<coding::LikelihoodVector> outputs =
        forward_frames(*net, rows);
    const std::string stem = fs::path(wav).stem().string();
    write_likelihoods(out_dir, stem, outputs, coding_params, meta);
    std::printf("%s: %zu frames -> %s/%s.sslf\n", wav.c_str(), outputs.size(),
                out_dir.c_str(), stem.c_str());
  }
  return 0;
}

baselines::SpatialCovariance identity_noise_cov(
    const baselines::SpatialCovariance& like) {
  baselines::SpatialCovariance noise = like;
  std::fill(noise.r.begin(), noise.r.end(), baselines::cdouble(0.0, 0.0));
  const int m = noise.num_channels;
  for (int b = 0; b < noise.num_bins(); ++b) {
    for (int i = 0; i < m; ++i) {
      noise.bin(b)[static_cast<size_t>(i) * m + i] = 1.0;
    }
  }
  return noise;
}

int cmd_baseline(const json& cfg, const std::string& method,
                 const std::vector<std::string>& wavs,
                 const std::string& noise_wav, const std::string& out_dir,
                 bool force) {
  static const std::set<std::string> kMethods = {
      "srp-phat", "srp-nonlin", "mvdr-snr", "sevd-music", "gevd-music"};
  if (kMethods.find(method) == kMethods.end()) {
    std::string names;
    for (const auto& name : kMethods) names += " " + name;
    throw ConfigError("unknown baseline method '" + method +
                      "'; valid methods:" + names);
  }
  if (wavs.empty()) throw ConfigError("baseline: no input recordings given");
  ensure_out_dir(out_dir, force);
  const baselines::ArrayGeometry geometry = parse_geometry(cfg);
  const coding::CodingParams coding_params = parse_coding(cfg);

  // Noise covariance for gevd-music: measured from a noise-only recording
  // when given, identity otherwise (which reduces it to sevd-music).
  std::optional<baselines::SpatialCovariance> measured_noise;
  if (!noise_wav.empty()) {
    const dsp::MultichannelFrame noise_rec = io::read_wav(noise_wav);
    const std::vector<dsp::MultichannelFrame> frames =
        pipeline::frame_recording(noise_rec);
    for (const auto& frame : frames) {
      baselines::SpatialCovariance cov = baselines::block_covariance(frame);
      if (!measured_noise.has_value()) {
        measured_noise = std::move(cov);
      } else {
        for (size_t i = 0; i < cov.r.size(); ++i) {
          measured_noise->r[i] += cov.r[i];
        }
      }
    }
    if (measured_noise.has_value() && !frames.empty()) {
      const double inv = 1.0 / static_cast<double>(frames.size());
      for (auto& v : measured_noise->r) v *= inv;
    }
  }

  json meta = artifact_metadata(cfg, method);
  std::optional<baselines::SteeringField> steering;
  for (const std::string& wav : wavs) {
    const dsp::MultichannelFrame recording = io::read_wav(wav);
    const std::vector<dsp::MultichannelFrame> frames =
        pipeline::frame_recording(recording);
    std::vector<coding::LikelihoodVector> outputs;
    outputs.reserve(frames.size());
    for (const auto& frame : frames) {
      const baselines::SpatialCovariance cov =
          baselines::block_covariance(frame);
      if (!steering.has_value()) {
        steering = baselines::make_steering(geometry, cov.freqs_hz);
      }
      if (method == "srp-phat") {
        outputs.push_back(baselines::srp_phat(cov, *steering));
      } else if (method == "srp-nonlin") {
        outputs.push_back(baselines::srp_nonlin(cov, *steering));
      } else if (method == "mvdr-snr") {
        outputs.push_back(baselines::mvdr_snr(cov, *steering));
      } else if (method == "sevd-music") {
        outputs.push_back(baselines::sevd_music(cov, *steering));
      } else {
        const baselines::SpatialCovariance noise =
            measured_noise.has_value() ? *measured_noise
                                       : identity_noise_cov(cov);
        baselines::MusicResult result =
            baselines::gevd_music(cov, noise, *steering);
        outputs.push_back(std::move(result.spectrum));
      }
    }
    const std::string stem = fs::path(wav).stem().string();
    write_likelihoods(out_dir, stem, outputs, coding_params, meta);
    std::printf("%s: %zu frames -> %s/%s.sslf\n", wav.c_str(), outputs.size(),
                out_dir.c_str(), stem.c_str());
  }
  return 0;
}

// Collects (likelihoods, truths) pairs for evaluation: predictions are
// *.sslf files, annotations are matching-stem sidecars (or a dataset
// directory with a manifest).
void collect_eval_inputs(const std::string& pred_dir,
                         const std::string& truth_dir,
                         std::vector<coding::LikelihoodVector>* outputs,
                         std::vector<std::vector<double>>* truths) {
  std::vector<std::string> sslf_files;
  for (const auto& entry : fs::directory_iterator(pred_dir)) {
    if (entry.path().extension() == ".sslf") {
      sslf_files.push_back(entry.path().string());
    }
  }
  std::sort(sslf_files.begin(), sslf_files.end());
  if (sslf_files.empty()) {
    throw IoError("no .sslf likelihood dumps found in " + pred_dir);
  }

  // Stem -> sidecar path, from a manifest when present.
  std::map<std::string, std::string> sidecars;
  if (fs::exists(fs::path(truth_dir) / "manifest.json")) {
    const sim::DatasetIndex index = sim::load_dataset(truth_dir);
    for (const auto& entry : index.entries) {
      sidecars[fs::path(entry.wav).stem().string()] = entry.sidecar;
    }
  }

  for (const std::string& sslf_path : sslf_files) {
    const std::string stem = fs::path(sslf_path).stem().string();
    std::string sidecar;
    if (auto it = sidecars.find(stem); it != sidecars.end()) {
      sidecar = it->second;
    } else {
      sidecar = (fs::path(truth_dir) / (stem + ".json")).string();
    }
    if (!fs::exists(sidecar)) {
      throw IoError("missing annotation file: " + sidecar);
    }
    const sim::ScenarioAnnotation ann = sim::read_sidecar(sidecar);
    const io::SslfFile sslf = io::read_sslf(sslf_path);
    if (sslf.dims.size() != 2 ||
        sslf.dims[1] != static_cast<uint32_t>(coding::DoaGrid::kSize)) {
      throw ContractError("unexpected likelihood shape in " + sslf_path);
    }
    if (static_cast<int>(sslf.dims[0]) != ann.num_frames()) {
      throw ContractError("frame count mismatch between " + sslf_path +
                          " and " + sidecar);
    }
    for (uint32_t f = 0; f < sslf.dims[0]; ++f) {
      coding::LikelihoodVector lik;
      for (int d = 0; d < coding::DoaGrid::kSize; ++d) {
        lik.values[d] =
            sslf.data[static_cast<size_t>(f) * coding::DoaGrid::kSize + d];
      }
      outputs->push_back(std::move(lik));
      truths->push_back(ann.azimuths[f]);
    }
  }
}

int cmd_eval(const json& cfg, const std::string& pred_dir,
             const std::string& truth_dir, const std::string& mode,
             const std::string& format_name, const std::string& out_file) {
  if (mode != "known" && mode != "unknown") {
    throw ConfigError("eval mode must be 'known' or 'unknown'");
  }
  const eval::ReportFormat format = eval::parse_report_format(format_name);
  const eval::EvalConfig eval_config = parse_eval(cfg);

  std::vector<coding::LikelihoodVector> outputs;
  std::vector<std::vector<double>> truths;
  collect_eval_inputs(pred_dir, truth_dir, &outputs, &truths);

  std::string rendered;
  if (mode == "known") {
    const eval::KnownNReport report =
        eval::eval_known_n(outputs, truths, eval_config);
    rendered = eval::render_known(report, format, cfg.dump());
  } else {
    const eval::PrCurve curve =
        eval::eval_unknown_n(outputs, truths, eval_config);
    rendered = eval::render_pr(curve, format, cfg.dump());
  }
  if (out_file.empty()) {
    std::fputs(rendered.c_str(), stdout);
  } else {
    write_text_file(out_file, rendered);
    std::printf("report written to %s\n", out_file.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sslkit: multi-source sound localization toolkit"};
  app.set_version_flag("--version", eval::kToolVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string data_dir;
  std::string pred_dir;
  std::string checkpoint;
  std::string resume;
  std::string method;
  std::string noise_wav;
  std::string truth_dir;
  std::string mode = "known";
  std::string format_name = "table";
  std::string out_file;
  std::vector<std::string> wavs;
  bool force = false;
  int threads = 0;
  std::optional<uint64_t> seed_flag;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON configuration file");
    cmd->add_option("--seed", seed_flag,
                    "override every RNG seed in the config");
    cmd->add_option("--threads", threads,
                    "worker threads (default: SSLKIT_THREADS or 1)");
  };

  CLI::App* simulate = app.add_subcommand("simulate", "generate a dataset");
  add_common(simulate);
  simulate->add_option("--out", out_dir, "output directory")->required();
  simulate->add_flag("--force", force, "write into a non-empty directory");

  CLI::App* train = app.add_subcommand("train", "train a model");
  add_common(train);
  train->add_option("--data", data_dir, "dataset directory")->required();
  train->add_option("--out", out_dir, "output directory")->required();
  train->add_option("--resume", resume,
                    "checkpoint to continue from (end-to-end)");
  train->add_flag("--force", force, "write into a non-empty directory");

  CLI::App* infer = app.add_subcommand("infer", "run a trained model");
  add_common(infer);
  infer->add_option("--checkpoint", checkpoint, "model checkpoint")->required();
  infer->add_option("--out", out_dir, "output directory")->required();
  infer->add_option("wavs", wavs, "input recordings")->required();
  infer->add_flag("--force", force, "write into a non-empty directory");

  CLI::App* baseline = app.add_subcommand("baseline", "run a spatial-spectrum baseline");
  add_common(baseline);
  baseline->add_option("--method", method,
                       "srp-phat | srp-nonlin | mvdr-snr | sevd-music | gevd-music")
      ->required();
  baseline->add_option("--noise", noise_wav,
                       "noise-only recording for gevd-music");
  baseline->add_option("--out", out_dir, "output directory")->required();
  baseline->add_option("wavs", wavs, "input recordings")->required();
  baseline->add_flag("--force", force, "write into a non-empty directory");

  CLI::App* evaluate = app.add_subcommand("eval", "score predictions");
  add_common(evaluate);
  evaluate->add_option("--pred", pred_dir, "directory of .sslf dumps")
      ->required();
  evaluate->add_option("--truth", truth_dir,
                       "dataset directory or directory of annotation sidecars")
      ->required();
  evaluate->add_option("--mode", mode, "known | unknown (source count)");
  evaluate->add_option("--format", format_name, "json | csv | table");
  evaluate->add_option("--out", out_file, "report file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    int workers = threads;
    if (workers <= 0) {
      if (const char* env = std::getenv("SSLKIT_THREADS")) {
        workers = std::atoi(env);
      }
    }
    if (workers > 0) par::set_num_threads(workers);
    const json cfg = load_config(config_path, seed_flag);
    if (simulate->parsed()) return cmd_simulate(cfg, out_dir, force);
    if (train->parsed()) return cmd_train(cfg, data_dir, out_dir, resume, force);
    if (infer->parsed()) return cmd_infer(cfg, checkpoint, wavs, out_dir, force);
    if (baseline->parsed())
      return cmd_baseline(cfg, method, wavs, noise_wav, out_dir, force);
    if (evaluate->parsed())
      return cmd_eval(cfg, pred_dir, truth_dir, mode, format_name, out_file);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 3;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  }
  return 0;
}
