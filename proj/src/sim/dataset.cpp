// Copyright 2026 The sslkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sslkit/sim/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "sslkit/coding/coding.hpp"
#include "sslkit/common/errors.hpp"
#include "sslkit/common/rng.hpp"
#include "sslkit/io/wav.hpp"
#include "sslkit/sim/signalbank.hpp"

namespace sslkit::sim {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kSidecarSchemaVersion = 1;

std::string clip_stem(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "clip_%05d", index);
  return buf;
}

// A pending clip: how many frames it covers and how many sources it mixes.
struct FileJob {
  int frames = 0;
  int sources = 0;
};

std::vector<double> make_signal(const DatasetRecipe& recipe, int num_samples,
                                Rng* rng,
                                const std::vector<std::vector<double>>& bank) {
  if (recipe.signal_kind == "speech_like") {
    return speech_like(num_samples, kWorkingRate, rng);
  }
  if (recipe.signal_kind == "noise_burst") {
    return noise_burst(num_samples, kWorkingRate, rng);
  }
  // "file": random bank entry, random circular offset, cut to length.
  const auto& src = bank[static_cast<size_t>(
      rng->uniform_int(0, static_cast<long>(bank.size()) - 1))];
  std::vector<double> out(num_samples);
  const size_t offset = static_cast<size_t>(
      rng->uniform_int(0, static_cast<long>(src.size()) - 1));
  for (int i = 0; i < num_samples; ++i) {
    out[i] = src[(offset + i) % src.size()];
  }
  return out;
}

json sidecar_json(const ScenarioAnnotation& ann) {
  json frames = json::array();
  for (int f = 0; f < ann.num_frames(); ++f) {
    frames.push_back({{"index", f},
                      {"azimuths", ann.azimuths[f]},
                      {"count", ann.azimuths[f].size()}});
  }
  return json{{"schema_version", kSidecarSchemaVersion},
              {"sample_rate", kWorkingRate},
              {"frame_len", ann.frame_len},
              {"hop", ann.hop},
              {"frames", frames}};
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << text;
  if (!out) throw IoError("short write: " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

}  // namespace

void check_recipe(const DatasetRecipe& recipe) {
  if (recipe.num_frames < 1) {
    throw ConfigError("dataset: num_frames must be >= 1");
  }
  const double ratio_sum =
      recipe.ratio_one + recipe.ratio_two + recipe.ratio_none;
  if (recipe.ratio_one < 0 || recipe.ratio_two < 0 || recipe.ratio_none < 0 ||
      std::fabs(ratio_sum - 1.0) > 1e-6) {
    throw ConfigError("dataset: mixture ratios must be >= 0 and sum to 1");
  }
  if (recipe.snr_max_db < recipe.snr_min_db) {
    throw ConfigError("dataset: snr_max_db < snr_min_db");
  }
  if (!(recipe.min_separation_deg >= 0.0 && recipe.min_separation_deg < 180.0)) {
    throw ConfigError("dataset: min_separation_deg must be in [0, 180)");
  }
  if (!(recipe.distance_min_m > 0.3) ||
      recipe.distance_max_m < recipe.distance_min_m) {
    throw ConfigError("dataset: distances must satisfy 0.3 < min <= max");
  }
  if (recipe.frames_per_file_min < 1 ||
      recipe.frames_per_file_max < recipe.frames_per_file_min) {
    throw ConfigError("dataset: frames_per_file range is invalid");
  }
  if (recipe.signal_kind != "speech_like" &&
      recipe.signal_kind != "noise_burst" && recipe.signal_kind != "file") {
    throw ConfigError(
        "dataset: signal_kind must be speech_like, noise_burst or file");
  }
  if (recipe.signal_kind == "file" && recipe.signal_files.empty()) {
    throw ConfigError("dataset: signal_kind 'file' needs signal_files");
  }
  if (recipe.noise_kind != "white" && recipe.noise_kind != "none") {
    throw ConfigError("dataset: noise_kind must be white or none");
  }
}

DatasetSummary make_dataset(const DatasetRecipe& recipe,
                            const baselines::ArrayGeometry& geometry,
                            const std::string& out_dir, bool force,
                            const std::string& config_echo) {
  check_recipe(recipe);
  baselines::validate_geometry(geometry);

  const fs::path root(out_dir);
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec) throw IoError("cannot create output directory: " + out_dir);
  if (!fs::is_empty(root) && !force) {
    throw IoError("output directory not empty (use force): " + out_dir);
  }

  std::vector<std::vector<double>> bank;
  for (const std::string& path : recipe.signal_files) {
    bank.push_back(load_source_file(path));
    if (bank.back().empty()) throw IoError("empty source file: " + path);
  }

  // Frame budget per mixture type; rounding residue goes to one-source.
  const int target_two =
      static_cast<int>(std::lround(recipe.ratio_two * recipe.num_frames));
  const int target_none =
      static_cast<int>(std::lround(recipe.ratio_none * recipe.num_frames));
  const int target_one = recipe.num_frames - target_two - target_none;
  if (target_one < 0) {
    throw ConfigError("dataset: rounding left a negative one-source budget");
  }

  Rng master(recipe.seed);
  Rng plan_rng = master.fork(0x5EED0001ULL);

  std::vector<FileJob> jobs;
  const int budgets[3] = {target_none, target_one, target_two};
  for (int sources = 0; sources < 3; ++sources) {
    int left = budgets[sources];
    while (left > 0) {
      const int take = static_cast<int>(std::min<long>(
          left, plan_rng.uniform_int(recipe.frames_per_file_min,
                                     recipe.frames_per_file_max)));
      jobs.push_back(FileJob{take, sources});
      left -= take;
    }
  }
  // Interleave types so any prefix of the directory is a mixed sample.
  for (size_t i = jobs.size(); i > 1; --i) {
    const size_t j = static_cast<size_t>(plan_rng.uniform_int(0, i - 1));
    std::swap(jobs[i - 1], jobs[j]);
  }

  DatasetSummary summary;
  json manifest_files = json::array();
  for (size_t file_index = 0; file_index < jobs.size(); ++file_index) {
    const FileJob& job = jobs[file_index];
    Rng rng = master.fork(file_index);
    const int num_samples = kFrameLen + kFrameHop * (job.frames - 1);

    SceneSpec scene;
    scene.geometry = geometry;
    scene.duration_s = static_cast<double>(num_samples) / kWorkingRate;
    scene.seed = rng.next_u64();
    scene.noise.kind = recipe.noise_kind;
    scene.noise.snr_db = rng.uniform(recipe.snr_min_db, recipe.snr_max_db);

    std::vector<double> azimuths;
    for (int s = 0; s < job.sources; ++s) {
      double az = rng.uniform(-180.0, 180.0);
      auto too_close = [&](double candidate) {
        for (double other : azimuths) {
          if (coding::angular_distance(candidate, other) <
              recipe.min_separation_deg) {
            return true;
          }
        }
        return false;
      };
      int attempts = 0;
      while (too_close(az)) {
        az = rng.uniform(-180.0, 180.0);
        if (++attempts > 100000) {
          throw ConfigError(
              "dataset: cannot place sources at the requested separation");
        }
      }
      azimuths.push_back(az);
      SourceSpec src;
      src.azimuth_deg = az;
      src.distance_m = rng.uniform(recipe.distance_min_m, recipe.distance_max_m);
      src.signal = make_signal(recipe, num_samples, &rng, bank);
      scene.sources.push_back(std::move(src));
    }

    const SceneAudio audio = synthesize(scene);
    const std::string stem = clip_stem(static_cast<int>(file_index));
    const std::string wav_name = stem + ".wav";
    const std::string sidecar_name = stem + ".json";
    io::write_wav((root / wav_name).string(), audio.waveform);

    json sidecar = sidecar_json(audio.annotation);
    if (audio.clipped_rescaled) {
      sidecar["clipped_rescaled"] = true;
      sidecar["rescale_gain"] = audio.rescale_gain;
    }
    write_text((root / sidecar_name).string(), sidecar.dump(2) + "\n");

    manifest_files.push_back({{"wav", wav_name},
                              {"sidecar", sidecar_name},
                              {"frames", audio.annotation.num_frames()}});
    summary.num_files += 1;
    summary.num_frames += audio.annotation.num_frames();
    for (const auto& frame : audio.annotation.azimuths) {
      if (frame.empty()) summary.frames_none += 1;
      else if (frame.size() == 1) summary.frames_one += 1;
      else summary.frames_two += 1;
    }
  }

  json manifest{{"schema_version", kSidecarSchemaVersion},
                {"num_files", summary.num_files},
                {"num_frames", summary.num_frames},
                {"frame_counts",
                 {{"none", summary.frames_none},
                  {"one", summary.frames_one},
                  {"two", summary.frames_two}}},
                {"sample_rate", kWorkingRate},
                {"frame_len", kFrameLen},
                {"hop", kFrameHop},
                {"files", manifest_files}};
  if (!config_echo.empty()) {
    manifest["config"] = json::parse(config_echo);
  }
  write_text((root / "manifest.json").string(), manifest.dump(2) + "\n");
  return summary;
}

DatasetIndex load_dataset(const std::string& dir) {
  const fs::path root(dir);
  const std::string manifest_path = (root / "manifest.json").string();
  json manifest;
  try {
    manifest = json::parse(read_text(manifest_path));
  } catch (const json::exception& e) {
    throw IoError("malformed manifest " + manifest_path + ": " + e.what());
  }
  DatasetIndex index;
  index.root = dir;
  index.num_frames = manifest.at("num_frames").get<int>();
  for (const auto& f : manifest.at("files")) {
    DatasetIndex::Entry entry;
    entry.wav = (root / f.at("wav").get<std::string>()).string();
    entry.sidecar = (root / f.at("sidecar").get<std::string>()).string();
    entry.frames = f.at("frames").get<int>();
    index.entries.push_back(std::move(entry));
  }
  return index;
}

ScenarioAnnotation read_sidecar(const std::string& path) {
  json doc;
  try {
    doc = json::parse(read_text(path));
  } catch (const json::exception& e) {
    throw IoError("malformed sidecar " + path + ": " + e.what());
  }
  ScenarioAnnotation ann;
  try {
    ann.frame_len = doc.at("frame_len").get<int>();
    ann.hop = doc.at("hop").get<int>();
    for (const auto& frame : doc.at("frames")) {
      std::vector<double> az = frame.at("azimuths").get<std::vector<double>>();
      if (az.size() != frame.at("count").get<size_t>()) {
        throw IoError("sidecar count/azimuths mismatch in " + path);
      }
      ann.azimuths.push_back(std::move(az));
    }
  } catch (const json::exception& e) {
    throw IoError("malformed sidecar " + path + ": " + e.what());
  }
  return ann;
}

}  // namespace sslkit::sim
