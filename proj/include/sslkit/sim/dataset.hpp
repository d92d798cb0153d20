// Copyright 2026 The sslkit Authors
// SPDX-License-Identifier: Apache-2.0
//
// Labeled dataset generation: a recipe turns into a directory of
// multichannel float WAVs, one JSON sidecar of per-frame ground truth per
// clip, and a manifest carrying the resolved configuration.  Generation is
// deterministic: every clip draws from an RNG stream forked from
// (seed, file index).

#ifndef SSLKIT_SIM_DATASET_HPP_
#define SSLKIT_SIM_DATASET_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "sslkit/baselines/geometry.hpp"
#include "sslkit/sim/synth.hpp"

namespace sslkit::sim {

struct DatasetRecipe {
  int num_frames = 1000;
  // Frame-type mixture; must sum to 1 within 1e-6.
  double ratio_one = 0.55;
  double ratio_two = 0.28;
  double ratio_none = 0.17;
  double snr_min_db = 0.0;
  double snr_max_db = 20.0;
  double min_separation_deg = 20.0;
  double distance_min_m = 1.0;
  double distance_max_m = 2.5;
  int frames_per_file_min = 2;
  int frames_per_file_max = 5;
  std::string signal_kind = "speech_like";  // speech_like | noise_burst | file
  std::vector<std::string> signal_files;    // for signal_kind == "file"
  std::string noise_kind = "white";         // white | none
  uint64_t seed = 1;
};

struct DatasetSummary {
  int num_files = 0;
  int num_frames = 0;
  int frames_none = 0;
  int frames_one = 0;
  int frames_two = 0;
};

// Index of an existing dataset directory, as read back from the manifest.
struct DatasetIndex {
  struct Entry {
    std::string wav;      // absolute or manifest-relative path
    std::string sidecar;
    int frames = 0;
  };
  std::string root;
  std::vector<Entry> entries;
  int num_frames = 0;
};

void check_recipe(const DatasetRecipe& recipe);

// Generates the dataset.  `config_echo` (a JSON object as text, may be
// empty) is embedded verbatim in the manifest for provenance.  Throws
// IoError when out_dir exists non-empty and force is false.
DatasetSummary make_dataset(const DatasetRecipe& recipe,
                            const baselines::ArrayGeometry& geometry,
                            const std::string& out_dir, bool force,
                            const std::string& config_echo = "");

DatasetIndex load_dataset(const std::string& dir);

// Reads one sidecar back into an annotation (azimuths and framing).
ScenarioAnnotation read_sidecar(const std::string& path);

}  // namespace sslkit::sim

#endif  // SSLKIT_SIM_DATASET_HPP_
