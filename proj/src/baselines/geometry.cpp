// Copyright 2026 The sslkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sslkit/baselines/geometry.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "sslkit/common/errors.hpp"

namespace sslkit::baselines {

ArrayGeometry default_square_array() {
  ArrayGeometry g;
  g.mics = {
      {{0.03, 0.03, 0.0}},
      {{-0.03, 0.03, 0.0}},
      {{-0.03, -0.03, 0.0}},
      {{0.03, -0.03, 0.0}},
  };
  return g;
}

void validate_geometry(const ArrayGeometry& geometry) {
  if (geometry.num_mics() < 2) {
    throw ConfigError("array geometry needs at least two microphones");
  }
  if (!(geometry.speed_of_sound > 0.0)) {
    throw ConfigError("speed of sound must be positive");
  }
  const int m = geometry.num_mics();
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      double d2 = 0.0;
      for (int k = 0; k < 3; ++k) {
        const double d = geometry.mics[i][k] - geometry.mics[j][k];
        d2 += d * d;
      }
      if (d2 <= 0.0) {
        throw ConfigError("microphones " + std::to_string(i) + " and " +
                          std::to_string(j) + " coincide");
      }
    }
  }
}

ArrayGeometry load_geometry(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open geometry file: " + path);
  ArrayGeometry g;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ss(line.substr(first));
    std::string head;
    ss >> head;
    if (head == "speed_of_sound") {
      if (!(ss >> g.speed_of_sound)) {
        throw ConfigError("bad speed_of_sound on line " +
                          std::to_string(lineno) + " of " + path);
      }
      continue;
    }
    std::array<double, 3> p{};
    std::istringstream coords(line.substr(first));
    if (!(coords >> p[0] >> p[1] >> p[2])) {
      throw ConfigError("expected 'x y z' on line " + std::to_string(lineno) +
                        " of " + path);
    }
    g.mics.push_back(p);
  }
  validate_geometry(g);
  return g;
}

void save_geometry(const ArrayGeometry& geometry, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write geometry file: " + path);
  os << "# microphone positions in meters: x y z\n";
  os << "speed_of_sound " << geometry.speed_of_sound << "\n";
  for (const auto& p : geometry.mics) {
    os << p[0] << " " << p[1] << " " << p[2] << "\n";
  }
  if (!os) throw IoError("failed writing geometry file: " + path);
}

}  // namespace sslkit::baselines
