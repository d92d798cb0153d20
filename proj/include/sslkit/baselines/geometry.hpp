// Copyright 2026 The sslkit Authors
// SPDX-License-Identifier: Apache-2.0
//
// Microphone array geometry.  The default layout is a 6 cm coplanar square,
// a stand-in for a small robot-head array.  Geometries can also be loaded
// from a plain text file: one "x y z" line per microphone in meters, with
// optional "# comment" lines and an optional "speed_of_sound <m/s>" line.

#ifndef SSLKIT_BASELINES_GEOMETRY_HPP_
#define SSLKIT_BASELINES_GEOMETRY_HPP_

#include <array>
#include <string>
#include <vector>

namespace sslkit::baselines {

struct ArrayGeometry {
  std::vector<std::array<double, 3>> mics;  // positions in meters
  double speed_of_sound = 343.0;

  int num_mics() const { return static_cast<int>(mics.size()); }
};

// Four microphones on a 6 cm square at z = 0, counterclockwise from (+,+).
ArrayGeometry default_square_array();

// Throws ConfigError on fewer than two mics, coincident mics, or c <= 0.
void validate_geometry(const ArrayGeometry& geometry);

ArrayGeometry load_geometry(const std::string& path);
void save_geometry(const ArrayGeometry& geometry, const std::string& path);

}  // namespace sslkit::baselines

#endif  // SSLKIT_BASELINES_GEOMETRY_HPP_
