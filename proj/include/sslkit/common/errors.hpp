// Copyright 2026 The sslkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace sslkit {

// Base class for all sslkit errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad configuration value, unknown key, degenerate parameter range.
struct ConfigError : Error {
  using Error::Error;
};

// File system and serialization failures.
struct IoError : Error {
  using Error::Error;
};

// A caller violated an interface precondition (shape mismatch, bad frame).
struct ContractError : Error {
  using Error::Error;
};

// Non-finite values or numerically invalid state detected mid-computation.
struct NumericError : Error {
  using Error::Error;
};

}  // namespace sslkit
