// Copyright 2026 The sslkit Authors
// SPDX-License-Identifier: Apache-2.0
//
// Minimal dense row-major tensor holding 64-bit values.  All network math in
// this toolkit runs in double precision, which keeps gradient checks free of
// float32 tolerance games.

#ifndef SSLKIT_NN_TENSOR_HPP_
#define SSLKIT_NN_TENSOR_HPP_

#include <string>
#include <vector>

namespace sslkit::nn {

struct Tensor {
  std::vector<int> shape;
  std::vector<double> data;

  Tensor() = default;
  explicit Tensor(std::vector<int> dims);

  static Tensor zeros(std::vector<int> dims) { return Tensor(std::move(dims)); }

  long size() const { return static_cast<long>(data.size()); }
  int dim(int i) const { return shape[static_cast<size_t>(i)]; }
  int rank() const { return static_cast<int>(shape.size()); }

  double* ptr() { return data.data(); }
  const double* ptr() const { return data.data(); }

  void fill(double v);

  // Throws NumericError naming `context` if any value is NaN or infinite.
  void check_finite(const std::string& context) const;

  bool same_shape(const Tensor& other) const { return shape == other.shape; }
};

long shape_product(const std::vector<int>& dims);

}  // namespace sslkit::nn

#endif  // SSLKIT_NN_TENSOR_HPP_
