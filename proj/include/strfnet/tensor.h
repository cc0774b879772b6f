// include/strfnet/tensor.h

// Copyright 2026  The strfnet Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef STRFNET_TENSOR_H_
#define STRFNET_TENSOR_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace strfnet {

// Channels x frames x bands, row-major.
struct Tensor3 {
  int channels = 0, frames = 0, bands = 0;
  std::vector<double> data;

  Tensor3() = default;
  Tensor3(int c, int t, int f) : channels(c), frames(t), bands(f), data(static_cast<size_t>(c) * t * f, 0.0) {}

  size_t size() const { return data.size(); }
  size_t index(int c, int t, int f) const {
    return (static_cast<size_t>(c) * frames + t) * bands + f;
  }
  double &at(int c, int t, int f) { return data[index(c, t, f)]; }
  double at(int c, int t, int f) const { return data[index(c, t, f)]; }
  std::span<double> plane(int c) {
    return {data.data() + static_cast<size_t>(c) * frames * bands, static_cast<size_t>(frames) * bands};
  }
  std::span<const double> plane(int c) const {
    return {data.data() + static_cast<size_t>(c) * frames * bands, static_cast<size_t>(frames) * bands};
  }
  bool SameShape(const Tensor3 &o) const {
    return channels == o.channels && frames == o.frames && bands == o.bands;
  }
};

// Rows x cols, row-major. Used for frame sequences (frames x features).
struct Matrix {
  int rows = 0, cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c, 0.0) {}

  double &at(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
  double at(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }
  double *row(int r) { return data.data() + static_cast<size_t>(r) * cols; }
  const double *row(int r) const { return data.data() + static_cast<size_t>(r) * cols; }
};

// A trainable tensor and its gradient accumulator.
struct Param {
  std::string name;
  std::vector<double> value;
  std::vector<double> grad;
  bool trainable = true;

  Param() = default;
  Param(std::string n, size_t size) : name(std::move(n)), value(size, 0.0), grad(size, 0.0) {}
  size_t size() const { return value.size(); }
  void ZeroGrad() { std::fill(grad.begin(), grad.end(), 0.0); }
};

}  // namespace strfnet

#endif  // STRFNET_TENSOR_H_
