// include/strfnet/conv.h

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

#ifndef STRFNET_CONV_H_
#define STRFNET_CONV_H_

#include <span>
#include <vector>

#include "strfnet/tensor.h"

namespace strfnet {

// Cross-correlation geometry. Padding may differ on the two sides of each
// axis ("same" padding with an even kernel needs this).
struct ConvGeometry {
  int in_channels = 1, out_channels = 1;
  int kernel_frames = 1, kernel_bands = 1;
  int stride_frames = 1, stride_bands = 1;
  int pad_frames_before = 0, pad_frames_after = 0;
  int pad_bands_before = 0, pad_bands_after = 0;

  int OutFrames(int in_frames) const;
  int OutBands(int in_bands) const;
  size_t WeightCount() const {
    return static_cast<size_t>(out_channels) * in_channels * kernel_frames * kernel_bands;
  }
  // Throws if the kernel does not fit the padded input.
  void Check(const Tensor3 &input) const;

  // "Same" along frames, "valid" along bands.
  static ConvGeometry SameFramesValidBands(int in_c, int out_c, int k_frames, int k_bands);
};

// Weights are laid out [out][in][kernel_frames][kernel_bands]. |bias| may be
// empty.

// Straightforward serial loops; kept as the test and benchmark reference.
void ConvForwardReference(const ConvGeometry &g, const Tensor3 &input, std::span<const double> weights,
                          std::span<const double> bias, Tensor3 *output);
void ConvBackwardReference(const ConvGeometry &g, const Tensor3 &input, std::span<const double> weights,
                           const Tensor3 &grad_output, Tensor3 *grad_input,
                           std::span<double> grad_weights, std::span<double> grad_bias);

// Batched kernels parallelized with OpenMP over (item, channel). Results do
// not depend on the thread count: every output element is owned by one
// thread and summed in a fixed order.
void ConvForward(const ConvGeometry &g, const std::vector<Tensor3> &inputs,
                 std::span<const double> weights, std::span<const double> bias,
                 std::vector<Tensor3> *outputs);
// Accumulates into grad_weights/grad_bias (summed over the batch). Pass
// nullptr for |grad_inputs| to skip the input gradient.
void ConvBackward(const ConvGeometry &g, const std::vector<Tensor3> &inputs,
                  std::span<const double> weights, const std::vector<Tensor3> &grad_outputs,
                  std::vector<Tensor3> *grad_inputs, std::span<double> grad_weights,
                  std::span<double> grad_bias);

}  // namespace strfnet

#endif  // STRFNET_CONV_H_
