// src/augment.cc

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

#include "strfnet/augment.h"

#include <cmath>
#include <stdexcept>

namespace strfnet {

void AugmentPolicy::Validate(const Spectrogram &spec) const {
  if (n_freq_masks < 0 || n_time_masks < 0 || max_freq_mask_width < 0 ||
      max_time_mask_width < 0 || time_warp_max_shift < 0)
    throw std::invalid_argument("augment policy counts and widths must be >= 0");
  if (n_freq_masks > 0 && max_freq_mask_width >= spec.num_bands)
    throw std::invalid_argument("frequency mask width must be smaller than the band count");
  if (n_time_masks > 0 && max_time_mask_width >= spec.num_frames)
    throw std::invalid_argument("time mask width must be smaller than the frame count");
  if (time_warp_max_shift > 0 && 2 * time_warp_max_shift + 3 > spec.num_frames)
    throw std::invalid_argument("time warp shift too large for the frame count");
}

void ApplyFrequencyMask(Spectrogram *spec, int start, int width, double value) {
  if (width < 0 || start < 0 || start + width > spec->num_bands)
    throw std::invalid_argument("frequency mask out of range");
  for (int t = 0; t < spec->num_frames; ++t)
    for (int b = start; b < start + width; ++b) spec->at(t, b) = value;
}

void ApplyTimeMask(Spectrogram *spec, int start, int width, double value) {
  if (width < 0 || start < 0 || start + width > spec->num_frames)
    throw std::invalid_argument("time mask out of range");
  for (int t = start; t < start + width; ++t)
    for (int b = 0; b < spec->num_bands; ++b) spec->at(t, b) = value;
}

Spectrogram TimeWarp(const Spectrogram &spec, int anchor, int shift) {
  const int T = spec.num_frames;
  const int target = anchor + shift;
  if (anchor <= 0 || anchor >= T - 1 || target <= 0 || target >= T - 1)
    throw std::invalid_argument("time warp anchor must stay interior");
  if (shift == 0) return spec;
  Spectrogram out = spec;
  for (int t = 0; t < T; ++t) {
    double src;
    if (t <= target)
      src = static_cast<double>(t) * anchor / target;
    else
      src = anchor + static_cast<double>(t - target) * (T - 1 - anchor) / (T - 1 - target);
    const int i0 = static_cast<int>(std::floor(src));
    const int i1 = std::min(i0 + 1, T - 1);
    const double frac = src - i0;
    for (int b = 0; b < spec.num_bands; ++b)
      out.at(t, b) = (1.0 - frac) * spec.at(i0, b) + frac * spec.at(i1, b);
  }
  return out;
}

Spectrogram SpecAugment(const Spectrogram &spec, const AugmentPolicy &policy, RandomSource *rng) {
  policy.Validate(spec);
  Spectrogram out = spec;
  const int W = policy.time_warp_max_shift;
  if (W > 0) {
    const int anchor = static_cast<int>(rng->UniformInt(W + 1, spec.num_frames - 2 - W));
    const int shift = static_cast<int>(rng->UniformInt(-W, W));
    out = TimeWarp(out, anchor, shift);
  }
  for (int i = 0; i < policy.n_freq_masks; ++i) {
    const int width = static_cast<int>(rng->UniformInt(0, policy.max_freq_mask_width));
    const int start = static_cast<int>(rng->UniformInt(0, spec.num_bands - width));
    ApplyFrequencyMask(&out, start, width, policy.mask_value);
  }
  for (int i = 0; i < policy.n_time_masks; ++i) {
    const int width = static_cast<int>(rng->UniformInt(0, policy.max_time_mask_width));
    const int start = static_cast<int>(rng->UniformInt(0, spec.num_frames - width));
    ApplyTimeMask(&out, start, width, policy.mask_value);
  }
  return out;
}

}  // namespace strfnet
