// include/strfnet/augment.h

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

#ifndef STRFNET_AUGMENT_H_
#define STRFNET_AUGMENT_H_

#include "strfnet/frontend.h"
#include "strfnet/random.h"

namespace strfnet {

struct AugmentPolicy {
  int n_freq_masks = 2;
  int max_freq_mask_width = 8;
  int n_time_masks = 2;
  int max_time_mask_width = 40;
  int time_warp_max_shift = 20;
  double mask_value = 0.0;

  void Validate(const Spectrogram &spec) const;
};

// Sets bands [start, start + width) to |value| over every frame.
void ApplyFrequencyMask(Spectrogram *spec, int start, int width, double value);
// Sets frames [start, start + width) to |value| over every band.
void ApplyTimeMask(Spectrogram *spec, int start, int width, double value);
// Moves frame |anchor| to |anchor + shift|, stretching both sides linearly
// and resampling along time by linear interpolation.
Spectrogram TimeWarp(const Spectrogram &spec, int anchor, int shift);

// Warp, then frequency masks, then time masks. Widths are drawn uniformly
// from [0, max]; positions uniformly over the valid range.
Spectrogram SpecAugment(const Spectrogram &spec, const AugmentPolicy &policy, RandomSource *rng);

}  // namespace strfnet

#endif  // STRFNET_AUGMENT_H_
