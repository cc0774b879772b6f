// include/strfnet/hilbert.h

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

#ifndef STRFNET_HILBERT_H_
#define STRFNET_HILBERT_H_

#include <complex>
#include <span>
#include <vector>

namespace strfnet {

// FIR approximation of the Hilbert transformer designed by frequency
// sampling: the inverse M-point DFT of H[k] = -j (0 < k < M/2),
// +j (M/2 < k < M), 0 at DC and Nyquist, rotated by M/2 to be causal.
// Taps at even offsets from the center are zero (type-III structure).
struct HilbertFir {
  std::vector<double> taps;
  int design_dft_size = 0;

  int Delay() const { return design_dft_size / 2; }
};

HilbertFir DesignHilbertFir(int dft_size = 512);

// Delay-compensated Hilbert transform of a finite sequence treated as zero
// outside its support; output has the same length as |x|.
std::vector<double> HilbertTransform(std::span<const double> x, const HilbertFir &fir);

// x + j * HilbertTransform(x). The real part is |x| exactly.
std::vector<std::complex<double>> AnalyticSequence(std::span<const double> x,
                                                   const HilbertFir &fir);

}  // namespace strfnet

#endif  // STRFNET_HILBERT_H_
