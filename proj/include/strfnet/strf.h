// include/strfnet/strf.h

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

#ifndef STRFNET_STRF_H_
#define STRFNET_STRF_H_

#include <array>
#include <span>
#include <vector>

#include "strfnet/hilbert.h"
#include "strfnet/random.h"

namespace strfnet {

enum class Drift { kUpward, kDownward };

const char *DriftName(Drift d);
Drift DriftFromName(const char *name);

// One spectro-temporal receptive field. The four modulation/phase scalars
// are the learnable part; the rest fixes the sampling grid.
struct StrfParams {
  double spectral_mod = 0.0;    // Omega, cycles per channel
  double temporal_mod = 0.0;    // omega, Hz
  double spectral_phase = 0.0;  // phi, radians
  double temporal_phase = 0.0;  // theta, radians
  Drift direction = Drift::kUpward;
  double time_support_s = 0.5;
  int channel_support = 15;
  double frame_rate = 100.0;         // N, frames per second
  double channels_per_octave = 8.0;  // K

  int Frames() const;
  void Validate() const;
};

// Row-major frames x channels.
struct Kernel2D {
  int frames = 0;
  int channels = 0;
  std::vector<double> values;

  double &at(int t, int k) { return values[static_cast<size_t>(t) * channels + k]; }
  double at(int t, int k) const { return values[static_cast<size_t>(t) * channels + k]; }
};

// Seed functions. The temporal seed is evaluated on the causal grid n / N,
// dilated as w * g_t(w t); the spectral seed on channels centered on the
// middle of the support, dilated as Omega K * g_s(2 pi Omega x).
double TemporalSeed(double u);            // u^2 exp(-3.5 u) sin(2 pi u)
double TemporalSeedDerivative(double u);
double SpectralSeed(double x);            // (1 - x^2) exp(-x^2 / 2)
double SpectralSeedDerivative(double x);

Kernel2D AssembleStrf(const StrfParams &p, const HilbertFir &fir);

enum StrfParamIndex { kSpectralMod = 0, kTemporalMod = 1, kSpectralPhase = 2, kTemporalPhase = 3 };

// dK/dOmega, dK/domega, dK/dphi, dK/dtheta in that order.
std::array<Kernel2D, 4> StrfJacobian(const StrfParams &p, const HilbertFir &fir);

struct StrfGridConfig {
  double time_support_s = 0.5;
  int channel_support = 15;
  double frame_rate = 100.0;
  double channels_per_octave = 8.0;
};

struct KernelBank {
  std::vector<StrfParams> params;
  std::vector<Kernel2D> kernels;

  // Re-assembles every kernel from |params|.
  void Refresh(const HilbertFir &fir);
};

// Omega ~ U[0, 0.2), omega ~ U[0, 10), phases ~ U[0, 2 pi); directions
// alternate starting with upward.
KernelBank InitBank(int count, const StrfGridConfig &grid, RandomSource *rng,
                    const HilbertFir &fir);

// |DFT| of the kernel on its own frames x channels grid, unshifted.
Kernel2D KernelDftMagnitude(const Kernel2D &k);

}  // namespace strfnet

#endif  // STRFNET_STRF_H_
