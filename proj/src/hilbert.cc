// src/hilbert.cc

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

#include "strfnet/hilbert.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace strfnet {

HilbertFir DesignHilbertFir(int dft_size) {
  const int M = dft_size;
  if (M < 8 || M % 2 != 0) throw std::invalid_argument("Hilbert FIR size must be even and >= 8");
  HilbertFir fir;
  fir.design_dft_size = M;
  fir.taps.assign(M, 0.0);
  // Direct inverse DFT of the sampled ideal response. H is purely imaginary
  // and odd, so the imaginary part of the result cancels; only
  // sum_k Im(H[k]) * -sin(2 pi k n / M) / M survives.
  const long double two_pi = 2.0L * std::numbers::pi_v<long double>;
  for (int m = 0; m < M; ++m) {
    const int n = m - M / 2;
    long double acc = 0.0L;
    for (int k = 1; k < M; ++k) {
      if (k == M / 2) continue;
      const long double h_imag = k < M / 2 ? -1.0L : 1.0L;
      // (j * h_imag) * exp(j w) has real part -h_imag * sin(w).
      const long double w = two_pi * static_cast<long double>((static_cast<long long>(k) * n) % M) / M;
      acc += -h_imag * std::sin(w);
    }
    fir.taps[m] = static_cast<double>(acc / M);
  }
  return fir;
}

std::vector<double> HilbertTransform(std::span<const double> x, const HilbertFir &fir) {
  const int len = static_cast<int>(x.size());
  const int M = fir.design_dft_size;
  const int delay = fir.Delay();
  std::vector<double> y(len, 0.0);
  for (int n = 0; n < len; ++n) {
    // y[n] = sum_m taps[m] * x[n + delay - m]
    const int m_lo = std::max(0, n + delay - (len - 1));
    const int m_hi = std::min(M - 1, n + delay);
    double acc = 0.0;
    for (int m = m_lo; m <= m_hi; ++m) acc += fir.taps[m] * x[n + delay - m];
    y[n] = acc;
  }
  return y;
}

std::vector<std::complex<double>> AnalyticSequence(std::span<const double> x,
                                                   const HilbertFir &fir) {
  std::vector<double> h = HilbertTransform(x, fir);
  std::vector<std::complex<double>> out(x.size());
  for (size_t i = 0; i < x.size(); ++i) out[i] = {x[i], h[i]};
  return out;
}

}  // namespace strfnet
