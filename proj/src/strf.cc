// src/strf.cc

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

#include "strfnet/strf.h"

#include <cmath>
#include <complex>
#include <cstring>
#include <numbers>
#include <stdexcept>

namespace strfnet {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// A real sequence together with its first and second Hilbert transforms.
// The analytic factor with phase p is
//   a  = s cos p + H(s) sin p
//   a^ = H(s) cos p + H(H(s)) sin p
// which keeps the kernel exactly linear in (cos p, sin p).
struct HilbertTriple {
  std::vector<double> s, hs, hhs;
};

HilbertTriple MakeTriple(std::vector<double> s, const HilbertFir &fir) {
  HilbertTriple tr;
  tr.hs = HilbertTransform(s, fir);
  tr.hhs = HilbertTransform(tr.hs, fir);
  tr.s = std::move(s);
  return tr;
}

void PhaseMix(const HilbertTriple &tr, double phase, std::vector<double> *a,
              std::vector<double> *a_hat) {
  const double c = std::cos(phase), s = std::sin(phase);
  const size_t n = tr.s.size();
  a->resize(n);
  a_hat->resize(n);
  for (size_t i = 0; i < n; ++i) {
    (*a)[i] = tr.s[i] * c + tr.hs[i] * s;
    (*a_hat)[i] = tr.hs[i] * c + tr.hhs[i] * s;
  }
}

std::vector<double> TemporalEnvelope(const StrfParams &p, bool derivative) {
  const int T = p.Frames();
  std::vector<double> h(T);
  const double w = p.temporal_mod;
  for (int n = 0; n < T; ++n) {
    const double t = n / p.frame_rate;
    const double u = w * t;
    h[n] = derivative ? TemporalSeed(u) + u * TemporalSeedDerivative(u) : w * TemporalSeed(u);
  }
  return h;
}

std::vector<double> SpectralEnvelope(const StrfParams &p, bool derivative) {
  const int F = p.channel_support;
  std::vector<double> h(F);
  const double omega = p.spectral_mod, K = p.channels_per_octave;
  for (int k = 0; k < F; ++k) {
    const double x = k - 0.5 * (F - 1);
    const double u = kTwoPi * omega * x;
    h[k] = derivative ? K * (SpectralSeed(u) + u * SpectralSeedDerivative(u))
                      : omega * K * SpectralSeed(u);
  }
  return h;
}

// K = a (x) b + sign * a^ (x) b^
Kernel2D Combine(const std::vector<double> &a, const std::vector<double> &a_hat,
                 const std::vector<double> &b, const std::vector<double> &b_hat, Drift d) {
  const double sign = d == Drift::kUpward ? 1.0 : -1.0;
  Kernel2D k;
  k.frames = static_cast<int>(a.size());
  k.channels = static_cast<int>(b.size());
  k.values.resize(a.size() * b.size());
  for (int t = 0; t < k.frames; ++t)
    for (int f = 0; f < k.channels; ++f)
      k.at(t, f) = a[t] * b[f] + sign * a_hat[t] * b_hat[f];
  return k;
}

}  // namespace

const char *DriftName(Drift d) { return d == Drift::kUpward ? "upward" : "downward"; }

Drift DriftFromName(const char *name) {
  if (std::strcmp(name, "upward") == 0) return Drift::kUpward;
  if (std::strcmp(name, "downward") == 0) return Drift::kDownward;
  throw std::invalid_argument(std::string("unknown drift direction: ") + name);
}

int StrfParams::Frames() const {
  return static_cast<int>(std::lround(time_support_s * frame_rate));
}

void StrfParams::Validate() const {
  if (!std::isfinite(spectral_mod) || !std::isfinite(temporal_mod) ||
      !std::isfinite(spectral_phase) || !std::isfinite(temporal_phase))
    throw std::invalid_argument("STRF parameters must be finite");
  if (!(time_support_s > 0.0) || !(frame_rate > 0.0) || Frames() < 1)
    throw std::invalid_argument("STRF time support must cover at least one frame");
  if (channel_support < 1 || channel_support % 2 == 0)
    throw std::invalid_argument("STRF channel support must be odd and >= 1");
  if (!(channels_per_octave > 0.0))
    throw std::invalid_argument("channels per octave must be positive");
}

double TemporalSeed(double u) { return u * u * std::exp(-3.5 * u) * std::sin(kTwoPi * u); }

double TemporalSeedDerivative(double u) {
  const double e = std::exp(-3.5 * u);
  return e * ((2.0 * u - 3.5 * u * u) * std::sin(kTwoPi * u) + kTwoPi * u * u * std::cos(kTwoPi * u));
}

double SpectralSeed(double x) { return (1.0 - x * x) * std::exp(-0.5 * x * x); }

double SpectralSeedDerivative(double x) { return (x * x * x - 3.0 * x) * std::exp(-0.5 * x * x); }

Kernel2D AssembleStrf(const StrfParams &p, const HilbertFir &fir) {
  p.Validate();
  const HilbertTriple ht = MakeTriple(TemporalEnvelope(p, false), fir);
  const HilbertTriple hs = MakeTriple(SpectralEnvelope(p, false), fir);
  std::vector<double> a, a_hat, b, b_hat;
  PhaseMix(ht, p.temporal_phase, &a, &a_hat);
  PhaseMix(hs, p.spectral_phase, &b, &b_hat);
  return Combine(a, a_hat, b, b_hat, p.direction);
}

std::array<Kernel2D, 4> StrfJacobian(const StrfParams &p, const HilbertFir &fir) {
  p.Validate();
  const HilbertTriple ht = MakeTriple(TemporalEnvelope(p, false), fir);
  const HilbertTriple hs = MakeTriple(SpectralEnvelope(p, false), fir);
  // The FIR is linear, so the Hilbert transform of a seed derivative is the
  // derivative of the transformed seed.
  const HilbertTriple dht = MakeTriple(TemporalEnvelope(p, true), fir);
  const HilbertTriple dhs = MakeTriple(SpectralEnvelope(p, true), fir);

  std::vector<double> a, a_hat, b, b_hat;
  PhaseMix(ht, p.temporal_phase, &a, &a_hat);
  PhaseMix(hs, p.spectral_phase, &b, &b_hat);

  std::vector<double> da, da_hat, db, db_hat;
  std::array<Kernel2D, 4> out;

  PhaseMix(dhs, p.spectral_phase, &db, &db_hat);
  out[kSpectralMod] = Combine(a, a_hat, db, db_hat, p.direction);

  PhaseMix(dht, p.temporal_phase, &da, &da_hat);
  out[kTemporalMod] = Combine(da, da_hat, b, b_hat, p.direction);

  PhaseMix(hs, p.spectral_phase + 0.5 * std::numbers::pi, &db, &db_hat);
  out[kSpectralPhase] = Combine(a, a_hat, db, db_hat, p.direction);

  PhaseMix(ht, p.temporal_phase + 0.5 * std::numbers::pi, &da, &da_hat);
  out[kTemporalPhase] = Combine(da, da_hat, b, b_hat, p.direction);
  return out;
}

void KernelBank::Refresh(const HilbertFir &fir) {
  kernels.resize(params.size());
  for (size_t i = 0; i < params.size(); ++i) kernels[i] = AssembleStrf(params[i], fir);
}

KernelBank InitBank(int count, const StrfGridConfig &grid, RandomSource *rng,
                    const HilbertFir &fir) {
  if (count < 1) throw std::invalid_argument("kernel bank needs at least one kernel");
  KernelBank bank;
  bank.params.resize(count);
  for (int i = 0; i < count; ++i) {
    StrfParams &p = bank.params[i];
    p.temporal_mod = rng->Uniform(0.0, 10.0);
    p.spectral_mod = rng->Uniform(0.0, 0.2);
    p.temporal_phase = rng->Uniform(0.0, kTwoPi);
    p.spectral_phase = rng->Uniform(0.0, kTwoPi);
    p.direction = i % 2 == 0 ? Drift::kUpward : Drift::kDownward;
    p.time_support_s = grid.time_support_s;
    p.channel_support = grid.channel_support;
    p.frame_rate = grid.frame_rate;
    p.channels_per_octave = grid.channels_per_octave;
  }
  bank.Refresh(fir);
  return bank;
}

Kernel2D KernelDftMagnitude(const Kernel2D &k) {
  Kernel2D out;
  out.frames = k.frames;
  out.channels = k.channels;
  out.values.assign(k.values.size(), 0.0);
  for (int u = 0; u < k.frames; ++u) {
    for (int v = 0; v < k.channels; ++v) {
      std::complex<double> acc = 0.0;
      for (int t = 0; t < k.frames; ++t)
        for (int f = 0; f < k.channels; ++f) {
          const double w = -kTwoPi * (static_cast<double>(u * t) / k.frames +
                                      static_cast<double>(v * f) / k.channels);
          acc += k.at(t, f) * std::complex<double>(std::cos(w), std::sin(w));
        }
      out.at(u, v) = std::abs(acc);
    }
  }
  return out;
}

}  // namespace strfnet
