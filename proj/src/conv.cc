// src/conv.cc

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

#include "strfnet/conv.h"

#include <algorithm>
#include <complex>
#include <stdexcept>
#include <string>

#include "strfnet/fft.h"

namespace strfnet {

int ConvGeometry::OutFrames(int in_frames) const {
  return (in_frames + pad_frames_before + pad_frames_after - kernel_frames) / stride_frames + 1;
}

int ConvGeometry::OutBands(int in_bands) const {
  return (in_bands + pad_bands_before + pad_bands_after - kernel_bands) / stride_bands + 1;
}

void ConvGeometry::Check(const Tensor3 &input) const {
  if (input.channels != in_channels)
    throw std::invalid_argument("conv input has " + std::to_string(input.channels) +
                                " channels, expected " + std::to_string(in_channels));
  if (input.frames + pad_frames_before + pad_frames_after < kernel_frames ||
      input.bands + pad_bands_before + pad_bands_after < kernel_bands)
    throw std::invalid_argument("conv kernel larger than padded input");
  if (stride_frames < 1 || stride_bands < 1) throw std::invalid_argument("conv stride must be >= 1");
}

ConvGeometry ConvGeometry::SameFramesValidBands(int in_c, int out_c, int k_frames, int k_bands) {
  ConvGeometry g;
  g.in_channels = in_c;
  g.out_channels = out_c;
  g.kernel_frames = k_frames;
  g.kernel_bands = k_bands;
  g.pad_frames_before = (k_frames - 1) / 2;
  g.pad_frames_after = k_frames - 1 - g.pad_frames_before;
  return g;
}

namespace {

size_t WIndex(const ConvGeometry &g, int co, int ci, int kt, int kf) {
  return ((static_cast<size_t>(co) * g.in_channels + ci) * g.kernel_frames + kt) * g.kernel_bands + kf;
}

Tensor3 Pad(const ConvGeometry &g, const Tensor3 &x) {
  if (g.pad_frames_before == 0 && g.pad_frames_after == 0 && g.pad_bands_before == 0 &&
      g.pad_bands_after == 0)
    return x;
  Tensor3 p(x.channels, x.frames + g.pad_frames_before + g.pad_frames_after,
            x.bands + g.pad_bands_before + g.pad_bands_after);
  for (int c = 0; c < x.channels; ++c)
    for (int t = 0; t < x.frames; ++t)
      std::copy_n(x.data.data() + x.index(c, t, 0), x.bands, p.data.data() + p.index(c, t + g.pad_frames_before, g.pad_bands_before));
  return p;
}

// Padded input value or zero.
double PaddedAt(const ConvGeometry &g, const Tensor3 &x, int c, int tp, int fp) {
  const int t = tp - g.pad_frames_before, f = fp - g.pad_bands_before;
  if (t < 0 || t >= x.frames || f < 0 || f >= x.bands) return 0.0;
  return x.at(c, t, f);
}

constexpr size_t kChunk = 1024;

// With unit frame stride every tap becomes one long contiguous run: the band
// stride is folded into phase planes (plane c * sf + r holds padded columns
// r, r + sf, ...) and outputs are computed on the phase row width, discarding
// the columns past the valid width.
bool RowContiguous(const ConvGeometry &g) { return g.stride_frames == 1; }

Tensor3 Phases(const ConvGeometry &g, Tensor3 padded) {
  const int sf = g.stride_bands;
  if (sf == 1) return padded;
  Tensor3 ph(padded.channels * sf, padded.frames, (padded.bands + sf - 1) / sf);
  for (int c = 0; c < padded.channels; ++c)
    for (int t = 0; t < padded.frames; ++t)
      for (int f = 0; f < padded.bands; ++f) ph.at(c * sf + f % sf, t, f / sf) = padded.at(c, t, f);
  return ph;
}

// Start of tap (ci, kt, kf) within the phase tensor.
size_t TapOffset(const ConvGeometry &g, const Tensor3 &ph, int ci, int kt, int kf) {
  const int sf = g.stride_bands;
  return ph.index(ci * sf + kf % sf, kt, kf / sf);
}

// Output length on the phase row width.
size_t WideLength(int out_frames, int out_bands, int width) {
  return static_cast<size_t>(out_frames - 1) * width + out_bands;
}

// One output channel of one item.
void ForwardChannel(const ConvGeometry &g, const Tensor3 &in, std::span<const double> w,
                    double bias, int co, Tensor3 *out, std::vector<double> *scratch) {
  const int To = out->frames, Fo = out->bands;
  double *dst = out->plane(co).data();
  if (RowContiguous(g)) {
    const int W = in.bands;
    const size_t L = WideLength(To, Fo, W);
    scratch->assign(L, 0.0);
    double *acc = scratch->data();
    // Chunks keep the accumulator in L1 while every tap streams over it.
    for (size_t j0 = 0; j0 < L; j0 += kChunk) {
      const size_t len = std::min(kChunk, L - j0);
      double *a = acc + j0;
      for (int ci = 0; ci < g.in_channels; ++ci)
        for (int kt = 0; kt < g.kernel_frames; ++kt)
          for (int kf = 0; kf < g.kernel_bands; ++kf) {
            const double wv = w[WIndex(g, co, ci, kt, kf)];
            const double *src = in.data.data() + TapOffset(g, in, ci, kt, kf) + j0;
            for (size_t j = 0; j < len; ++j) a[j] += wv * src[j];
          }
    }
    for (int t = 0; t < To; ++t)
      for (int f = 0; f < Fo; ++f) dst[static_cast<size_t>(t) * Fo + f] = acc[static_cast<size_t>(t) * W + f] + bias;
    return;
  }
  std::fill(dst, dst + static_cast<size_t>(To) * Fo, bias);
  const int sf = g.stride_bands, st = g.stride_frames;
  for (int ci = 0; ci < g.in_channels; ++ci)
    for (int kt = 0; kt < g.kernel_frames; ++kt)
      for (int kf = 0; kf < g.kernel_bands; ++kf) {
        const double wv = w[WIndex(g, co, ci, kt, kf)];
        for (int t = 0; t < To; ++t) {
          const double *src = in.data.data() + in.index(ci, t * st + kt, kf);
          double *row = dst + static_cast<size_t>(t) * Fo;
          for (int f = 0; f < Fo; ++f) row[f] += wv * src[static_cast<size_t>(f) * sf];
        }
      }
}

// Gradient plane |co| spread onto the phase row width.
void WideGrad(const Tensor3 &go, int co, int width, std::vector<double> *wide) {
  const int To = go.frames, Fo = go.bands;
  wide->assign(WideLength(To, Fo, width), 0.0);
  const double *gplane = go.plane(co).data();
  for (int t = 0; t < To; ++t)
    std::copy_n(gplane + static_cast<size_t>(t) * Fo, Fo, wide->data() + static_cast<size_t>(t) * width);
}


// Large kernels (the first layer) correlate along time in the frequency
// domain: for each band pair the frame axis is one circular correlation of
// length N >= padded frames, which never wraps for the lags used.
constexpr int kSpectralMinTaps = 100;

// Batches of unequal item shapes take the direct path.
bool UseSpectral(const ConvGeometry &g, const std::vector<Tensor3> &inputs) {
  for (const Tensor3 &x : inputs)
    if (!x.SameShape(inputs[0])) return false;
  return g.stride_frames == 1 && g.stride_bands == 1 && g.kernel_frames * g.kernel_bands >= kSpectralMinTaps;
}

using Cplx = std::complex<double>;

// acc += a * conj(b), written out so no complex-multiply library call
// (with its inf/nan handling) is emitted.
inline void MacConj(Cplx *acc, const Cplx *a, const Cplx *b, int len) {
  double *r = reinterpret_cast<double *>(acc);
  const double *x = reinterpret_cast<const double *>(a);
  const double *y = reinterpret_cast<const double *>(b);
  for (int k = 0; k < len; ++k) {
    r[2 * k] += x[2 * k] * y[2 * k] + x[2 * k + 1] * y[2 * k + 1];
    r[2 * k + 1] += x[2 * k + 1] * y[2 * k] - x[2 * k] * y[2 * k + 1];
  }
}

// acc += a * b
inline void Mac(Cplx *acc, const Cplx *a, const Cplx *b, int len) {
  double *r = reinterpret_cast<double *>(acc);
  const double *x = reinterpret_cast<const double *>(a);
  const double *y = reinterpret_cast<const double *>(b);
  for (int k = 0; k < len; ++k) {
    r[2 * k] += x[2 * k] * y[2 * k] - x[2 * k + 1] * y[2 * k + 1];
    r[2 * k + 1] += x[2 * k] * y[2 * k + 1] + x[2 * k + 1] * y[2 * k];
  }
}

struct SpectralBank {
  int bins = 0;
  std::vector<Cplx> data;
  Cplx *at(size_t slot) { return data.data() + slot * bins; }
  const Cplx *at(size_t slot) const { return data.data() + slot * bins; }
};

// Spectra of every padded input column: slot (i * C + c) * Fp + fb.
SpectralBank InputSpectra(const FftPlanPair &plan, const std::vector<Tensor3> &padded) {
  SpectralBank b;
  b.bins = plan.bins();
  const int n = static_cast<int>(padded.size());
  const int C = padded[0].channels, Fp = padded[0].bands;
  b.data.resize(static_cast<size_t>(n) * C * Fp * b.bins);
  const int jobs = n * C * Fp;
#pragma omp parallel
  {
    std::vector<double> buf(plan.size());
#pragma omp for schedule(static)
    for (int job = 0; job < jobs; ++job) {
      const int i = job / (C * Fp), c = (job / Fp) % C, fb = job % Fp;
      const Tensor3 &x = padded[i];
      std::fill(buf.begin(), buf.end(), 0.0);
      for (int t = 0; t < x.frames; ++t) buf[t] = x.at(c, t, fb);
      plan.Forward(buf.data(), b.at(job));
    }
  }
  return b;
}

// Spectra of every kernel column: slot (co * Cin + ci) * Kf + kf.
SpectralBank WeightSpectra(const FftPlanPair &plan, const ConvGeometry &g, std::span<const double> w) {
  SpectralBank b;
  b.bins = plan.bins();
  const int jobs = g.out_channels * g.in_channels * g.kernel_bands;
  b.data.resize(static_cast<size_t>(jobs) * b.bins);
#pragma omp parallel
  {
    std::vector<double> buf(plan.size());
#pragma omp for schedule(static)
    for (int job = 0; job < jobs; ++job) {
      const int co = job / (g.in_channels * g.kernel_bands), ci = (job / g.kernel_bands) % g.in_channels,
                kf = job % g.kernel_bands;
      std::fill(buf.begin(), buf.end(), 0.0);
      for (int kt = 0; kt < g.kernel_frames; ++kt) buf[kt] = w[WIndex(g, co, ci, kt, kf)];
      plan.Forward(buf.data(), b.at(job));
    }
  }
  return b;
}

// Spectra of every output-gradient column: slot (i * Cout + co) * Fo + f.
SpectralBank GradSpectra(const FftPlanPair &plan, const std::vector<Tensor3> &grads) {
  SpectralBank b;
  b.bins = plan.bins();
  const int n = static_cast<int>(grads.size());
  const int C = grads[0].channels, Fo = grads[0].bands;
  b.data.resize(static_cast<size_t>(n) * C * Fo * b.bins);
  const int jobs = n * C * Fo;
#pragma omp parallel
  {
    std::vector<double> buf(plan.size());
#pragma omp for schedule(static)
    for (int job = 0; job < jobs; ++job) {
      const int i = job / (C * Fo), c = (job / Fo) % C, f = job % Fo;
      const Tensor3 &x = grads[i];
      std::fill(buf.begin(), buf.end(), 0.0);
      for (int t = 0; t < x.frames; ++t) buf[t] = x.at(c, t, f);
      plan.Forward(buf.data(), b.at(job));
    }
  }
  return b;
}

// Every item must share one padded shape on this path.
void CheckUniform(const std::vector<Tensor3> &xs) {
  for (const Tensor3 &x : xs)
    if (!x.SameShape(xs[0])) throw std::invalid_argument("spectral conv path needs equal item shapes");
}

void ForwardSpectral(const ConvGeometry &g, const std::vector<Tensor3> &padded, std::span<const double> w,
                     std::span<const double> bias, std::vector<Tensor3> *outputs) {
  CheckUniform(padded);
  const int n = static_cast<int>(padded.size());
  const int Tp = padded[0].frames, Fp = padded[0].bands;
  const int To = Tp - g.kernel_frames + 1, Fo = Fp - g.kernel_bands + 1;
  const FftPlanPair plan(FftPlanPair::GoodSize(Tp));
  const int bins = plan.bins();
  const double scale = 1.0 / plan.size();
  const SpectralBank X = InputSpectra(plan, padded);
  const SpectralBank W = WeightSpectra(plan, g, w);
  const int Cin = g.in_channels, Kf = g.kernel_bands;
  const int jobs = n * g.out_channels;
#pragma omp parallel
  {
    std::vector<Cplx> acc(bins);
    std::vector<double> y(plan.size());
#pragma omp for schedule(static)
    for (int job = 0; job < jobs; ++job) {
      const int i = job / g.out_channels, co = job % g.out_channels;
      Tensor3 &out = (*outputs)[i];
      const double b = bias.empty() ? 0.0 : bias[co];
      for (int f = 0; f < Fo; ++f) {
        std::fill(acc.begin(), acc.end(), Cplx(0.0, 0.0));
        for (int ci = 0; ci < Cin; ++ci)
          for (int kf = 0; kf < Kf; ++kf) {
            const Cplx *xs = X.at((static_cast<size_t>(i) * Cin + ci) * Fp + f + kf);
            const Cplx *ws = W.at((static_cast<size_t>(co) * Cin + ci) * Kf + kf);
            MacConj(acc.data(), xs, ws, bins);
          }
        plan.Inverse(acc.data(), y.data());
        for (int t = 0; t < To; ++t) out.at(co, t, f) = y[t] * scale + b;
      }
    }
  }
}

void BackwardSpectral(const ConvGeometry &g, const std::vector<Tensor3> &inputs, const std::vector<Tensor3> &padded,
                      std::span<const double> w, const std::vector<Tensor3> &grad_outputs,
                      std::vector<Tensor3> *grad_inputs, std::span<double> grad_weights,
                      std::span<double> grad_bias) {
  CheckUniform(padded);
  CheckUniform(grad_outputs);
  const int n = static_cast<int>(padded.size());
  const int Tp = padded[0].frames, Fp = padded[0].bands;
  const int To = grad_outputs[0].frames, Fo = grad_outputs[0].bands;
  const int Cin = g.in_channels, Cout = g.out_channels, Kt = g.kernel_frames, Kf = g.kernel_bands;
  const FftPlanPair plan(FftPlanPair::GoodSize(Tp));
  const int bins = plan.bins();
  const double scale = 1.0 / plan.size();
  const SpectralBank X = InputSpectra(plan, padded);
  const SpectralBank G = GradSpectra(plan, grad_outputs);

#pragma omp parallel
  {
    std::vector<Cplx> acc(bins);
    std::vector<double> y(plan.size());
#pragma omp for schedule(static)
    for (int co = 0; co < Cout; ++co) {
      if (!grad_bias.empty()) {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
          for (double v : grad_outputs[i].plane(co)) s += v;
        grad_bias[co] += s;
      }
      for (int ci = 0; ci < Cin; ++ci)
        for (int kf = 0; kf < Kf; ++kf) {
          // Cross-correlation of input column f + kf with gradient column f,
          // summed over items and bands before the single inverse transform.
          std::fill(acc.begin(), acc.end(), Cplx(0.0, 0.0));
          for (int i = 0; i < n; ++i)
            for (int f = 0; f < Fo; ++f) {
              const Cplx *xs = X.at((static_cast<size_t>(i) * Cin + ci) * Fp + f + kf);
              const Cplx *gs = G.at((static_cast<size_t>(i) * Cout + co) * Fo + f);
              MacConj(acc.data(), xs, gs, bins);
            }
          plan.Inverse(acc.data(), y.data());
          for (int kt = 0; kt < Kt; ++kt) grad_weights[WIndex(g, co, ci, kt, kf)] += y[kt] * scale;
        }
    }
  }

  if (!grad_inputs) return;
  const SpectralBank W = WeightSpectra(plan, g, w);
  grad_inputs->resize(n);
  for (int i = 0; i < n; ++i) (*grad_inputs)[i] = Tensor3(inputs[i].channels, inputs[i].frames, inputs[i].bands);
  const int jobs = n * Cin;
#pragma omp parallel
  {
    std::vector<Cplx> acc(bins);
    std::vector<double> y(plan.size());
#pragma omp for schedule(static)
    for (int job = 0; job < jobs; ++job) {
      const int i = job / Cin, ci = job % Cin;
      Tensor3 &gi = (*grad_inputs)[i];
      for (int fb = 0; fb < Fp; ++fb) {
        const int fi = fb - g.pad_bands_before;
        if (fi < 0 || fi >= gi.bands) continue;
        // Full convolution of each gradient column with the kernel column
        // that maps it onto padded band fb.
        std::fill(acc.begin(), acc.end(), Cplx(0.0, 0.0));
        for (int co = 0; co < Cout; ++co)
          for (int kf = 0; kf < Kf; ++kf) {
            const int f = fb - kf;
            if (f < 0 || f >= Fo) continue;
            const Cplx *gs = G.at((static_cast<size_t>(i) * Cout + co) * Fo + f);
            const Cplx *ws = W.at((static_cast<size_t>(co) * Cin + ci) * Kf + kf);
            Mac(acc.data(), gs, ws, bins);
          }
        plan.Inverse(acc.data(), y.data());
        for (int t = 0; t < gi.frames; ++t) gi.at(ci, t, fi) = y[t + g.pad_frames_before] * scale;
      }
    }
  }
  (void)To;
}
}  // namespace

void ConvForwardReference(const ConvGeometry &g, const Tensor3 &input, std::span<const double> weights,
                          std::span<const double> bias, Tensor3 *output) {
  g.Check(input);
  const int To = g.OutFrames(input.frames), Fo = g.OutBands(input.bands);
  *output = Tensor3(g.out_channels, To, Fo);
  for (int co = 0; co < g.out_channels; ++co)
    for (int t = 0; t < To; ++t)
      for (int f = 0; f < Fo; ++f) {
        double acc = bias.empty() ? 0.0 : bias[co];
        for (int ci = 0; ci < g.in_channels; ++ci)
          for (int kt = 0; kt < g.kernel_frames; ++kt)
            for (int kf = 0; kf < g.kernel_bands; ++kf)
              acc += weights[WIndex(g, co, ci, kt, kf)] *
                     PaddedAt(g, input, ci, t * g.stride_frames + kt, f * g.stride_bands + kf);
        output->at(co, t, f) = acc;
      }
}

void ConvBackwardReference(const ConvGeometry &g, const Tensor3 &input, std::span<const double> weights,
                           const Tensor3 &grad_output, Tensor3 *grad_input,
                           std::span<double> grad_weights, std::span<double> grad_bias) {
  g.Check(input);
  if (grad_input) *grad_input = Tensor3(input.channels, input.frames, input.bands);
  for (int co = 0; co < g.out_channels; ++co)
    for (int t = 0; t < grad_output.frames; ++t)
      for (int f = 0; f < grad_output.bands; ++f) {
        const double go = grad_output.at(co, t, f);
        if (!grad_bias.empty()) grad_bias[co] += go;
        for (int ci = 0; ci < g.in_channels; ++ci)
          for (int kt = 0; kt < g.kernel_frames; ++kt)
            for (int kf = 0; kf < g.kernel_bands; ++kf) {
              const int tp = t * g.stride_frames + kt, fp = f * g.stride_bands + kf;
              grad_weights[WIndex(g, co, ci, kt, kf)] += go * PaddedAt(g, input, ci, tp, fp);
              if (grad_input) {
                const int ti = tp - g.pad_frames_before, fi = fp - g.pad_bands_before;
                if (ti >= 0 && ti < input.frames && fi >= 0 && fi < input.bands)
                  grad_input->at(ci, ti, fi) += go * weights[WIndex(g, co, ci, kt, kf)];
              }
            }
      }
}

void ConvForward(const ConvGeometry &g, const std::vector<Tensor3> &inputs,
                 std::span<const double> weights, std::span<const double> bias,
                 std::vector<Tensor3> *outputs) {
  if (weights.size() != g.WeightCount()) throw std::invalid_argument("conv weight count mismatch");
  const int n = static_cast<int>(inputs.size());
  std::vector<Tensor3> prepared(n);
  outputs->resize(n);
  for (int i = 0; i < n; ++i) {
    g.Check(inputs[i]);
    prepared[i] = RowContiguous(g) ? Phases(g, Pad(g, inputs[i])) : Pad(g, inputs[i]);
    (*outputs)[i] = Tensor3(g.out_channels, g.OutFrames(inputs[i].frames), g.OutBands(inputs[i].bands));
  }
  if (n == 0) return;
  if (UseSpectral(g, inputs)) {
    ForwardSpectral(g, prepared, weights, bias, outputs);
    return;
  }
  const int jobs = n * g.out_channels;
#pragma omp parallel
  {
    std::vector<double> scratch;
#pragma omp for schedule(static)
    for (int job = 0; job < jobs; ++job) {
      const int i = job / g.out_channels, co = job % g.out_channels;
      ForwardChannel(g, prepared[i], weights, bias.empty() ? 0.0 : bias[co], co, &(*outputs)[i], &scratch);
    }
  }
}

namespace {

void BackwardStrided(const ConvGeometry &g, const std::vector<Tensor3> &inputs,
                     const std::vector<Tensor3> &padded, std::span<const double> weights,
                     const std::vector<Tensor3> &grad_outputs, std::vector<Tensor3> *grad_inputs,
                     std::span<double> grad_weights) {
  const int n = static_cast<int>(inputs.size());
  const int st = g.stride_frames, sf = g.stride_bands;
#pragma omp parallel for schedule(static)
  for (int co = 0; co < g.out_channels; ++co)
    for (int i = 0; i < n; ++i) {
      const Tensor3 &go = grad_outputs[i];
      const Tensor3 &p = padded[i];
      const int To = go.frames, Fo = go.bands;
      const double *gplane = go.plane(co).data();
      for (int ci = 0; ci < g.in_channels; ++ci)
        for (int kt = 0; kt < g.kernel_frames; ++kt)
          for (int kf = 0; kf < g.kernel_bands; ++kf) {
            double s = 0.0;
            for (int t = 0; t < To; ++t) {
              const double *src = p.data.data() + p.index(ci, t * st + kt, kf);
              const double *grow = gplane + static_cast<size_t>(t) * Fo;
              for (int f = 0; f < Fo; ++f) s += grow[f] * src[static_cast<size_t>(f) * sf];
            }
            grad_weights[WIndex(g, co, ci, kt, kf)] += s;
          }
    }
  if (!grad_inputs) return;
  const int jobs = n * g.in_channels;
#pragma omp parallel for schedule(static)
  for (int job = 0; job < jobs; ++job) {
    const int i = job / g.in_channels, ci = job % g.in_channels;
    const Tensor3 &go = grad_outputs[i];
    const Tensor3 &x = inputs[i];
    const int To = go.frames, Fo = go.bands, Fp = padded[i].bands;
    std::vector<double> dst_plane(static_cast<size_t>(padded[i].frames) * Fp, 0.0);
    for (int co = 0; co < g.out_channels; ++co) {
      const double *gplane = go.plane(co).data();
      for (int kt = 0; kt < g.kernel_frames; ++kt)
        for (int kf = 0; kf < g.kernel_bands; ++kf) {
          const double wv = weights[WIndex(g, co, ci, kt, kf)];
          for (int t = 0; t < To; ++t) {
            double *dst = dst_plane.data() + static_cast<size_t>(t * st + kt) * Fp + kf;
            const double *grow = gplane + static_cast<size_t>(t) * Fo;
            for (int f = 0; f < Fo; ++f) dst[static_cast<size_t>(f) * sf] += wv * grow[f];
          }
        }
    }
    Tensor3 &gi = (*grad_inputs)[i];
    for (int t = 0; t < x.frames; ++t)
      std::copy_n(dst_plane.data() + static_cast<size_t>(t + g.pad_frames_before) * Fp + g.pad_bands_before,
                  x.bands, gi.data.data() + gi.index(ci, t, 0));
  }
}

void BackwardContiguous(const ConvGeometry &g, const std::vector<Tensor3> &inputs,
                        const std::vector<Tensor3> &phases, std::span<const double> weights,
                        const std::vector<Tensor3> &grad_outputs, std::vector<Tensor3> *grad_inputs,
                        std::span<double> grad_weights) {
  const int n = static_cast<int>(inputs.size());
  const int sf = g.stride_bands;
  const size_t taps = static_cast<size_t>(g.in_channels) * g.kernel_frames * g.kernel_bands;
  // Weight gradients: each output channel is owned by one thread and
  // accumulates over the batch in item order, per-tap partial sums over
  // L1-sized chunks in chunk order.
#pragma omp parallel
  {
    std::vector<double> wide, tap_sums;
#pragma omp for schedule(static)
    for (int co = 0; co < g.out_channels; ++co)
      for (int i = 0; i < n; ++i) {
        const Tensor3 &ph = phases[i];
        const int W = ph.bands;
        WideGrad(grad_outputs[i], co, W, &wide);
        const size_t L = wide.size();
        tap_sums.assign(taps, 0.0);
        for (size_t j0 = 0; j0 < L; j0 += kChunk) {
          const size_t len = std::min(kChunk, L - j0);
          const double *gg = wide.data() + j0;
          size_t tap = 0;
          for (int ci = 0; ci < g.in_channels; ++ci)
            for (int kt = 0; kt < g.kernel_frames; ++kt)
              for (int kf = 0; kf < g.kernel_bands; ++kf, ++tap) {
                const double *src = ph.data.data() + TapOffset(g, ph, ci, kt, kf) + j0;
                double s = 0.0;
#pragma omp simd reduction(+ : s)
                for (size_t j = 0; j < len; ++j) s += gg[j] * src[j];
                tap_sums[tap] += s;
              }
        }
        size_t tap = 0;
        for (int ci = 0; ci < g.in_channels; ++ci)
          for (int kt = 0; kt < g.kernel_frames; ++kt)
            for (int kf = 0; kf < g.kernel_bands; ++kf, ++tap)
              grad_weights[WIndex(g, co, ci, kt, kf)] += tap_sums[tap];
      }
  }
  if (!grad_inputs) return;
  // Input gradients: one (item, input channel) per job, scattered onto that
  // channel's phase planes with contiguous runs, then unfolded.
  const int jobs = n * g.in_channels;
#pragma omp parallel
  {
    std::vector<double> wide, dph;
#pragma omp for schedule(static)
    for (int job = 0; job < jobs; ++job) {
      const int i = job / g.in_channels, ci = job % g.in_channels;
      const Tensor3 &ph = phases[i];
      const int W = ph.bands;
      const size_t plane = static_cast<size_t>(ph.frames) * W;
      dph.assign(plane * sf, 0.0);
      for (int co = 0; co < g.out_channels; ++co) {
        WideGrad(grad_outputs[i], co, W, &wide);
        const size_t L = wide.size();
        for (int kt = 0; kt < g.kernel_frames; ++kt)
          for (int kf = 0; kf < g.kernel_bands; ++kf) {
            const double wv = weights[WIndex(g, co, ci, kt, kf)];
            double *dst = dph.data() + (kf % sf) * plane + static_cast<size_t>(kt) * W + kf / sf;
            const double *src = wide.data();
            for (size_t j = 0; j < L; ++j) dst[j] += wv * src[j];
          }
      }
      const Tensor3 &x = inputs[i];
      Tensor3 &gi = (*grad_inputs)[i];
      for (int t = 0; t < x.frames; ++t) {
        const size_t row = static_cast<size_t>(t + g.pad_frames_before) * W;
        double *out = gi.data.data() + gi.index(ci, t, 0);
        for (int f = 0; f < x.bands; ++f) {
          const int fp = f + g.pad_bands_before;
          out[f] = dph[(fp % sf) * plane + row + fp / sf];
        }
      }
    }
  }
}

}  // namespace

void ConvBackward(const ConvGeometry &g, const std::vector<Tensor3> &inputs,
                  std::span<const double> weights, const std::vector<Tensor3> &grad_outputs,
                  std::vector<Tensor3> *grad_inputs, std::span<double> grad_weights,
                  std::span<double> grad_bias) {
  const int n = static_cast<int>(inputs.size());
  if (grad_outputs.size() != inputs.size()) throw std::invalid_argument("conv batch size mismatch");
  std::vector<Tensor3> prepared(n);
  for (int i = 0; i < n; ++i) {
    g.Check(inputs[i]);
    prepared[i] = RowContiguous(g) ? Phases(g, Pad(g, inputs[i])) : Pad(g, inputs[i]);
  }
  if (n == 0) return;
  if (UseSpectral(g, inputs)) {
    BackwardSpectral(g, inputs, prepared, weights, grad_outputs, grad_inputs, grad_weights, grad_bias);
    return;
  }
  if (!grad_bias.empty()) {
#pragma omp parallel for schedule(static)
    for (int co = 0; co < g.out_channels; ++co)
      for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (double v : grad_outputs[i].plane(co)) s += v;
        grad_bias[co] += s;
      }
  }
  if (grad_inputs) {
    grad_inputs->resize(n);
    for (int i = 0; i < n; ++i)
      (*grad_inputs)[i] = Tensor3(inputs[i].channels, inputs[i].frames, inputs[i].bands);
  }
  if (RowContiguous(g))
    BackwardContiguous(g, inputs, prepared, weights, grad_outputs, grad_inputs, grad_weights);
  else
    BackwardStrided(g, inputs, prepared, weights, grad_outputs, grad_inputs, grad_weights);
}

}  // namespace strfnet
