// src/frontend.cc

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

#include "strfnet/frontend.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

#include "strfnet/fft.h"

namespace strfnet {

int FrontendConfig::WindowSamples(int sample_rate) const {
  return static_cast<int>(std::floor(window_ms * 1e-3 * sample_rate));
}

int FrontendConfig::HopSamples(int sample_rate) const {
  return static_cast<int>(std::lround(WindowSamples(sample_rate) * (1.0 - overlap_fraction)));
}

void FrontendConfig::Validate(int sample_rate) const {
  if (sample_rate <= 0) throw std::invalid_argument("sample_rate must be positive");
  if (!(overlap_fraction > 0.0 && overlap_fraction < 1.0))
    throw std::invalid_argument("overlap_fraction must lie in (0, 1)");
  if (n_mel_bands < 1) throw std::invalid_argument("n_mel_bands must be >= 1");
  if (!(log_floor > 0.0)) throw std::invalid_argument("log_floor must be positive");
  const int win = WindowSamples(sample_rate);
  if (win < 2) throw std::invalid_argument("window shorter than two samples");
  if (dft_size < win) throw std::invalid_argument("dft_size smaller than the window");
  if (HopSamples(sample_rate) < 1) throw std::invalid_argument("hop rounds to zero samples");
}

double HzToMel(double hz) { return 1127.0 * std::log1p(hz / 700.0); }
double MelToHz(double mel) { return 700.0 * std::expm1(mel / 1127.0); }

MelFilterbank ComputeMelFilterbank(int n_bands, int dft_size, int sample_rate) {
  MelFilterbank fb;
  fb.num_bands = n_bands;
  fb.num_bins = dft_size / 2 + 1;
  fb.weights.assign(static_cast<size_t>(n_bands) * fb.num_bins, 0.0);
  fb.centers_hz.resize(n_bands);

  const double mel_hi = HzToMel(0.5 * sample_rate);
  const double mel_step = mel_hi / (n_bands + 1);
  const double bin_hz = static_cast<double>(sample_rate) / dft_size;

  for (int b = 0; b < n_bands; ++b) {
    const double left = b * mel_step, center = (b + 1) * mel_step, right = (b + 2) * mel_step;
    fb.centers_hz[b] = MelToHz(center);
    double sum = 0.0;
    for (int k = 0; k < fb.num_bins; ++k) {
      const double mel = HzToMel(k * bin_hz);
      double w = 0.0;
      if (mel > left && mel <= center) w = (mel - left) / (center - left);
      else if (mel > center && mel < right) w = (right - mel) / (right - center);
      fb.weights[static_cast<size_t>(b) * fb.num_bins + k] = w;
      sum += w;
    }
    if (sum > 0.0) {
      for (int k = 0; k < fb.num_bins; ++k) fb.weights[static_cast<size_t>(b) * fb.num_bins + k] /= sum;
    } else {
      // Triangle narrower than a bin: collapse onto the nearest bin.
      int k = std::clamp(static_cast<int>(std::lround(fb.centers_hz[b] / bin_hz)), 0, fb.num_bins - 1);
      fb.weights[static_cast<size_t>(b) * fb.num_bins + k] = 1.0;
    }
  }
  return fb;
}

int NumFrames(size_t length, int window, int hop) {
  if (length < static_cast<size_t>(window)) return 0;
  return static_cast<int>((length - window) / hop) + 1;
}

Spectrogram MelPowerSpectrogram(const Waveform &wave, const FrontendConfig &cfg) {
  cfg.Validate(wave.sample_rate);
  const int win = cfg.WindowSamples(wave.sample_rate);
  const int hop = cfg.HopSamples(wave.sample_rate);
  if (wave.samples.size() < static_cast<size_t>(win))
    throw std::invalid_argument("waveform has " + std::to_string(wave.samples.size()) +
                                " samples, shorter than one " + std::to_string(win) +
                                "-sample window");
  for (double s : wave.samples)
    if (!std::isfinite(s)) throw std::invalid_argument("waveform contains non-finite samples");

  const MelFilterbank fb = ComputeMelFilterbank(cfg.n_mel_bands, cfg.dft_size, wave.sample_rate);
  std::vector<double> window(win);
  for (int n = 0; n < win; ++n)
    window[n] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * n / (win - 1));

  Spectrogram spec;
  spec.num_frames = NumFrames(wave.samples.size(), win, hop);
  spec.num_bands = cfg.n_mel_bands;
  spec.values.assign(static_cast<size_t>(spec.num_frames) * spec.num_bands, 0.0);
  spec.frame_rate_hz = static_cast<double>(wave.sample_rate) / hop;
  spec.band_centers_hz = fb.centers_hz;

  RealFft fft(cfg.dft_size);
  std::vector<double> frame(win);
  std::vector<std::complex<double>> bins;
  std::vector<double> power(fb.num_bins);
  for (int t = 0; t < spec.num_frames; ++t) {
    const double *src = wave.samples.data() + static_cast<size_t>(t) * hop;
    for (int n = 0; n < win; ++n) frame[n] = src[n] * window[n];
    fft.Forward(frame, &bins);
    for (int k = 0; k < fb.num_bins; ++k) power[k] = std::norm(bins[k]);
    for (int b = 0; b < spec.num_bands; ++b) {
      const double *w = fb.weights.data() + static_cast<size_t>(b) * fb.num_bins;
      double e = 0.0;
      for (int k = 0; k < fb.num_bins; ++k) e += w[k] * power[k];
      spec.at(t, b) = e;
    }
  }
  return spec;
}

Spectrogram LogMelSpectrogram(const Waveform &wave, const FrontendConfig &cfg) {
  Spectrogram spec = MelPowerSpectrogram(wave, cfg);
  for (double &v : spec.values) v = std::log(std::max(v, cfg.log_floor));
  return spec;
}

Spectrogram NormalizeSegment(const Spectrogram &spec) {
  if (spec.num_frames < 2)
    throw std::invalid_argument("normalization needs at least two frames");
  Spectrogram out = spec;
  const double n = spec.num_frames;
  for (int b = 0; b < spec.num_bands; ++b) {
    double mean = 0.0;
    for (int t = 0; t < spec.num_frames; ++t) mean += spec.at(t, b);
    mean /= n;
    double var = 0.0;
    for (int t = 0; t < spec.num_frames; ++t) {
      double d = spec.at(t, b) - mean;
      var += d * d;
    }
    const double sd = std::sqrt(var / n);
    // Relative guard: bands that are constant up to rounding count as constant.
    const bool constant = !(sd > 1e-12 * std::max(1.0, std::abs(mean)));
    for (int t = 0; t < spec.num_frames; ++t)
      out.at(t, b) = constant ? 0.0 : (spec.at(t, b) - mean) / sd;
  }
  return out;
}

double ChannelsPerOctave(std::span<const double> band_centers_hz, int sample_rate) {
  const double lo = 500.0, hi = 0.5 * sample_rate;
  if (hi <= lo) throw std::invalid_argument("Nyquist must exceed 500 Hz");
  int count = 0;
  for (double c : band_centers_hz)
    if (c >= lo && c <= hi) ++count;
  if (count == 0) throw std::invalid_argument("no band centers above 500 Hz");
  return count / std::log2(hi / lo);
}

void WriteSpectrogramCsv(const Spectrogram &spec, std::ostream &os) {
  os.precision(9);
  for (int t = 0; t < spec.num_frames; ++t) {
    for (int b = 0; b < spec.num_bands; ++b) {
      if (b) os << ',';
      os << spec.at(t, b);
    }
    os << '\n';
  }
}

}  // namespace strfnet
