// include/strfnet/frontend.h

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

#ifndef STRFNET_FRONTEND_H_
#define STRFNET_FRONTEND_H_

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace strfnet {

struct Waveform {
  std::vector<double> samples;
  int sample_rate = 11025;

  double DurationSeconds() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

struct FrontendConfig {
  double window_ms = 20.0;
  double overlap_fraction = 0.5;
  int dft_size = 512;
  int n_mel_bands = 40;
  double log_floor = 1e-10;

  // 20 ms at 11025 Hz is 220.5 samples; the window is rounded down and the
  // hop taken as an exact fraction of it, giving 220 / 110.
  int WindowSamples(int sample_rate) const;
  int HopSamples(int sample_rate) const;
  void Validate(int sample_rate) const;
};

// Frames x bands, row-major.
struct Spectrogram {
  int num_frames = 0;
  int num_bands = 0;
  std::vector<double> values;
  double frame_rate_hz = 0.0;
  std::vector<double> band_centers_hz;

  double &at(int frame, int band) { return values[static_cast<size_t>(frame) * num_bands + band]; }
  double at(int frame, int band) const { return values[static_cast<size_t>(frame) * num_bands + band]; }
};

// Triangular filters on the mel scale, rows normalized to unit sum.
// Row-major n_bands x (dft_size/2 + 1).
struct MelFilterbank {
  int num_bands = 0;
  int num_bins = 0;
  std::vector<double> weights;
  std::vector<double> centers_hz;

  double at(int band, int bin) const { return weights[static_cast<size_t>(band) * num_bins + bin]; }
};

double HzToMel(double hz);
double MelToHz(double mel);
MelFilterbank ComputeMelFilterbank(int n_bands, int dft_size, int sample_rate);

// Number of frames for a signal of |length| samples.
int NumFrames(size_t length, int window, int hop);

// Mel-weighted power per frame, before the log. Useful for energy checks.
Spectrogram MelPowerSpectrogram(const Waveform &wave, const FrontendConfig &cfg);
Spectrogram LogMelSpectrogram(const Waveform &wave, const FrontendConfig &cfg);

// Per-band z-scoring across the frames of one segment. Constant bands map to
// all zeros.
Spectrogram NormalizeSegment(const Spectrogram &spec);

// Average count of bands per octave over band centers in [500 Hz, Nyquist].
double ChannelsPerOctave(std::span<const double> band_centers_hz, int sample_rate);

// One frame per line, bands comma-separated.
void WriteSpectrogramCsv(const Spectrogram &spec, std::ostream &os);

}  // namespace strfnet

#endif  // STRFNET_FRONTEND_H_
