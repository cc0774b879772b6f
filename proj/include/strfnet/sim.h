// include/strfnet/sim.h

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

#ifndef STRFNET_SIM_H_
#define STRFNET_SIM_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "strfnet/frontend.h"
#include "strfnet/metrics.h"
#include "strfnet/random.h"

namespace strfnet {

constexpr int kSimSampleRate = 11025;

enum class DistractorKind { kBroadcast, kTraffic, kMusic };

const char *DistractorName(DistractorKind kind);
// Throws for names other than broadcast_proxy, traffic_noise, music_proxy.
DistractorKind DistractorFromName(const std::string &name);

// Harmonic source with a random-walk fundamental in 100-250 Hz, syllable-rate
// amplitude modulation (2-8 Hz) and a white noise floor. RMS 0.1.
Waveform SynthLive(double duration_s, RandomSource *rng, int sample_rate = kSimSampleRate);

// broadcast_proxy: SynthLive played through a small room and a 300-3400 Hz
// channel. traffic_noise: low-passed noise with slow swells. music_proxy:
// sustained harmonic tones with vibrato. RMS 0.1.
Waveform SynthDistractor(DistractorKind kind, double duration_s, RandomSource *rng,
                         int sample_rate = kSimSampleRate);

// The fixed playback channel used by broadcast_proxy, without the room.
std::vector<double> PlaybackBandpass(int sample_rate);

double MeanPower(const std::vector<double> &x);
// 10 log10(P_target / P_noise) over the whole signals.
double GlobalSnrDb(const std::vector<double> &target, const std::vector<double> &noise);
// Gain g such that GlobalSnrDb(target, g * noise) == snr_db.
double NoiseGainForSnr(const Waveform &target, const Waveform &noise, double snr_db);
// target + g * noise with g from NoiseGainForSnr.
Waveform MixAtSnr(const Waveform &target, const Waveform &noise, double snr_db);

struct Interval {
  double start_s = 0.0;
  double end_s = 0.0;
  std::string cls;  // "live", a distractor name, or "silence"
};

struct SessionTimeline {
  std::vector<Interval> intervals;  // sorted by start time
  double total_duration_s = 0.0;
};

struct SessionConfig {
  double duration_s = 600.0;
  double live_fraction = 0.13;
  double min_utterance_s = 3.0;
  double max_utterance_s = 15.0;
  // Chance that an utterance may coincide with an active distractor; the
  // distractor is muted under the others.
  double overlap_probability = 0.5;
  double distractor_min_s = 20.0;
  double distractor_max_s = 90.0;
  double distractor_gap_min_s = 2.0;
  double distractor_gap_max_s = 15.0;
  // Live-over-distractor power ratio, drawn per session, measured over the
  // samples where each track is active.
  double snr_min_db = 0.0;
  double snr_max_db = 20.0;
  double noise_floor_rms = 1e-4;
  int sample_rate = kSimSampleRate;

  void Validate() const;
};

struct Session {
  Waveform wave;
  SessionTimeline timeline;
  double snr_db = 0.0;
};

// Throws when the live fraction is outside (0, 1) or cannot be realized
// with utterances of the configured lengths.
Session BuildSession(const SessionConfig &config, RandomSource *rng);

// Seconds of live speech inside [start_s, end_s).
double LiveOverlapSeconds(const SessionTimeline &timeline, double start_s, double end_s);
double LiveOccupancy(const SessionTimeline &timeline);

// Contiguous segments from time 0; the partial tail is dropped. A segment is
// live iff its live overlap fraction is >= live_overlap_threshold.
ScoredSegments SegmentSession(const SessionTimeline &timeline, double segment_s = 5.0,
                              double live_overlap_threshold = 0.5);

// First line {"total_duration_s": ...}, then one interval per line.
void WriteTimelineJsonl(const SessionTimeline &timeline, std::ostream &os);
SessionTimeline ReadTimelineJsonl(std::istream &is);
void WriteTimelineFile(const SessionTimeline &timeline, const std::string &path);
SessionTimeline ReadTimelineFile(const std::string &path);

}  // namespace strfnet

#endif  // STRFNET_SIM_H_
