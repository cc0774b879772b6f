// src/sim.cc

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

#include "strfnet/sim.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "json.hpp"
#include "strfnet/fft.h"

namespace strfnet {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kTargetRms = 0.1;

size_t SampleCount(double duration_s, int sample_rate) {
  if (!(duration_s > 0.0) || !std::isfinite(duration_s))
    throw std::invalid_argument("duration must be positive and finite");
  if (sample_rate <= 0) throw std::invalid_argument("sample rate must be positive");
  const long n = std::lround(duration_s * sample_rate);
  if (n < 1) throw std::invalid_argument("duration shorter than one sample");
  return static_cast<size_t>(n);
}

void ScaleToRms(std::vector<double> *x, double rms) {
  const double p = MeanPower(*x);
  if (p <= 0.0) return;
  const double g = rms / std::sqrt(p);
  for (double &v : *x) v *= g;
}

double Reflect(double v, double lo, double hi) {
  while (v < lo || v > hi) v = v < lo ? 2 * lo - v : 2 * hi - v;
  return v;
}

// Slow random contour in [0, 1]: knots every |knot_s| seconds, raised-cosine
// interpolation between them.
std::vector<double> SmoothContour(size_t n, int sample_rate, double knot_s, RandomSource *rng) {
  const size_t step = std::max<size_t>(1, static_cast<size_t>(knot_s * sample_rate));
  std::vector<double> knots(n / step + 2);
  for (double &k : knots) k = rng->Uniform();
  std::vector<double> out(n);
  for (size_t i = 0; i < n; ++i) {
    const size_t k = i / step;
    const double u = static_cast<double>(i % step) / step;
    const double w = 0.5 - 0.5 * std::cos(std::numbers::pi * u);
    out[i] = knots[k] + w * (knots[k + 1] - knots[k]);
  }
  return out;
}

void Fade(std::vector<double> *x, size_t len) {
  const size_t n = x->size();
  len = std::min(len, n / 4);
  for (size_t i = 0; i < len; ++i) {
    const double g = 0.5 - 0.5 * std::cos(std::numbers::pi * (i + 0.5) / len);
    (*x)[i] *= g;
    (*x)[n - 1 - i] *= g;
  }
}

// Same-length output of a linear FIR whose group delay is (taps-1)/2.
std::vector<double> FilterCentered(const std::vector<double> &x, const std::vector<double> &h) {
  const std::vector<double> full = FftConvolve(x, h);
  const size_t delay = (h.size() - 1) / 2;
  return std::vector<double>(full.begin() + delay, full.begin() + delay + x.size());
}

Waveform Broadcast(double duration_s, RandomSource *rng, int sr) {
  Waveform w = SynthLive(duration_s, rng, sr);
  // Small room: direct path plus an exponentially decaying noise tail.
  const double rt60 = 0.3;
  std::vector<double> ir(static_cast<size_t>(0.25 * sr), 0.0);
  ir[0] = 1.0;
  for (size_t i = static_cast<size_t>(0.005 * sr); i < ir.size(); ++i)
    ir[i] = 0.25 * rng->Normal() * std::exp(-6.907755 * i / (rt60 * sr));
  std::vector<double> wet = FftConvolve(w.samples, ir);
  wet.resize(w.samples.size());
  w.samples = FilterCentered(wet, PlaybackBandpass(sr));
  ScaleToRms(&w.samples, kTargetRms);
  return w;
}

Waveform Traffic(double duration_s, RandomSource *rng, int sr) {
  const size_t n = SampleCount(duration_s, sr);
  const size_t warm = static_cast<size_t>(sr);
  const double alpha = 1.0 - std::exp(-kTwoPi * 120.0 / sr);
  double y1 = 0.0, y2 = 0.0;
  std::vector<double> out(n);
  const std::vector<double> swell = SmoothContour(n, sr, 2.0, rng);
  for (size_t i = 0; i < warm + n; ++i) {
    y1 += alpha * (rng->Normal() - y1);
    y2 += alpha * (y1 - y2);
    if (i >= warm) out[i - warm] = y2 * (0.4 + 0.6 * swell[i - warm]);
  }
  ScaleToRms(&out, kTargetRms);
  return {std::move(out), sr};
}

Waveform Music(double duration_s, RandomSource *rng, int sr) {
  const size_t n = SampleCount(duration_s, sr);
  std::vector<double> out(n, 0.0);
  const int voices = static_cast<int>(rng->UniformInt(2, 4));
  for (int v = 0; v < voices; ++v) {
    const double vib_rate = rng->Uniform(4.5, 6.5);
    const double vib_depth = rng->Uniform(0.003, 0.008);
    const double vib_phase = rng->Uniform(0.0, kTwoPi);
    size_t pos = 0;
    double phase = 0.0;
    while (pos < n) {
      const size_t len = std::min(n - pos, static_cast<size_t>(rng->Uniform(0.4, 1.5) * sr) + 1);
      const double midi = static_cast<double>(rng->UniformInt(48, 76));
      const double f = 440.0 * std::pow(2.0, (midi - 69.0) / 12.0);
      const double decay = rng->Uniform(0.2, 1.0);
      const size_t attack = static_cast<size_t>(0.02 * sr);
      const int harmonics = std::max(1, std::min(5, static_cast<int>(0.45 * sr / f)));
      for (size_t i = 0; i < len; ++i) {
        const double t = static_cast<double>(pos + i) / sr;
        const double inst = f * (1.0 + vib_depth * std::sin(kTwoPi * vib_rate * t + vib_phase));
        phase = std::fmod(phase + kTwoPi * inst / sr, kTwoPi);
        double env = std::exp(-decay * static_cast<double>(i) / sr);
        if (i < attack) env *= static_cast<double>(i) / attack;
        double s = 0.0;
        for (int k = 1; k <= harmonics; ++k) s += std::sin(k * phase) / k;
        out[pos + i] += env * s;
      }
      pos += len;
    }
  }
  ScaleToRms(&out, kTargetRms);
  return {std::move(out), sr};
}

struct SampleSpan {
  size_t begin, end;
  int kind;  // DistractorKind, or -1 for live
};

// Removes |holes| (sorted, disjoint) from |spans| (sorted, disjoint).
std::vector<SampleSpan> Subtract(const std::vector<SampleSpan> &spans, const std::vector<SampleSpan> &holes) {
  std::vector<SampleSpan> out;
  for (const SampleSpan &s : spans) {
    size_t cur = s.begin;
    for (const SampleSpan &h : holes) {
      if (h.end <= cur || h.begin >= s.end) continue;
      if (h.begin > cur) out.push_back({cur, h.begin, s.kind});
      cur = std::max(cur, h.end);
    }
    if (cur < s.end) out.push_back({cur, s.end, s.kind});
  }
  return out;
}
}  // namespace

const char *DistractorName(DistractorKind kind) {
  switch (kind) {
    case DistractorKind::kBroadcast: return "broadcast_proxy";
    case DistractorKind::kTraffic: return "traffic_noise";
    case DistractorKind::kMusic: return "music_proxy";
  }
  return "?";
}

DistractorKind DistractorFromName(const std::string &name) {
  if (name == "broadcast_proxy") return DistractorKind::kBroadcast;
  if (name == "traffic_noise") return DistractorKind::kTraffic;
  if (name == "music_proxy") return DistractorKind::kMusic;
  throw std::invalid_argument("unknown distractor kind: " + name);
}

Waveform SynthLive(double duration_s, RandomSource *rng, int sr) {
  const size_t n = SampleCount(duration_s, sr);
  const size_t block = static_cast<size_t>(sr / 100);  // 10 ms control rate
  double f0 = rng->Uniform(100.0, 250.0);
  double f1 = rng->Uniform(300.0, 800.0);
  double f2 = rng->Uniform(900.0, 2500.0);
  const double am_rate = rng->Uniform(2.0, 8.0);
  const double am_phase = rng->Uniform(0.0, kTwoPi);
  const double am_jitter = rng->Uniform(0.0, 0.3);

  std::vector<double> out(n);
  std::vector<double> amp;
  double phase = 0.0, am_acc = am_phase;
  for (size_t start = 0; start < n; start += block) {
    f0 = Reflect(f0 + rng->Normal(0.0, 2.0), 100.0, 250.0);
    f1 = Reflect(f1 + rng->Normal(0.0, 15.0), 300.0, 800.0);
    f2 = Reflect(f2 + rng->Normal(0.0, 30.0), 900.0, 2500.0);
    const double rate = am_rate * (1.0 + am_jitter * rng->Normal(0.0, 0.3));
    const int harmonics = static_cast<int>(0.48 * sr / f0);
    amp.resize(harmonics);
    for (int k = 1; k <= harmonics; ++k) {
      const double f = k * f0;
      const double g = 1.0 + 4.0 * std::exp(-std::pow((f - f1) / 150.0, 2)) +
                       2.5 * std::exp(-std::pow((f - f2) / 200.0, 2));
      amp[k - 1] = g / std::sqrt(static_cast<double>(k));
    }
    const size_t stop = std::min(n, start + block);
    const double dphi = kTwoPi * f0 / sr;
    const std::complex<double> z(std::cos(dphi), std::sin(dphi));
    std::complex<double> base(std::cos(phase), std::sin(phase));
    for (size_t i = start; i < stop; ++i) {
      std::complex<double> w = base;
      double s = 0.0;
      for (int k = 0; k < harmonics; ++k) {
        s += amp[k] * w.imag();
        w *= base;
      }
      am_acc += kTwoPi * rate / sr;
      out[i] = s * 0.5 * (1.0 + std::sin(am_acc));
      base *= z;
    }
    phase = std::arg(base);
  }
  ScaleToRms(&out, kTargetRms);
  for (double &v : out) v += 0.003 * rng->Normal();
  return {std::move(out), sr};
}

Waveform SynthDistractor(DistractorKind kind, double duration_s, RandomSource *rng, int sr) {
  SampleCount(duration_s, sr);
  switch (kind) {
    case DistractorKind::kBroadcast: return Broadcast(duration_s, rng, sr);
    case DistractorKind::kTraffic: return Traffic(duration_s, rng, sr);
    case DistractorKind::kMusic: return Music(duration_s, rng, sr);
  }
  throw std::invalid_argument("unknown distractor kind");
}

std::vector<double> PlaybackBandpass(int sr) {
  // Blackman-windowed sinc, 300-3400 Hz.
  const int taps = 255;
  const double lo = 300.0 / sr, hi = 3400.0 / sr;
  std::vector<double> h(taps);
  const int mid = taps / 2;
  for (int i = 0; i < taps; ++i) {
    const int m = i - mid;
    double ideal;
    if (m == 0) {
      ideal = 2.0 * (hi - lo);
    } else {
      const double pm = std::numbers::pi * m;
      ideal = (std::sin(kTwoPi * hi * m) - std::sin(kTwoPi * lo * m)) / pm;
    }
    const double w = 0.42 - 0.5 * std::cos(kTwoPi * i / (taps - 1)) + 0.08 * std::cos(2 * kTwoPi * i / (taps - 1));
    h[i] = ideal * w;
  }
  return h;
}

double MeanPower(const std::vector<double> &x) {
  if (x.empty()) return 0.0;
  double s = 0.0;
  for (double v : x) s += v * v;
  return s / x.size();
}

double GlobalSnrDb(const std::vector<double> &target, const std::vector<double> &noise) {
  return 10.0 * std::log10(MeanPower(target) / MeanPower(noise));
}

double NoiseGainForSnr(const Waveform &target, const Waveform &noise, double snr_db) {
  if (target.samples.size() != noise.samples.size()) throw std::invalid_argument("mix inputs differ in length");
  if (target.sample_rate != noise.sample_rate) throw std::invalid_argument("mix inputs differ in sample rate");
  if (!std::isfinite(snr_db)) throw std::invalid_argument("SNR must be finite");
  const double pt = MeanPower(target.samples), pn = MeanPower(noise.samples);
  if (!(pt > 0.0)) throw std::invalid_argument("target has zero power");
  if (!(pn > 0.0)) throw std::invalid_argument("noise has zero power");
  return std::sqrt(pt / (pn * std::pow(10.0, snr_db / 10.0)));
}

Waveform MixAtSnr(const Waveform &target, const Waveform &noise, double snr_db) {
  const double g = NoiseGainForSnr(target, noise, snr_db);
  Waveform out = target;
  for (size_t i = 0; i < out.samples.size(); ++i) out.samples[i] += g * noise.samples[i];
  return out;
}

void SessionConfig::Validate() const {
  if (!(duration_s > 0.0)) throw std::invalid_argument("session duration must be positive");
  if (!(live_fraction > 0.0 && live_fraction < 1.0)) throw std::invalid_argument("live_fraction must lie in (0, 1)");
  if (!(min_utterance_s > 0.0 && max_utterance_s >= min_utterance_s))
    throw std::invalid_argument("invalid utterance length range");
  if (!(overlap_probability >= 0.0 && overlap_probability <= 1.0))
    throw std::invalid_argument("overlap_probability must lie in [0, 1]");
  if (!(distractor_min_s > 0.0 && distractor_max_s >= distractor_min_s && distractor_gap_min_s >= 0.0 &&
        distractor_gap_max_s >= distractor_gap_min_s))
    throw std::invalid_argument("invalid distractor timing");
  if (!(snr_max_db >= snr_min_db) || !std::isfinite(snr_min_db) || !std::isfinite(snr_max_db))
    throw std::invalid_argument("invalid SNR range");
  if (sample_rate <= 0) throw std::invalid_argument("sample rate must be positive");
}

Session BuildSession(const SessionConfig &cfg, RandomSource *rng) {
  cfg.Validate();
  const int sr = cfg.sample_rate;
  const size_t n = SampleCount(cfg.duration_s, sr);
  const size_t live_total = static_cast<size_t>(std::llround(cfg.live_fraction * n));
  const size_t min_len = static_cast<size_t>(std::llround(cfg.min_utterance_s * sr));
  const size_t max_len = static_cast<size_t>(std::llround(cfg.max_utterance_s * sr));
  if (live_total < min_len)
    throw std::invalid_argument("live fraction too small for one utterance of the minimum length");

  // Utterance lengths summing exactly to live_total.
  std::vector<size_t> lens;
  size_t sum = 0;
  while (sum < live_total) {
    size_t len = static_cast<size_t>(rng->Uniform(cfg.min_utterance_s, cfg.max_utterance_s) * sr);
    len = std::clamp(len, min_len, max_len);
    len = std::min(len, live_total - sum);
    lens.push_back(len);
    sum += len;
  }
  if (lens.back() < min_len) {
    size_t spare = lens.back();
    lens.pop_back();
    for (size_t &l : lens) {
      const size_t take = std::min(spare, max_len - l);
      l += take;
      spare -= take;
    }
    if (spare > 0 || lens.empty())
      throw std::invalid_argument("live fraction cannot be realized with the utterance length range");
  }
  const size_t free = n - live_total;
  std::vector<double> weights(lens.size() + 1);
  double wsum = 0.0;
  for (double &w : weights) wsum += (w = -std::log(1.0 - rng->Uniform()));
  std::vector<size_t> gaps(weights.size());
  size_t used = 0;
  for (size_t i = 0; i < gaps.size(); ++i) used += (gaps[i] = static_cast<size_t>(weights[i] / wsum * free));
  gaps.back() += free - used;

  std::vector<SampleSpan> live, muted;
  size_t t = 0;
  for (size_t i = 0; i < lens.size(); ++i) {
    t += gaps[i];
    live.push_back({t, t + lens[i], -1});
    if (!rng->Bernoulli(cfg.overlap_probability)) muted.push_back(live.back());
    t += lens[i];
  }

  // Distractor activity, alternating chunks and gaps, minus the muted spans.
  std::vector<SampleSpan> active;
  t = rng->Bernoulli(0.5) ? 0 : static_cast<size_t>(rng->Uniform(cfg.distractor_gap_min_s, cfg.distractor_gap_max_s) * sr);
  while (t < n) {
    const size_t len = static_cast<size_t>(rng->Uniform(cfg.distractor_min_s, cfg.distractor_max_s) * sr) + 1;
    const int kind = static_cast<int>(rng->UniformInt(0, 2));
    active.push_back({t, std::min(n, t + len), kind});
    t += len + static_cast<size_t>(rng->Uniform(cfg.distractor_gap_min_s, cfg.distractor_gap_max_s) * sr);
  }
  const std::vector<SampleSpan> distractors = Subtract(active, muted);

  const size_t fade = static_cast<size_t>(0.01 * sr);
  std::vector<double> live_track(n, 0.0), dist_track(n, 0.0);
  double live_energy = 0.0, dist_energy = 0.0;
  size_t live_samples = 0, dist_samples = 0;
  for (const SampleSpan &s : live) {
    Waveform w = SynthLive(static_cast<double>(s.end - s.begin) / sr, rng, sr);
    w.samples.resize(s.end - s.begin);
    Fade(&w.samples, fade);
    std::copy(w.samples.begin(), w.samples.end(), live_track.begin() + s.begin);
    for (double v : w.samples) live_energy += v * v;
    live_samples += w.samples.size();
  }
  for (const SampleSpan &s : distractors) {
    Waveform w = SynthDistractor(static_cast<DistractorKind>(s.kind), static_cast<double>(s.end - s.begin) / sr, rng, sr);
    w.samples.resize(s.end - s.begin);
    Fade(&w.samples, fade);
    std::copy(w.samples.begin(), w.samples.end(), dist_track.begin() + s.begin);
    for (double v : w.samples) dist_energy += v * v;
    dist_samples += w.samples.size();
  }

  Session session;
  session.snr_db = rng->Uniform(cfg.snr_min_db, cfg.snr_max_db);
  double gain = 1.0;
  if (dist_samples > 0 && dist_energy > 0.0) {
    const double pl = live_energy / live_samples, pd = dist_energy / dist_samples;
    gain = std::sqrt(pl / (pd * std::pow(10.0, session.snr_db / 10.0)));
  }
  session.wave.sample_rate = sr;
  session.wave.samples.resize(n);
  double peak = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double v = live_track[i] + gain * dist_track[i] + cfg.noise_floor_rms * rng->Normal();
    session.wave.samples[i] = v;
    peak = std::max(peak, std::abs(v));
  }
  if (peak > 0.99)
    for (double &v : session.wave.samples) v *= 0.99 / peak;

  // Timeline: live and distractor tracks, plus silence where neither plays.
  SessionTimeline &tl = session.timeline;
  tl.total_duration_s = static_cast<double>(n) / sr;
  std::vector<SampleSpan> all(live);
  all.insert(all.end(), distractors.begin(), distractors.end());
  std::sort(all.begin(), all.end(), [](const SampleSpan &a, const SampleSpan &b) {
    return a.begin != b.begin ? a.begin < b.begin : a.kind < b.kind;
  });
  size_t covered = 0;
  for (const SampleSpan &s : all) {
    if (s.begin > covered)
      tl.intervals.push_back({static_cast<double>(covered) / sr, static_cast<double>(s.begin) / sr, "silence"});
    tl.intervals.push_back({static_cast<double>(s.begin) / sr, static_cast<double>(s.end) / sr,
                            s.kind < 0 ? "live" : DistractorName(static_cast<DistractorKind>(s.kind))});
    covered = std::max(covered, s.end);
  }
  if (covered < n)
    tl.intervals.push_back({static_cast<double>(covered) / sr, static_cast<double>(n) / sr, "silence"});
  return session;
}

double LiveOverlapSeconds(const SessionTimeline &timeline, double start_s, double end_s) {
  double total = 0.0;
  for (const Interval &iv : timeline.intervals) {
    if (iv.cls != "live") continue;
    const double lo = std::max(start_s, iv.start_s), hi = std::min(end_s, iv.end_s);
    if (hi > lo) total += hi - lo;
  }
  return total;
}

double LiveOccupancy(const SessionTimeline &timeline) {
  if (!(timeline.total_duration_s > 0.0)) return 0.0;
  return LiveOverlapSeconds(timeline, 0.0, timeline.total_duration_s) / timeline.total_duration_s;
}

ScoredSegments SegmentSession(const SessionTimeline &timeline, double segment_s, double threshold) {
  if (!(segment_s > 0.0)) throw std::invalid_argument("segment length must be positive");
  if (!(threshold > 0.0 && threshold <= 1.0)) throw std::invalid_argument("live overlap threshold must lie in (0, 1]");
  const long count = static_cast<long>(std::floor(timeline.total_duration_s / segment_s + 1e-9));
  ScoredSegments out;
  for (long i = 0; i < count; ++i) {
    ScoredSegment s;
    s.start_s = i * segment_s;
    s.end_s = (i + 1) * segment_s;
    s.live = LiveOverlapSeconds(timeline, s.start_s, s.end_s) / segment_s >= threshold - 1e-12;
    out.push_back(s);
  }
  return out;
}

void WriteTimelineJsonl(const SessionTimeline &timeline, std::ostream &os) {
  nlohmann::ordered_json head;
  head["total_duration_s"] = timeline.total_duration_s;
  os << head.dump() << '\n';
  for (const Interval &iv : timeline.intervals) {
    nlohmann::ordered_json j;
    j["start_s"] = iv.start_s;
    j["end_s"] = iv.end_s;
    j["class"] = iv.cls;
    os << j.dump() << '\n';
  }
}

SessionTimeline ReadTimelineJsonl(std::istream &is) {
  SessionTimeline tl;
  std::string line;
  bool have_total = false;
  while (std::getline(is, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const nlohmann::json j = nlohmann::json::parse(line);
    if (j.contains("total_duration_s")) {
      tl.total_duration_s = j["total_duration_s"].get<double>();
      have_total = true;
      continue;
    }
    Interval iv;
    iv.start_s = j.at("start_s").get<double>();
    iv.end_s = j.at("end_s").get<double>();
    iv.cls = j.at("class").get<std::string>();
    if (!(iv.end_s > iv.start_s)) throw std::invalid_argument("timeline interval with end <= start");
    tl.intervals.push_back(iv);
  }
  if (!have_total) {
    for (const Interval &iv : tl.intervals) tl.total_duration_s = std::max(tl.total_duration_s, iv.end_s);
  }
  return tl;
}

void WriteTimelineFile(const SessionTimeline &timeline, const std::string &path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  WriteTimelineJsonl(timeline, os);
}

SessionTimeline ReadTimelineFile(const std::string &path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  return ReadTimelineJsonl(is);
}

}  // namespace strfnet
