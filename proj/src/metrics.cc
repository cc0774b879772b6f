// src/metrics.cc

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

#include "strfnet/metrics.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace strfnet {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

nlohmann::json ThresholdJson(double t) {
  if (std::isinf(t)) return t > 0 ? "inf" : "-inf";
  return t;
}

// Rates for the postprocessed decisions at one threshold.
OperatingPoint PointAt(const ScoredSegments &scored, double threshold, int max_gap, double live_total,
                       double distractor_total) {
  const DecisionSeries d = PostprocessBySeries(scored, ThresholdDecisions(scored, threshold), max_gap);
  double missed = 0.0, accepted = 0.0;
  for (size_t i = 0; i < scored.size(); ++i) {
    if (scored[i].live && !d[i]) missed += scored[i].Duration();
    if (!scored[i].live && d[i]) accepted += scored[i].Duration();
  }
  OperatingPoint p;
  p.threshold = threshold;
  p.p_miss = missed / live_total;
  p.p_fa = accepted / distractor_total;
  p.dcf = 0.75 * p.p_miss + 0.25 * p.p_fa;
  return p;
}

void ClassTotals(const ScoredSegments &scored, double *live, double *distractor) {
  *live = 0.0;
  *distractor = 0.0;
  for (const ScoredSegment &s : scored) (s.live ? *live : *distractor) += s.Duration();
}
}  // namespace

Rates DurationNormalizedRates(const DecisionSeries &decisions, const ScoredSegments &truth) {
  if (decisions.size() != truth.size())
    throw std::invalid_argument("decision and truth series differ in length");
  double live = 0.0, distractor = 0.0, missed = 0.0, accepted = 0.0;
  for (size_t i = 0; i < truth.size(); ++i) {
    const double d = truth[i].Duration();
    if (!(d > 0.0)) throw std::invalid_argument("segment with non-positive duration");
    if (truth[i].live) {
      live += d;
      if (!decisions[i]) missed += d;
    } else {
      distractor += d;
      if (decisions[i]) accepted += d;
    }
  }
  Rates r;
  r.miss_defined = live > 0.0;
  r.fa_defined = distractor > 0.0;
  r.p_miss = r.miss_defined ? missed / live : std::nan("");
  r.p_fa = r.fa_defined ? accepted / distractor : std::nan("");
  return r;
}

double Dcf(double p_miss, double p_fa) {
  if (!(p_miss >= 0.0 && p_miss <= 1.0) || !(p_fa >= 0.0 && p_fa <= 1.0))
    throw std::invalid_argument("DCF rates must lie in [0, 1]");
  return 0.75 * p_miss + 0.25 * p_fa;
}

double Dcf(const Rates &rates) {
  if (!rates.miss_defined || !rates.fa_defined)
    throw std::invalid_argument("DCF undefined: truth lacks one of the classes");
  return Dcf(rates.p_miss, rates.p_fa);
}

DecisionSeries ThresholdDecisions(const ScoredSegments &scored, double threshold) {
  DecisionSeries d(scored.size());
  for (size_t i = 0; i < scored.size(); ++i) d[i] = scored[i].score >= threshold ? 1 : 0;
  return d;
}

DecisionSeries Postprocess(const DecisionSeries &decisions, int max_gap) {
  if (max_gap < 0) throw std::invalid_argument("max_gap must be >= 0");
  DecisionSeries out(decisions);
  const size_t n = decisions.size();
  size_t i = 0;
  while (i < n) {
    if (decisions[i]) {
      ++i;
      continue;
    }
    size_t j = i;
    while (j < n && !decisions[j]) ++j;
    // Run [i, j) of distractor decisions.
    if (i > 0 && j < n && j - i <= static_cast<size_t>(max_gap))
      std::fill(out.begin() + i, out.begin() + j, 1);
    i = j;
  }
  return out;
}

DecisionSeries PostprocessBySeries(const ScoredSegments &scored, const DecisionSeries &decisions, int max_gap) {
  if (decisions.size() != scored.size()) throw std::invalid_argument("decision and segment series differ in length");
  DecisionSeries out;
  out.reserve(decisions.size());
  size_t i = 0;
  while (i < scored.size()) {
    size_t j = i;
    while (j < scored.size() && scored[j].series == scored[i].series) ++j;
    const DecisionSeries part =
        Postprocess(DecisionSeries(decisions.begin() + i, decisions.begin() + j), max_gap);
    out.insert(out.end(), part.begin(), part.end());
    i = j;
  }
  return out;
}

void CheckBothClasses(const ScoredSegments &scored) {
  bool live = false, distractor = false;
  for (const ScoredSegment &s : scored) {
    if (!(s.Duration() > 0.0)) throw std::invalid_argument("segment with non-positive duration");
    if (!std::isfinite(s.score)) throw std::invalid_argument("non-finite score");
    (s.live ? live : distractor) = true;
  }
  if (!live || !distractor) throw std::invalid_argument("scored series must contain both classes");
}

std::vector<double> CandidateThresholds(const ScoredSegments &scored) {
  std::vector<double> t;
  t.reserve(scored.size() + 2);
  t.push_back(-kInf);
  for (const ScoredSegment &s : scored) t.push_back(s.score);
  std::sort(t.begin() + 1, t.end());
  t.erase(std::unique(t.begin() + 1, t.end()), t.end());
  t.push_back(kInf);
  return t;
}

std::vector<OperatingPoint> DetSweepReference(const ScoredSegments &scored, int max_gap) {
  CheckBothClasses(scored);
  double live, distractor;
  ClassTotals(scored, &live, &distractor);
  const std::vector<double> t = CandidateThresholds(scored);
  std::vector<OperatingPoint> out;
  out.reserve(t.size());
  for (double th : t) out.push_back(PointAt(scored, th, max_gap, live, distractor));
  return out;
}

std::vector<OperatingPoint> DetSweep(const ScoredSegments &scored, int max_gap) {
  CheckBothClasses(scored);
  double live, distractor;
  ClassTotals(scored, &live, &distractor);
  const std::vector<double> t = CandidateThresholds(scored);
  std::vector<OperatingPoint> out(t.size());
  const int n = static_cast<int>(t.size());
  // Each threshold is independent; results land in their own slot.
#pragma omp parallel for schedule(dynamic, 16)
  for (int i = 0; i < n; ++i) out[i] = PointAt(scored, t[i], max_gap, live, distractor);
  return out;
}

EerResult EerFromSweep(const std::vector<OperatingPoint> &sweep) {
  if (sweep.empty()) throw std::invalid_argument("empty sweep");
  // p_miss - p_fa goes from -1 at -inf to +1 at +inf; find the sign change.
  for (size_t i = 0; i < sweep.size(); ++i) {
    const double di = sweep[i].p_miss - sweep[i].p_fa;
    if (di < 0.0) continue;
    if (di == 0.0 || i == 0) return {sweep[i].p_miss, sweep[i].threshold};
    const OperatingPoint &a = sweep[i - 1], &b = sweep[i];
    const double da = a.p_miss - a.p_fa;
    const double alpha = -da / (di - da);
    EerResult r;
    r.eer = a.p_miss + alpha * (b.p_miss - a.p_miss);
    if (std::isfinite(a.threshold) && std::isfinite(b.threshold))
      r.threshold = a.threshold + alpha * (b.threshold - a.threshold);
    else
      r.threshold = std::isfinite(a.threshold) ? a.threshold : b.threshold;
    return r;
  }
  return {sweep.back().p_miss, sweep.back().threshold};
}

EerResult EerWithPostprocessing(const ScoredSegments &scored, int max_gap) {
  return EerFromSweep(DetSweep(scored, max_gap));
}

MetricsReport BestThresholdByDcf(const ScoredSegments &scored, int max_gap) {
  const std::vector<OperatingPoint> sweep = DetSweep(scored, max_gap);
  size_t best = 0;
  for (size_t i = 1; i < sweep.size(); ++i)
    if (sweep[i].dcf < sweep[best].dcf) best = i;
  MetricsReport r;
  r.p_miss = sweep[best].p_miss;
  r.p_fa = sweep[best].p_fa;
  r.dcf = sweep[best].dcf;
  r.threshold = sweep[best].threshold;
  r.eer = EerFromSweep(sweep).eer;
  return r;
}

MetricsReport ReportAtThreshold(const ScoredSegments &scored, double threshold, int max_gap) {
  CheckBothClasses(scored);
  const Rates rates =
      DurationNormalizedRates(PostprocessBySeries(scored, ThresholdDecisions(scored, threshold), max_gap), scored);
  MetricsReport r;
  r.p_miss = rates.p_miss;
  r.p_fa = rates.p_fa;
  r.dcf = Dcf(rates);
  r.threshold = threshold;
  r.eer = EerWithPostprocessing(scored, max_gap).eer;
  return r;
}

ScoredSegments ReadScoredJsonl(std::istream &is, bool require_score) {
  ScoredSegments out;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const nlohmann::json j = nlohmann::json::parse(line);
      ScoredSegment s;
      s.start_s = j.at("start_s").get<double>();
      s.end_s = j.at("end_s").get<double>();
      if (require_score || j.contains("score")) s.score = j.at("score").get<double>();
      const std::string label = j.at("label").get<std::string>();
      if (label == "live") s.live = true;
      else if (label == "distractor") s.live = false;
      else throw std::invalid_argument("label must be live or distractor, got " + label);
      if (!(s.end_s > s.start_s)) throw std::invalid_argument("end_s must exceed start_s");
      if (j.contains("series")) s.series = j["series"].get<int>();
      if (!out.empty() && out.back().series == s.series && s.start_s < out.back().end_s)
        throw std::invalid_argument("segments overlap or are out of order");
      out.push_back(s);
    } catch (const std::exception &e) {
      throw std::runtime_error("scores line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

ScoredSegments ReadScoredJsonlFile(const std::string &path, bool require_score) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  return ReadScoredJsonl(is, require_score);
}

void WriteScoredJsonl(const ScoredSegments &scored, std::ostream &os) {
  for (const ScoredSegment &s : scored) {
    nlohmann::ordered_json j;
    j["start_s"] = s.start_s;
    j["end_s"] = s.end_s;
    j["score"] = s.score;
    j["label"] = s.live ? "live" : "distractor";
    if (s.series != 0) j["series"] = s.series;
    os << j.dump() << '\n';
  }
}

void WriteScoredJsonlFile(const ScoredSegments &scored, const std::string &path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  WriteScoredJsonl(scored, os);
}

std::string MetricsReportJson(const MetricsReport &report, int indent) {
  nlohmann::ordered_json j;
  j["p_miss"] = report.p_miss;
  j["p_fa"] = report.p_fa;
  j["dcf"] = report.dcf;
  j["eer"] = report.eer;
  j["threshold"] = ThresholdJson(report.threshold);
  return j.dump(indent);
}

void WriteDetCsv(const std::vector<OperatingPoint> &sweep, std::ostream &os) {
  os << "threshold,p_miss,p_fa,dcf\n";
  os << std::setprecision(17);
  for (const OperatingPoint &p : sweep) {
    if (std::isinf(p.threshold)) os << (p.threshold > 0 ? "inf" : "-inf");
    else os << p.threshold;
    os << ',' << p.p_miss << ',' << p.p_fa << ',' << p.dcf << '\n';
  }
}

}  // namespace strfnet
