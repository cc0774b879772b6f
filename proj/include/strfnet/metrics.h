// include/strfnet/metrics.h

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

#ifndef STRFNET_METRICS_H_
#define STRFNET_METRICS_H_

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace strfnet {

struct ScoredSegment {
  double start_s = 0.0;
  double end_s = 0.0;
  double score = 0.0;
  bool live = false;
  // Recording the segment belongs to. Postprocessing never bridges a gap
  // across a change of series; time order is only required within one.
  int series = 0;

  double Duration() const { return end_s - start_s; }
};

using ScoredSegments = std::vector<ScoredSegment>;
// One entry per segment: 1 = live, 0 = distractor.
using DecisionSeries = std::vector<uint8_t>;

struct Rates {
  double p_miss = 0.0;
  double p_fa = 0.0;
  bool miss_defined = false;  // false when the truth has no live segment
  bool fa_defined = false;    // false when the truth has no distractor segment
};

Rates DurationNormalizedRates(const DecisionSeries &decisions, const ScoredSegments &truth);

// 0.75 p_miss + 0.25 p_fa. Throws for rates outside [0, 1].
double Dcf(double p_miss, double p_fa);
// Throws when either rate is undefined.
double Dcf(const Rates &rates);

// Live iff score >= threshold.
DecisionSeries ThresholdDecisions(const ScoredSegments &scored, double threshold);

// Flips every maximal run of distractor decisions of length <= max_gap that
// has live decisions on both sides.
DecisionSeries Postprocess(const DecisionSeries &decisions, int max_gap);
// Postprocess applied separately to each run of equal series ids.
DecisionSeries PostprocessBySeries(const ScoredSegments &scored, const DecisionSeries &decisions, int max_gap);

struct OperatingPoint {
  double threshold = 0.0;
  double p_miss = 0.0;
  double p_fa = 0.0;
  double dcf = 0.0;
};

// Candidate thresholds: -inf, every distinct score ascending, +inf.
std::vector<double> CandidateThresholds(const ScoredSegments &scored);

// One operating point per candidate threshold, ascending, computed after
// postprocessing. Both classes must be present.
std::vector<OperatingPoint> DetSweep(const ScoredSegments &scored, int max_gap);
// Serial version of the same sweep; kept as the reference for tests and
// benchmarks.
std::vector<OperatingPoint> DetSweepReference(const ScoredSegments &scored, int max_gap);

struct EerResult {
  double eer = 0.0;
  double threshold = 0.0;
};

// Crossing of p_miss and p_fa along the sweep, linearly interpolated between
// the two neighbouring operating points when no point hits it exactly.
EerResult EerFromSweep(const std::vector<OperatingPoint> &sweep);
EerResult EerWithPostprocessing(const ScoredSegments &scored, int max_gap);

struct MetricsReport {
  double p_miss = 0.0;
  double p_fa = 0.0;
  double dcf = 0.0;
  double eer = 0.0;
  double threshold = 0.0;
};

// Lowest-DCF operating point; ties go to the lower threshold. The report's
// eer field is the postprocessed EER of the same series.
MetricsReport BestThresholdByDcf(const ScoredSegments &scored, int max_gap);
// Rates and DCF at a fixed threshold, plus the series' own postprocessed EER.
MetricsReport ReportAtThreshold(const ScoredSegments &scored, double threshold, int max_gap);

void CheckBothClasses(const ScoredSegments &scored);

// JSONL, one segment per line: {"start_s","end_s","score","label"}.
// |require_score| false accepts label-only skeleton lines (score = 0).
ScoredSegments ReadScoredJsonl(std::istream &is, bool require_score = true);
ScoredSegments ReadScoredJsonlFile(const std::string &path, bool require_score = true);
void WriteScoredJsonl(const ScoredSegments &scored, std::ostream &os);
void WriteScoredJsonlFile(const ScoredSegments &scored, const std::string &path);

// Infinite thresholds are written as the strings "inf" and "-inf".
std::string MetricsReportJson(const MetricsReport &report, int indent = 2);
void WriteDetCsv(const std::vector<OperatingPoint> &sweep, std::ostream &os);

}  // namespace strfnet

#endif  // STRFNET_METRICS_H_
