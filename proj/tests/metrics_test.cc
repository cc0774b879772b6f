// tests/metrics_test.cc

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


#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "doctest.h"
#include "oracles.h"
#include "strfnet/metrics.h"
#include "strfnet/random.h"

namespace strfnet {
namespace {

constexpr double kExact = 1e-12;

// Consecutive 5 s segments in one series.
ScoredSegments Series(const std::vector<double> &scores, const std::vector<bool> &live) {
  ScoredSegments s;
  for (size_t i = 0; i < scores.size(); ++i) {
    ScoredSegment seg;
    seg.start_s = 5.0 * i;
    seg.end_s = seg.start_s + 5.0;
    seg.score = scores[i];
    seg.live = live[i];
    s.push_back(seg);
  }
  return s;
}

DecisionSeries FromString(const std::string &s) {
  DecisionSeries d;
  for (char c : s) d.push_back(c == 'L' ? 1 : 0);
  return d;
}

TEST_CASE("duration-normalized rates count missed and accepted time") {
  std::vector<double> scores(20, 0.0);
  std::vector<bool> live(20, false);
  for (int i = 0; i < 10; ++i) live[i] = true;
  const ScoredSegments truth = Series(scores, live);
  DecisionSeries d(20, 0);
  for (int i = 1; i < 10; ++i) d[i] = 1;
  d[12] = d[17] = 1;
  const Rates r = DurationNormalizedRates(d, truth);
  CHECK(r.p_miss == doctest::Approx(0.1));
  CHECK(r.p_fa == doctest::Approx(0.2));
  CHECK(Dcf(r) == doctest::Approx(0.125));
  DecisionSeries perfect(20, 0);
  for (int i = 0; i < 10; ++i) perfect[i] = 1;
  CHECK(Dcf(DurationNormalizedRates(perfect, truth)) == 0.0);
  const Rates all_d = DurationNormalizedRates(DecisionSeries(20, 0), truth);
  CHECK(all_d.p_miss == 1.0);
  CHECK(all_d.p_fa == 0.0);
}

TEST_CASE("a shorter final segment weighs by its duration") {
  ScoredSegments s = Series({0.9, 0.1, 0.8}, {true, false, true});
  s[2].end_s = s[2].start_s + 2.5;
  const Rates r = DurationNormalizedRates(FromString("LDD"), s);
  CHECK(r.p_miss == doctest::Approx(2.5 / 7.5));
}

TEST_CASE("DCF weighs misses three times as much as false alarms") {
  CHECK(Dcf(0.1, 0.2) == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(Dcf(0.0, 0.0) == 0.0);
  CHECK(Dcf(1.0, 0.0) == 0.75);
  CHECK_THROWS_AS(Dcf(1.1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(Dcf(0.0, -0.1), std::invalid_argument);
  ScoredSegments only_live = Series({0.2, 0.3}, {true, true});
  const Rates r = DurationNormalizedRates(FromString("LL"), only_live);
  CHECK_FALSE(r.fa_defined);
  CHECK_THROWS(Dcf(r));
}

TEST_CASE("postprocessing fills brief distractor gaps between live runs") {
  CHECK(Postprocess(FromString("LDL"), 1) == FromString("LLL"));
  CHECK(Postprocess(FromString("LDDDL"), 1) == FromString("LDDDL"));
  CHECK(Postprocess(FromString("LDDL"), 2) == FromString("LLLL"));
  CHECK(Postprocess(FromString("DLDLD"), 1) == FromString("DLLLD"));
  CHECK(Postprocess(FromString("DDDD"), 3) == FromString("DDDD"));
  CHECK(Postprocess(FromString("LDL"), 0) == FromString("LDL"));
  CHECK_THROWS_AS(Postprocess(FromString("LDL"), -1), std::invalid_argument);
  RandomSource rng(41);
  for (int i = 0; i < 200; ++i) {
    DecisionSeries d(rng.UniformInt(1, 30));
    for (auto &v : d) v = rng.Bernoulli(0.5);
    const int gap = static_cast<int>(rng.UniformInt(0, 3));
    const DecisionSeries once = Postprocess(d, gap);
    CHECK(Postprocess(once, gap) == once);
    for (size_t j = 0; j < d.size(); ++j) CHECK(once[j] >= d[j]);
  }
}

TEST_CASE("postprocessing does not bridge series boundaries") {
  ScoredSegments s = Series({0.9, 0.1, 0.9}, {true, false, true});
  s[1].series = 1;
  s[2].series = 1;
  s[1].start_s = 0.0;
  s[1].end_s = 5.0;
  s[2].start_s = 5.0;
  s[2].end_s = 10.0;
  CHECK(PostprocessBySeries(s, FromString("LDL"), 1) == FromString("LDL"));
}

TEST_CASE("sweep, threshold choice and EER match brute force on 1000 random series") {
  int compared = 0;
  for (uint64_t seed = 0; seed < 1000; ++seed) {
    const ScoredSegments s = testing::RandomScoredSeries(seed, 200);
    for (int gap = 0; gap <= 2; ++gap) {
      const std::vector<OperatingPoint> sweep = DetSweep(s, gap);
      const std::vector<testing::BrutePoint> brute = testing::BruteSweep(s, gap);
      REQUIRE(sweep.size() == brute.size());
      for (size_t i = 0; i < sweep.size(); ++i) {
        REQUIRE(sweep[i].threshold == brute[i].threshold);
        REQUIRE(std::abs(sweep[i].p_miss - brute[i].p_miss) <= kExact);
        REQUIRE(std::abs(sweep[i].p_fa - brute[i].p_fa) <= kExact);
        REQUIRE(std::abs(sweep[i].dcf - brute[i].dcf) <= kExact);
      }
      const MetricsReport best = BestThresholdByDcf(s, gap);
      const testing::BrutePoint bb = testing::BruteBest(s, gap);
      REQUIRE(best.threshold == bb.threshold);
      REQUIRE(std::abs(best.dcf - bb.dcf) <= kExact);
      REQUIRE(std::abs(EerWithPostprocessing(s, gap).eer - testing::BruteEer(s, gap)) <= kExact);
      const double t = s[seed % s.size()].score;
      REQUIRE(PostprocessBySeries(s, ThresholdDecisions(s, t), gap) ==
              testing::BrutePostprocess(s, ThresholdDecisions(s, t), gap));
      ++compared;
    }
  }
  CHECK(compared == 3000);
}

TEST_CASE("the fast sweep equals the reference sweep") {
  for (uint64_t seed = 0; seed < 100; ++seed) {
    const ScoredSegments s = testing::RandomScoredSeries(seed + 5000, 200);
    const auto a = DetSweep(s, 1), b = DetSweepReference(s, 1);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].threshold == b[i].threshold);
      CHECK(std::abs(a[i].dcf - b[i].dcf) <= kExact);
    }
  }
}

TEST_CASE("the six-score example has EER one third") {
  const ScoredSegments s = Series({0.9, 0.8, 0.4, 0.6, 0.2, 0.1}, {true, true, true, false, false, false});
  CHECK(EerWithPostprocessing(s, 0).eer == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(testing::BruteEer(s, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  const MetricsReport best = BestThresholdByDcf(s, 0);
  const testing::BrutePoint bb = testing::BruteBest(s, 0);
  CHECK(best.dcf == doctest::Approx(bb.dcf).epsilon(1e-15));
  CHECK(best.threshold == bb.threshold);
}

TEST_CASE("separable and constant scores give the boundary results") {
  const ScoredSegments sep = Series({0.9, 0.7, 0.3, 0.8, 0.1}, {true, true, false, true, false});
  CHECK(EerWithPostprocessing(sep, 0).eer == 0.0);
  const MetricsReport best = BestThresholdByDcf(sep, 0);
  CHECK(best.dcf == 0.0);
  CHECK(best.threshold > 0.3);
  CHECK(best.threshold <= 0.7);
  const ScoredSegments flat = Series({0.5, 0.5, 0.5, 0.5}, {true, false, true, false});
  CHECK(BestThresholdByDcf(flat, 0).dcf == 0.25);
  CHECK(EerWithPostprocessing(flat, 0).eer == doctest::Approx(0.5));
  CHECK_THROWS_AS(BestThresholdByDcf(Series({0.1, 0.2}, {true, true}), 0), std::invalid_argument);
}

TEST_CASE("EER of shuffled labels is one half") {
  RandomSource rng(42);
  std::vector<double> scores(10000);
  std::vector<bool> live(10000);
  for (size_t i = 0; i < scores.size(); ++i) {
    scores[i] = rng.Uniform();
    live[i] = rng.Bernoulli(0.5);
  }
  const double eer = EerWithPostprocessing(Series(scores, live), 0).eer;
  CHECK(std::abs(eer - 0.5) <= 0.03);
}

TEST_CASE("monotone score transforms leave the metrics unchanged") {
  for (uint64_t seed = 0; seed < 50; ++seed) {
    const ScoredSegments s = testing::RandomScoredSeries(seed + 9000, 100);
    ScoredSegments t = s;
    for (ScoredSegment &seg : t) seg.score = std::pow(seg.score, 3.0) * 0.5 + 0.1;
    CHECK(EerWithPostprocessing(s, 1).eer == doctest::Approx(EerWithPostprocessing(t, 1).eer).epsilon(1e-12));
    CHECK(BestThresholdByDcf(s, 1).dcf == doctest::Approx(BestThresholdByDcf(t, 1).dcf).epsilon(1e-12));
  }
}

TEST_CASE("zero gap postprocessed EER equals a plain EER") {
  for (uint64_t seed = 0; seed < 50; ++seed) {
    const ScoredSegments s = testing::RandomScoredSeries(seed + 7000, 150);
    // Plain EER from the sweep of raw decisions.
    std::vector<OperatingPoint> plain;
    for (double t : CandidateThresholds(s)) {
      const Rates r = DurationNormalizedRates(ThresholdDecisions(s, t), s);
      plain.push_back({t, r.p_miss, r.p_fa, Dcf(r)});
    }
    CHECK(EerFromSweep(plain).eer == doctest::Approx(EerWithPostprocessing(s, 0).eer).epsilon(1e-12));
  }
}

TEST_CASE("scored segments survive a JSONL round trip") {
  ScoredSegments s = testing::RandomScoredSeries(3, 40);
  std::stringstream ss;
  WriteScoredJsonl(s, ss);
  const ScoredSegments back = ReadScoredJsonl(ss);
  REQUIRE(back.size() == s.size());
  for (size_t i = 0; i < s.size(); ++i) {
    CHECK(back[i].start_s == s[i].start_s);
    CHECK(back[i].end_s == s[i].end_s);
    CHECK(back[i].score == s[i].score);
    CHECK(back[i].live == s[i].live);
    CHECK(back[i].series == s[i].series);
  }
  std::stringstream bad("{\"start_s\":0,\"end_s\":5,\"score\":0.5,\"label\":\"maybe\"}\n");
  CHECK_THROWS(ReadScoredJsonl(bad));
}

TEST_CASE("reports and DET tables serialize infinite thresholds") {
  MetricsReport r;
  r.threshold = std::numeric_limits<double>::infinity();
  const std::string json = MetricsReportJson(r);
  CHECK(json.find("inf") != std::string::npos);
  std::ostringstream csv;
  WriteDetCsv(DetSweep(Series({0.9, 0.1}, {true, false}), 0), csv);
  CHECK(csv.str().find("threshold,p_miss,p_fa,dcf") == 0);
}

}  // namespace
}  // namespace strfnet
