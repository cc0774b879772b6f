// tests/trainer_test.cc

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


#include <cmath>
#include <limits>
#include <sstream>

#include "doctest.h"
#include "strfnet/adam.h"
#include "strfnet/random.h"
#include "strfnet/trainer.h"

namespace strfnet {
namespace {

ModelConfig TinyConfig() {
  ModelConfig c;
  c.first_layer = FirstLayerKind::kStrf;
  c.n_strf = 2;
  c.n_bands = 20;
  c.frame_rate = 100.0;
  c.n_residual_blocks = 1;
  c.residual_channels = 3;
  c.fc_dim = 4;
  c.gru_hidden = 3;
  c.gru_layers = 1;
  c.attention_dim = 2;
  c.mlp_hidden = 5;
  return c;
}

// Live items carry a drifting ridge across the bands, distractors do not.
FeatureBank ToyBank(int n, uint64_t seed) {
  RandomSource rng(seed);
  FeatureBank bank;
  for (int i = 0; i < n; ++i) {
    const bool live = i % 2 == 0;
    Spectrogram s;
    s.num_frames = 60;
    s.num_bands = 20;
    s.values.resize(60 * 20);
    for (int t = 0; t < 60; ++t)
      for (int f = 0; f < 20; ++f) {
        const double ridge = live && (t / 3) % 20 == f ? 3.0 : 0.0;
        s.values[t * 20 + f] = rng.Normal() + ridge;
      }
    bank.features.push_back(s);
    ScoredSegment seg;
    seg.start_s = 5.0 * i;
    seg.end_s = seg.start_s + 5.0;
    seg.live = live;
    bank.segments.push_back(seg);
  }
  return bank;
}

AugmentPolicy NoAugment() {
  AugmentPolicy p;
  p.n_freq_masks = p.n_time_masks = 0;
  p.time_warp_max_shift = 0;
  return p;
}

TEST_CASE("Adam takes bias-corrected steps") {
  Param p("w", 2);
  p.value = {1.0, -2.0};
  AdamConfig cfg;
  cfg.learning_rate = 0.1;
  Adam adam(cfg);
  const double g1[2] = {0.5, -3.0}, g2[2] = {-1.0, 2.0};
  p.grad = {g1[0], g1[1]};
  adam.Step({&p});
  for (int i = 0; i < 2; ++i) {
    const double expect = (i == 0 ? 1.0 : -2.0) - 0.1 * g1[i] / (std::abs(g1[i]) + cfg.epsilon);
    CHECK(p.value[i] == doctest::Approx(expect).epsilon(1e-14));
  }
  const std::vector<double> after1 = p.value;
  p.grad = {g2[0], g2[1]};
  adam.Step({&p});
  for (int i = 0; i < 2; ++i) {
    const double m = 0.9 * 0.1 * g1[i] + 0.1 * g2[i];
    const double v = 0.999 * 0.001 * g1[i] * g1[i] + 0.001 * g2[i] * g2[i];
    const double mh = m / (1.0 - 0.81), vh = v / (1.0 - 0.999 * 0.999);
    CHECK(p.value[i] == doctest::Approx(after1[i] - 0.1 * mh / (std::sqrt(vh) + cfg.epsilon)).epsilon(1e-13));
  }
  CHECK(adam.state().step == 2);
}

TEST_CASE("Adam leaves parameters alone on zero or rejected gradients") {
  Param p("w", 3), frozen("f", 1);
  p.value = {0.5, 0.25, -1.0};
  frozen.value = {7.0};
  frozen.grad = {1.0};
  frozen.trainable = false;
  Adam adam;
  adam.Step({&p, &frozen});
  CHECK(p.value == std::vector<double>{0.5, 0.25, -1.0});
  CHECK(frozen.value[0] == 7.0);
  p.grad[1] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(adam.Step({&p, &frozen}), std::runtime_error);
  CHECK(p.value == std::vector<double>{0.5, 0.25, -1.0});
  CHECK(adam.state().step == 1);
}

TEST_CASE("early stopping waits for the configured patience") {
  EarlyStopping stop(3);
  CHECK(stop.Update(1, 0.5));
  CHECK(stop.Update(2, 0.4));
  CHECK_FALSE(stop.Update(3, 0.45));
  CHECK_FALSE(stop.Update(4, 0.4));
  CHECK_FALSE(stop.ShouldStop());
  CHECK_FALSE(stop.Update(5, 0.41));
  CHECK(stop.ShouldStop());
  CHECK(stop.best_epoch() == 2);
  CHECK(stop.best() == 0.4);
  CHECK_THROWS_AS(EarlyStopping(0), std::invalid_argument);
}

TEST_CASE("steps per epoch round up and bad recipes are rejected") {
  TrainConfig c;
  c.segments_per_epoch = 640;
  c.batch_size = 64;
  CHECK(c.StepsPerEpoch() == 10);
  c.segments_per_epoch = 641;
  CHECK(c.StepsPerEpoch() == 11);
  c.learning_rate = 0.0;
  CHECK_THROWS_AS(c.Validate(), std::invalid_argument);
  c = TrainConfig();
  c.batch_size = 0;
  CHECK_THROWS_AS(c.Validate(), std::invalid_argument);
}

TEST_CASE("evaluation of oracle and constant scores") {
  ScoredSegments dev, eval;
  for (int i = 0; i < 40; ++i) {
    ScoredSegment s;
    s.start_s = 5.0 * i;
    s.end_s = s.start_s + 5.0;
    s.live = i % 4 == 0;
    s.score = s.live ? 0.9 : 0.1;
    dev.push_back(s);
    eval.push_back(s);
  }
  const Evaluation oracle = EvaluateScores(dev, eval, 1);
  CHECK(oracle.dev.dcf == 0.0);
  CHECK(oracle.eval.dcf == 0.0);
  for (ScoredSegment &s : dev) s.score = 0.5;
  for (ScoredSegment &s : eval) s.score = 0.5;
  const Evaluation flat = EvaluateScores(dev, eval, 1);
  CHECK(flat.dev.dcf == 0.25);
  CHECK(flat.eval.dcf == 0.25);
  CHECK(flat.eval.threshold == flat.dev.threshold);
}

TEST_CASE("training learns a separable toy task and logs deterministically") {
  const FeatureBank train = ToyBank(64, 1), dev = ToyBank(32, 2);
  TrainConfig tc;
  tc.learning_rate = 1e-2;
  tc.batch_size = 16;
  tc.segments_per_epoch = 64;
  tc.max_epochs = 6;
  tc.patience_epochs = 6;
  tc.seed = 3;
  tc.max_gap_segments = 0;  // alternating labels; a gap fill would merge them
  std::ostringstream log_a, log_b;
  const TrainResult a = Train(TinyConfig(), train, dev, tc, NoAugment(), &log_a);
  const TrainResult b = Train(TinyConfig(), train, dev, tc, NoAugment(), &log_b);
  REQUIRE(a.log.size() == b.log.size());
  for (size_t i = 0; i < a.log.size(); ++i) CHECK(EpochLogJson(a.log[i], false) == EpochLogJson(b.log[i], false));
  CHECK(a.best_dev_dcf == b.best_dev_dcf);
  MESSAGE("toy best dev DCF " << a.best_dev_dcf << " at epoch " << a.best_epoch);
  CHECK(a.best_dev_dcf < 0.1);
  CHECK(a.log.back().train_loss < a.log.front().train_loss);
  const ScoredSegments scored = ScoreBank(*a.best_model, dev);
  CHECK(BestThresholdByDcf(scored, tc.max_gap_segments).dcf == doctest::Approx(a.best_dev_dcf).epsilon(1e-12));
}

TEST_CASE("training stops early once dev DCF stalls") {
  const FeatureBank train = ToyBank(32, 4), dev = ToyBank(16, 5);
  TrainConfig tc;
  tc.learning_rate = 1e-9;  // effectively frozen
  tc.batch_size = 16;
  tc.segments_per_epoch = 16;
  tc.max_epochs = 20;
  tc.patience_epochs = 2;
  tc.max_gap_segments = 0;
  const TrainResult r = Train(TinyConfig(), train, dev, tc, NoAugment());
  CHECK(r.epochs_run < 20);
  CHECK(r.epochs_run - r.best_epoch == 2);
}

}  // namespace
}  // namespace strfnet
