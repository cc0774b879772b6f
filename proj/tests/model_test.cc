// tests/model_test.cc

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

#include "doctest.h"
#include "oracles.h"
#include "strfnet/adam.h"
#include "strfnet/model.h"
#include "strfnet/random.h"

namespace strfnet {
namespace {

// A small model on a 20-band grid, fast enough for exhaustive checks.
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

Spectrogram RandomSpec(int frames, int bands, RandomSource *rng) {
  Spectrogram s;
  s.num_frames = frames;
  s.num_bands = bands;
  s.values.resize(static_cast<size_t>(frames) * bands);
  for (double &v : s.values) v = rng->Normal();
  return s;
}

TEST_CASE("parameter count of a tiny model matches a hand count") {
  // strf 2 x 4; first BN 2 x 2; block: conv 3x3 2->3 and 3->3 without bias,
  // two BNs of 3, 1x1 projection 2->3 with bias; fc 3 channels x 3 bands -> 4;
  // one bidirectional GRU layer 4 -> 3; attention 6 -> 2; head 6 -> 5 -> 2.
  const size_t strf = 8, bn0 = 4;
  const size_t block = 3 * 2 * 9 + 6 + 3 * 3 * 9 + 6 + (3 * 2 + 3);
  const size_t fc = 3 * 3 * 4 + 4;
  const size_t gru = 2 * (9 * 4 + 9 * 3 + 9 + 9);
  const size_t att = 2 * 6 + 2 + 2;
  const size_t head = 6 * 5 + 5 + 5 * 2 + 2;
  const Model model(TinyConfig(), 1);
  CHECK(TinyConfig().OutputBands() == 3);
  CHECK(model.ParameterCount() == strf + bn0 + block + fc + gru + att + head);
  ModelConfig fixed = TinyConfig();
  fixed.learnable_strf = false;
  CHECK(Model(fixed, 1).ParameterCount() == model.ParameterCount() - strf);
}

TEST_CASE("sixty STRF kernels contribute 240 trainable parameters") {
  ModelConfig c;
  c.n_residual_blocks = 0;
  c.gru_hidden = 8;
  c.fc_dim = 8;
  c.attention_dim = 8;
  c.mlp_hidden = 8;
  ModelConfig fixed = c;
  fixed.learnable_strf = false;
  CHECK(Model(c, 3).ParameterCount() - Model(fixed, 3).ParameterCount() == 240);
}

TEST_CASE("the full-scale hybrid lands in the expected parameter range") {
  ModelConfig c;
  c.first_layer = FirstLayerKind::kHybrid;
  c.n_generic = 60;
  c.n_strf = 60;
  const size_t n = Model(c, 5).ParameterCount();
  MESSAGE("full-scale hybrid parameters: " << n);
  CHECK(n >= 1500000);
  CHECK(n <= 3500000);
}

TEST_CASE("invalid model configurations are rejected") {
  ModelConfig c = TinyConfig();
  c.first_layer = FirstLayerKind::kHybrid;
  CHECK_THROWS_AS(Model(c, 1), std::invalid_argument);
  c = TinyConfig();
  c.n_bands = 10;
  CHECK_THROWS_AS(Model(c, 1), std::invalid_argument);
  CHECK_THROWS_AS(FirstLayerFromName("dense"), std::invalid_argument);
}

TEST_CASE("same seed gives the same model and predictions") {
  RandomSource rng(31);
  std::vector<Spectrogram> batch;
  for (int i = 0; i < 3; ++i) batch.push_back(RandomSpec(60, 20, &rng));
  const Model a(TinyConfig(), 9), b(TinyConfig(), 9), c(TinyConfig(), 10);
  const auto pa = a.PredictLive(batch), pb = b.PredictLive(batch), pc = c.PredictLive(batch);
  CHECK(pa == pb);
  CHECK(pa != pc);
}

TEST_CASE("evaluation is independent of batch composition") {
  RandomSource rng(32);
  std::vector<Spectrogram> batch;
  for (int i = 0; i < 4; ++i) batch.push_back(RandomSpec(60 + 5 * i, 20, &rng));
  const Model m(TinyConfig(), 2);
  const auto joint = m.PredictLive(batch);
  for (int i = 0; i < 4; ++i) {
    const double p = m.PredictLive(batch[i]);
    CHECK(p > 0.0);
    CHECK(p < 1.0);
    CHECK(std::abs(p - joint[i]) < 1e-10);
  }
}

TEST_CASE("static STRF kernels stay fixed while the rest trains") {
  RandomSource rng(33);
  std::vector<Spectrogram> batch;
  for (int i = 0; i < 4; ++i) batch.push_back(RandomSpec(60, 20, &rng));
  const std::vector<int> labels{0, 1, 0, 1};
  ModelConfig fixed_cfg = TinyConfig();
  fixed_cfg.learnable_strf = false;
  Model learn(TinyConfig(), 4), fixed(fixed_cfg, 4);
  CHECK(learn.PredictLive(batch) == fixed.PredictLive(batch));
  const std::vector<double> before = fixed.strf_layer().strf.value;
  AdamConfig ac;
  ac.learning_rate = 1e-2;
  Adam adam_l(ac), adam_f(ac);
  for (int step = 0; step < 3; ++step) {
    learn.ForwardBackward(batch, labels);
    adam_l.Step(learn.Params());
    fixed.ForwardBackward(batch, labels);
    adam_f.Step(fixed.Params());
  }
  CHECK(fixed.strf_layer().strf.value == before);
  CHECK(learn.strf_layer().strf.value != before);
}

TEST_CASE("training loss decreases on a fixed batch") {
  RandomSource rng(34);
  std::vector<Spectrogram> batch;
  for (int i = 0; i < 6; ++i) batch.push_back(RandomSpec(60, 20, &rng));
  const std::vector<int> labels{0, 1, 0, 1, 1, 0};
  Model m(TinyConfig(), 6);
  AdamConfig ac;
  ac.learning_rate = 1e-2;
  Adam adam(ac);
  const double first = m.ForwardBackward(batch, labels);
  adam.Step(m.Params());
  double last = first;
  for (int step = 0; step < 30; ++step) {
    last = m.ForwardBackward(batch, labels);
    adam.Step(m.Params());
  }
  CHECK(last < first);
}

TEST_CASE("model gradients agree with central differences end to end") {
  for (uint64_t seed = 0; seed < 5; ++seed) {
    const testing::GradReport r = testing::CheckModelGradients(seed);
    INFO("seed " << seed << " rel " << r.max_rel);
    CHECK(r.max_rel < 1e-4);
  }
}

}  // namespace
}  // namespace strfnet
